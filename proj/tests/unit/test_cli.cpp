#include "doctest.h"

#include <filesystem>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rarerel/cli.hpp"
#include "rarerel/io.hpp"

using namespace rarerel;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Scratch directory holding a copy of the fixture corpus, removed on exit.
struct Workspace {
  fs::path root;
  Workspace() {
    std::random_device rd;
    root = fs::temp_directory_path() / ("rarerel_cli_" + std::to_string(rd()));
    fs::create_directories(root);
    fs::copy(TEST_DATA_DIR "/corpus", root / "corpus");
  }
  ~Workspace() { fs::remove_all(root); }
  std::string path(const std::string& rel) const { return (root / rel).string(); }
};

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return files;
}

const std::string kGold = TEST_DATA_DIR "/scoring/gold.tsv";
const std::string kPred = TEST_DATA_DIR "/scoring/pred.tsv";

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"score", "--bogus"}).code == 2);
  CHECK(run({"encode", "--schema", "xml", "--in", "x", "--out", "y"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("repair") != std::string::npos);
}

TEST_CASE("missing input is fatal and named") {
  const auto r = run({"repair", "--in", "/nonexistent/rarerel", "--out", "/tmp/x"});
  CHECK(r.code == 1);
  CHECK(r.err.find("/nonexistent/rarerel") != std::string::npos);
  const auto s = run({"score", "--gold", "/nonexistent/g.tsv", "--pred", kPred});
  CHECK(s.code == 1);
  CHECK(s.err.find("/nonexistent/g.tsv") != std::string::npos);
}

TEST_CASE("score prints the fixture summary") {
  const auto r = run({"score", "--gold", kGold, "--pred", kPred});
  CHECK(r.code == 0);
  CHECK(r.out.find("P=0.5 R=0.5 F=0.5") != std::string::npos);
  const auto agnostic = run({"score", "--gold", kGold, "--pred", kPred, "--type-agnostic"});
  CHECK(agnostic.code == 0);
}

TEST_CASE("errors subcommand writes an audit file") {
  Workspace ws;
  const auto r = run({"errors", "--gold", kGold, "--pred", kPred, "--audit", ws.path("audit.tsv")});
  CHECK(r.code == 0);
  CHECK(r.out.find("partial_match\t1") != std::string::npos);
  CHECK(r.out.find("missing\t1") != std::string::npos);
  CHECK(read_file(ws.path("audit.tsv")).find("progressive neurological disorder") != std::string::npos);
}

TEST_CASE("repair writes fixed pairs and a log") {
  Workspace ws;
  const auto before = snapshot(ws.path("corpus"));
  const auto r = run({"repair", "--in", ws.path("corpus"), "--out", ws.path("fixed"), "--log", ws.path("repairs.txt")});
  REQUIRE(r.code == 0);
  CHECK(snapshot(ws.path("corpus")) == before);
  const auto log = read_file(ws.path("repairs.txt"));
  CHECK(log.find("rickets relation_argument R5 Arg2:T90 -> Arg2:T9") != std::string::npos);
  CHECK(log.find("balantidiasis span_boundary T2") != std::string::npos);
  CHECK(log.find("fingers fragment_order T2") != std::string::npos);
  CHECK(read_file(ws.path("fixed/rickets.ann")).find("anaphora Arg1:T1 Arg2:T9\n") != std::string::npos);
  CHECK(read_file(ws.path("fixed/balantidiasis.ann")).find("increases_risk_of") != std::string::npos);

  CHECK(run({"repair", "--in", ws.path("corpus"), "--out", ws.path("corpus")}).code == 1);
}

TEST_CASE("repeat runs are byte identical") {
  Workspace ws;
  const auto before = snapshot(ws.path("corpus"));
  auto pipeline = [&](const std::string& tag) {
    const auto base = ws.path(tag);
    REQUIRE(run({"repair", "--in", ws.path("corpus"), "--out", base + "/fixed", "--log", base + "/log.txt"}).code == 0);
    REQUIRE(run({"split", "--in", base + "/fixed", "--out", base + "/split", "--ratios", "0.5,0.25,0.25", "--seed",
                 "9"})
                .code == 0);
    REQUIRE(run({"stats", "--in", base + "/split", "--out", base + "/stats.json"}).code == 0);
    REQUIRE(run({"flatten", "--in", base + "/fixed", "--out", base + "/flat"}).code == 0);
    for (const char* schema : {"seq2rel", "rel-is", "natural-lang"})
      REQUIRE(run({"encode", "--in", base + "/split", "--out", base + "/enc-" + schema, "--schema", schema,
                   "--copy-instruct"})
                  .code == 0);
    REQUIRE(run({"decode", "--in", base + "/enc-seq2rel/train.jsonl", "--out", base + "/decoded.tsv", "--schema",
                 "seq2rel", "--log", base + "/decode.log"})
                .code == 0);
    return snapshot(base);
  };
  const auto a = pipeline("a");
  const auto b = pipeline("b");
  CHECK(a.size() > 20);
  CHECK(a == b);
  CHECK(snapshot(ws.path("corpus")) == before);

  // Decoding the encoded targets reproduces the gold file.
  CHECK(a.at("decoded.tsv") == a.at("enc-seq2rel/train.gold.tsv"));
  const auto stats = nlohmann::json::parse(a.at("stats.json"));
  CHECK(stats["train"]["documents"].get<int>() + stats["dev"]["documents"].get<int>() +
            stats["test"]["documents"].get<int>() ==
        4);
  const auto first = nlohmann::json::parse(a.at("enc-rel-is/train.jsonl").substr(0, a.at("enc-rel-is/train.jsonl").find('\n')));
  CHECK(first["source"].get<std::string>().rfind("From the given abstract", 0) == 0);
  CHECK(a.count("enc-seq2rel/special_tokens.txt") == 1);
  CHECK(a.count("flat/coord.offsets.json") == 1);
}

TEST_CASE("split by file lists") {
  Workspace ws;
  write_file(ws.path("train.list"), "coord\nrickets\n");
  write_file(ws.path("dev.list"), "fingers\n");
  write_file(ws.path("test.list"), "balantidiasis\n");
  const auto r = run({"split", "--in", ws.path("corpus"), "--out", ws.path("out"), "--train-list",
                      ws.path("train.list"), "--dev-list", ws.path("dev.list"), "--test-list", ws.path("test.list")});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(ws.path("out/train/coord.ann")));
  CHECK(fs::exists(ws.path("out/test/balantidiasis.txt")));
  CHECK(read_file(ws.path("out/train.list")) == "coord\nrickets\n");

  write_file(ws.path("bad.list"), "coord\nghost\n");
  const auto bad = run({"split", "--in", ws.path("corpus"), "--out", ws.path("out2"), "--train-list",
                        ws.path("bad.list")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("ghost") != std::string::npos);
}

TEST_CASE("flatten reports documents it cannot rewrite") {
  Workspace ws;
  fs::create_directories(ws.path("gap"));
  write_file(ws.path("gap/g.txt"), "aaaa bbbb cccc");
  write_file(ws.path("gap/g.ann"), "T1\tSIGN 0 4;10 14\taaaa cccc\nT2\tSIGN 5 9\tbbbb\n");
  const auto r = run({"flatten", "--in", ws.path("gap"), "--out", ws.path("flat")});
  CHECK(r.code == 1);
  CHECK(r.err.find("T2") != std::string::npos);
}

TEST_CASE("strict mode rejects orphaned files") {
  Workspace ws;
  write_file(ws.path("corpus/orphan.txt"), "text");
  CHECK(run({"stats", "--in", ws.path("corpus"), "--strict"}).code == 1);
  const auto lax = run({"stats", "--in", ws.path("corpus")});
  CHECK(lax.code == 0);
  CHECK(lax.err.find("orphan") != std::string::npos);
}
