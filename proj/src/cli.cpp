#include "rarerel/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rarerel/corpus.hpp"
#include "rarerel/eval.hpp"
#include "rarerel/flatten.hpp"
#include "rarerel/io.hpp"
#include "rarerel/repair.hpp"
#include "rarerel/schema.hpp"
#include "rarerel/text.hpp"

namespace fs = std::filesystem;

namespace rarerel {

namespace {

struct CliConfig {
  std::string in;
  std::string out;
  std::string log;
  bool strict = false;

  std::string schema = "seq2rel";
  bool copy_instruct = false;
  std::string noun_map;
  bool no_normalize = false;

  std::string ratios;
  std::uint64_t seed = 0;
  std::string train_list, dev_list, test_list;

  std::string gold, pred, audit;
  bool strict_case = false;
  bool type_agnostic = false;
};

class FatalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NamedSplit {
  std::string name;
  std::vector<AnnotatedDocument> documents;
};

void require_path(const std::string& value, const char* flag) {
  if (value.empty()) throw FatalError(std::string("missing required ") + flag);
  if (!fs::exists(value)) throw FatalError(std::string("input path does not exist: ") + value);
}

void require_distinct(const std::string& in, const std::string& out) {
  if (out.empty()) throw FatalError("missing required --out");
  if (fs::exists(out) && fs::equivalent(in, out)) throw FatalError("--out must differ from --in: " + out);
}

// A corpus root either holds train/dev/test subdirectories or is one split.
std::vector<NamedSplit> load_splits(const std::string& in, bool strict, std::ostream& err) {
  std::vector<NamedSplit> splits;
  auto load = [&](const fs::path& dir, std::string label) {
    auto loaded = load_corpus(dir, strict);
    for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
    splits.push_back({std::move(label), std::move(loaded.documents)});
  };
  for (const char* name : {"train", "dev", "test"})
    if (fs::is_directory(fs::path(in) / name)) load(fs::path(in) / name, name);
  if (splits.empty()) load(in, "all");
  return splits;
}

fs::path split_dir(const std::string& root, const NamedSplit& split) {
  return split.name == "all" ? fs::path(root) : fs::path(root) / split.name;
}

PredicateNounMap load_nouns(const CliConfig& cfg) {
  if (cfg.noun_map.empty()) return {};
  require_path(cfg.noun_map, "--noun-map");
  return PredicateNounMap::from_json(read_file(cfg.noun_map));
}

SchemaKind schema_kind(const CliConfig& cfg) {
  auto kind = parse_schema_kind(cfg.schema);
  if (!kind) throw FatalError("unknown schema " + cfg.schema);
  return *kind;
}

std::vector<LabeledTriple> load_triples(const std::string& path, const char* flag) {
  require_path(path, flag);
  std::ifstream in(path);
  try {
    return read_triples(in);
  } catch (const TripleFileError& e) {
    throw FatalError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

int cmd_repair(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.in, "--in");
  require_distinct(cfg.in, cfg.out);
  std::string log_text;
  std::size_t relations = 0, entities = 0, relations_fixed = 0, spans_fixed = 0, unresolved = 0;
  for (const auto& split : load_splits(cfg.in, cfg.strict, err)) {
    for (const auto& doc : split.documents) {
      auto [fixed, log] = repair_all(doc);
      relations += doc.relations.size();
      entities += doc.entities.size();
      for (const auto& e : log.entries)
        if (e.rule == RepairRule::kRelationArgument && e.after != kUnresolved) ++relations_fixed;
      spans_fixed += log.touched(RepairRule::kSpanBoundary);
      unresolved += fixed.unresolved_refs.size();
      log_text += log.to_string();
      write_document(split_dir(cfg.out, split), fixed);
    }
  }
  if (!cfg.log.empty()) write_file(cfg.log, log_text);
  out << "relations: " << relations << ", arguments rewritten: " << relations_fixed
      << ", still unresolved: " << unresolved << '\n'
      << "entities: " << entities << ", span repairs: " << spans_fixed << '\n';
  return 0;
}

int cmd_stats(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.in, "--in");
  std::vector<NamedStats> columns;
  if (!cfg.train_list.empty() || !cfg.dev_list.empty() || !cfg.test_list.empty()) {
    std::vector<AnnotatedDocument> all;
    for (auto& s : load_splits(cfg.in, cfg.strict, err))
      for (auto& d : s.documents) all.push_back(std::move(d));
    SplitSpec spec;
    spec.mode = SplitSpec::Mode::kFileList;
    const std::string* lists[3] = {&cfg.train_list, &cfg.dev_list, &cfg.test_list};
    for (int i = 0; i < 3; ++i) {
      if (lists[i]->empty()) continue;
      require_path(*lists[i], "split list");
      spec.lists[i] = read_manifest(*lists[i]);
    }
    auto parts = split_corpus(all, spec);
    columns = {{"train", corpus_statistics(parts.train)},
               {"dev", corpus_statistics(parts.dev)},
               {"test", corpus_statistics(parts.test)}};
  } else {
    for (const auto& s : load_splits(cfg.in, cfg.strict, err)) columns.push_back({s.name, corpus_statistics(s.documents)});
  }
  out << stats_table(columns);
  if (!cfg.out.empty()) write_file(cfg.out, stats_json(columns));
  return 0;
}

int cmd_split(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.in, "--in");
  require_distinct(cfg.in, cfg.out);
  std::vector<AnnotatedDocument> all;
  for (auto& s : load_splits(cfg.in, cfg.strict, err))
    for (auto& d : s.documents) all.push_back(std::move(d));
  if (all.empty()) throw FatalError("no documents in " + cfg.in);

  SplitSpec spec;
  spec.seed = cfg.seed;
  if (!cfg.train_list.empty() || !cfg.dev_list.empty() || !cfg.test_list.empty()) {
    spec.mode = SplitSpec::Mode::kFileList;
    const std::string* lists[3] = {&cfg.train_list, &cfg.dev_list, &cfg.test_list};
    for (int i = 0; i < 3; ++i) {
      if (lists[i]->empty()) continue;
      require_path(*lists[i], "split list");
      spec.lists[i] = read_manifest(*lists[i]);
    }
  } else if (!cfg.ratios.empty()) {
    const auto parts = split(cfg.ratios, ',');
    if (parts.size() != 3) throw FatalError("--ratios needs three comma-separated values");
    for (int i = 0; i < 3; ++i) {
      try {
        spec.ratios[i] = std::stod(std::string(parts[i]));
      } catch (const std::exception&) {
        throw FatalError("bad ratio '" + std::string(parts[i]) + "'");
      }
    }
  }
  const auto parts = split_corpus(all, spec);
  const std::pair<const char*, const std::vector<AnnotatedDocument>*> named[] = {
      {"train", &parts.train}, {"dev", &parts.dev}, {"test", &parts.test}};
  for (const auto& [name, docs] : named) {
    std::string manifest;
    for (const auto& d : *docs) {
      write_document(fs::path(cfg.out) / name, d);
      manifest += d.doc_id() + '\n';
    }
    fs::create_directories(fs::path(cfg.out) / name);
    write_file(fs::path(cfg.out) / (std::string(name) + ".list"), manifest);
    out << name << ": " << docs->size() << " documents\n";
  }
  return 0;
}

int cmd_flatten(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.in, "--in");
  require_distinct(cfg.in, cfg.out);
  std::size_t rewritten = 0, failures = 0;
  for (const auto& split : load_splits(cfg.in, cfg.strict, err)) {
    for (const auto& doc : split.documents) {
      try {
        auto [flat, map] = flatten_document(doc);
        if (!map.is_identity(doc.document.length())) ++rewritten;
        const fs::path dir = split_dir(cfg.out, split);
        write_document(dir, flat);
        write_file(dir / (doc.doc_id() + ".offsets.json"), map.to_json(doc.doc_id()));
      } catch (const FlattenError& e) {
        err << "error: " << e.what() << '\n';
        ++failures;
      }
    }
  }
  out << "rewritten documents: " << rewritten << ", failures: " << failures << '\n';
  return failures ? 1 : 0;
}

int cmd_encode(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  require_path(cfg.in, "--in");
  require_distinct(cfg.in, cfg.out);
  const SchemaKind kind = schema_kind(cfg);
  const PredicateNounMap nouns = load_nouns(cfg);
  std::string log_text;
  for (const auto& split : load_splits(cfg.in, cfg.strict, err)) {
    std::string records;
    std::vector<LabeledTriple> gold;
    for (const auto& doc : split.documents) {
      for (const auto& ref : doc.unresolved_refs)
        log_text += doc.doc_id() + " skipped relation " + ref.relation_id + ": " + std::string(name(ref.slot)) + ":" +
                    ref.entity_id + " does not resolve\n";
      nlohmann::ordered_json record;
      record["doc_id"] = doc.doc_id();
      record["source"] = build_prompt(doc.document.text(), cfg.copy_instruct);
      record["target"] = encode_target(doc, kind, nouns);
      records += record.dump() + '\n';
      for (auto& t : document_triples(doc)) gold.push_back({doc.doc_id(), std::move(t)});
    }
    write_file(fs::path(cfg.out) / (split.name + ".jsonl"), records);
    std::ostringstream tsv;
    write_triples(tsv, gold);
    write_file(fs::path(cfg.out) / (split.name + ".gold.tsv"), tsv.str());
    out << split.name << ": " << split.documents.size() << " examples\n";
  }
  if (kind == SchemaKind::kSeq2Rel) {
    std::string vocab;
    for (const auto& t : special_tokens()) vocab += t + '\n';
    write_file(fs::path(cfg.out) / "special_tokens.txt", vocab);
  }
  if (!cfg.log.empty()) write_file(cfg.log, log_text);
  else err << log_text;
  return 0;
}

// Generations keyed by doc id: a directory of <doc_id>.txt files or a JSONL
// file whose records carry doc_id and one of generation/prediction/target.
std::map<std::string, std::string> load_generations(const std::string& in) {
  std::map<std::string, std::string> generations;
  if (fs::is_directory(in)) {
    for (const auto& entry : fs::directory_iterator(in))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        generations[entry.path().stem().string()] = read_file(entry.path());
    return generations;
  }
  std::istringstream lines(read_file(in));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      std::string text;
      for (const char* key : {"generation", "prediction", "target"})
        if (record.contains(key)) {
          text = record.at(key).get<std::string>();
          break;
        }
      generations[record.at("doc_id").get<std::string>()] = text;
    } catch (const nlohmann::json::exception& e) {
      throw FatalError(in + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return generations;
}

int cmd_decode(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  require_path(cfg.in, "--in");
  if (cfg.out.empty()) throw FatalError("missing required --out");
  const SchemaKind kind = schema_kind(cfg);
  const PredicateNounMap nouns = load_nouns(cfg);
  std::vector<LabeledTriple> triples;
  std::string report;
  std::size_t skipped = 0;
  for (const auto& [doc_id, generation] : load_generations(cfg.in)) {
    const std::string text = cfg.no_normalize ? generation : normalize_generation(generation);
    auto decoded = decode_target(text, kind, nouns);
    for (auto& t : decoded.triples) triples.push_back({doc_id, std::move(t)});
    for (const auto& s : decoded.skipped) report += doc_id + "\tskipped\t" + s.reason + "\t" + s.text + '\n';
    skipped += decoded.skipped.size();
  }
  std::ostringstream tsv;
  write_triples(tsv, triples);
  write_file(cfg.out, tsv.str());
  if (!cfg.log.empty()) write_file(cfg.log, report);
  out << "decoded triples: " << triples.size() << ", skipped segments: " << skipped << '\n';
  return 0;
}

ScoreOptions score_options(const CliConfig& cfg) { return {cfg.strict_case, cfg.type_agnostic}; }

int cmd_score(const CliConfig& cfg, std::ostream& out, std::ostream&) {
  const auto gold = load_triples(cfg.gold, "--gold");
  const auto pred = load_triples(cfg.pred, "--pred");
  const auto report = score(gold, pred, score_options(cfg));
  out << report.table() << report.summary() << '\n';
  if (!cfg.out.empty()) write_file(cfg.out, report.json());
  return 0;
}

int cmd_errors(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto gold = load_triples(cfg.gold, "--gold");
  const auto pred = load_triples(cfg.pred, "--pred");
  std::map<std::string, std::string> sources;
  if (!cfg.in.empty()) {
    require_path(cfg.in, "--in");
    for (const auto& split : load_splits(cfg.in, cfg.strict, err))
      for (const auto& doc : split.documents) sources[doc.doc_id()] = doc.document.text();
  }
  const auto records = categorize_errors(gold, pred, score_options(cfg), sources);
  std::map<ErrorCategory, std::size_t> counts;
  for (const auto& r : records) ++counts[r.category];
  for (const auto& [category, n] : counts) out << name(category) << '\t' << n << '\n';
  if (!cfg.audit.empty()) write_file(cfg.audit, audit_lines(records));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus toolkit for end-to-end relation extraction on standoff-annotated text", "rarerel"};
  app.require_subcommand(1, 1);
  CliConfig cfg;

  auto shared = [&](CLI::App* sub) {
    sub->add_option("--in", cfg.in, "Input directory or file");
    sub->add_option("--out", cfg.out, "Output directory or file");
    sub->add_option("--log", cfg.log, "Log file");
    sub->add_flag("--strict", cfg.strict, "Treat orphaned .txt/.ann files as fatal");
  };
  auto schema_flags = [&](CLI::App* sub) {
    sub->add_option("--schema", cfg.schema, "seq2rel | rel-is | natural-lang")
        ->check(CLI::IsMember({"seq2rel", "rel-is", "rel_is", "natural-lang", "natural_lang"}));
    sub->add_option("--noun-map", cfg.noun_map, "JSON object mapping predicates to rel-is nouns");
  };
  auto list_flags = [&](CLI::App* sub) {
    sub->add_option("--train-list", cfg.train_list, "Newline-separated doc ids for train");
    sub->add_option("--dev-list", cfg.dev_list, "Newline-separated doc ids for dev");
    sub->add_option("--test-list", cfg.test_list, "Newline-separated doc ids for test");
  };
  auto score_flags = [&](CLI::App* sub) {
    sub->add_option("--gold", cfg.gold, "Gold triples (TSV)");
    sub->add_option("--pred", cfg.pred, "Predicted triples (TSV)");
    sub->add_flag("--strict-case", cfg.strict_case, "Compare entity text verbatim");
    sub->add_flag("--type-agnostic", cfg.type_agnostic, "Ignore entity types when matching");
  };

  auto* repair = app.add_subcommand("repair", "Fix relation arguments, span boundaries and fragment order");
  shared(repair);
  auto* stats = app.add_subcommand("stats", "Entity, relation and shape counts per split");
  shared(stats);
  list_flags(stats);
  auto* split_cmd = app.add_subcommand("split", "Partition a corpus into train/dev/test");
  shared(split_cmd);
  list_flags(split_cmd);
  split_cmd->add_option("--ratios", cfg.ratios, "Three comma-separated fractions, e.g. 0.8,0.1,0.1");
  split_cmd->add_option("--seed", cfg.seed, "Shuffle seed");
  auto* flatten = app.add_subcommand("flatten", "Render discontinuous entities contiguously");
  shared(flatten);
  auto* encode = app.add_subcommand("encode", "Write source/target records for a schema");
  shared(encode);
  schema_flags(encode);
  encode->add_flag("--copy-instruct", cfg.copy_instruct, "Prefix sources with the copy instruction");
  auto* decode = app.add_subcommand("decode", "Turn generations back into triples");
  shared(decode);
  schema_flags(decode);
  decode->add_flag("--copy-instruct", cfg.copy_instruct, "Accepted for symmetry with encode");
  decode->add_flag("--no-normalize", cfg.no_normalize, "Skip generation post-processing");
  auto* score_cmd = app.add_subcommand("score", "Strict-match precision, recall and F1");
  shared(score_cmd);
  score_flags(score_cmd);
  auto* errors = app.add_subcommand("errors", "Categorize false positives and false negatives");
  shared(errors);
  score_flags(errors);
  errors->add_option("--audit", cfg.audit, "Write one line per error record");

  std::vector<std::string> argv_storage{"rarerel"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*repair) return cmd_repair(cfg, out, err);
    if (*stats) return cmd_stats(cfg, out, err);
    if (*split_cmd) return cmd_split(cfg, out, err);
    if (*flatten) return cmd_flatten(cfg, out, err);
    if (*encode) return cmd_encode(cfg, out, err);
    if (*decode) return cmd_decode(cfg, out, err);
    if (*score_cmd) return cmd_score(cfg, out, err);
    if (*errors) return cmd_errors(cfg, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace rarerel
