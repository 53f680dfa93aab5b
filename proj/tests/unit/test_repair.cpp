#include "doctest.h"

#include <algorithm>
#include <random>

#include "rarerel/io.hpp"
#include "rarerel/repair.hpp"
#include "support/synthetic.hpp"

using namespace rarerel;

namespace {

AnnotatedDocument fixture(const std::string& id) {
  const std::string dir = TEST_DATA_DIR "/corpus/";
  return parse_document(read_file(dir + id + ".txt"), read_file(dir + id + ".ann"), id);
}

}  // namespace

TEST_CASE("trailing zero is stripped from a dangling argument") {
  auto [doc, log] = fix_relation_arguments(fixture("rickets"));
  const auto* r5 = &doc.relations.back();
  CHECK(r5->id == "R5");
  CHECK(r5->object_ref == "T9");
  CHECK(doc.unresolved_refs.empty());
  REQUIRE(log.entries.size() == 1);
  CHECK(log.entries[0] == RepairEntry{RepairRule::kRelationArgument, "R5", "Arg2:T90", "Arg2:T9"});
  CHECK(log.to_string() == "rickets relation_argument R5 Arg2:T90 -> Arg2:T9\n");
}

TEST_CASE("only one trailing zero is stripped") {
  const std::string text = "abcdefghij";
  std::string ann;
  for (int i = 1; i <= 10; ++i)
    ann += "T" + std::to_string(i) + "\tSIGN " + std::to_string(i - 1) + " " + std::to_string(i) + "\t" +
           text.substr(i - 1, 1) + "\n";
  ann += "R1\tproduces Arg1:T1 Arg2:T100\n";
  ann += "R2\tproduces Arg1:T1000 Arg2:T2\n";
  ann += "R3\tproduces Arg1:T77 Arg2:T2\n";
  auto [doc, log] = fix_relation_arguments(parse_document(text, ann, "z"));
  CHECK(doc.relations[0].object_ref == "T10");
  CHECK(doc.relations[1].subject_ref == "T1000");
  CHECK(doc.relations[2].subject_ref == "T77");
  REQUIRE(doc.unresolved_refs.size() == 2);
  REQUIRE(log.entries.size() == 3);
  CHECK(log.entries[0].after == "Arg2:T10");
  CHECK(log.entries[1].after == kUnresolved);
  CHECK(log.entries[2].before == "Arg1:T77");
  CHECK(log.entries[2].after == kUnresolved);
}

TEST_CASE("truncated span is extended to the word boundary") {
  auto [doc, log] = fix_span_boundaries(fixture("balantidiasis"));
  const auto* t2 = doc.find_entity("T2");
  CHECK(t2->fragments == std::vector<Fragment>{{24, 42}});
  CHECK(t2->surface_text == "infectious disease");
  REQUIRE(log.entries.size() == 1);
  CHECK(log.entries[0].target_id == "T2");
  CHECK(log.entries[0].before == "24 41 \"infectious diseas\"");
  CHECK(log.entries[0].after == "24 42 \"infectious disease\"");
}

TEST_CASE("span end moves to agree with the surface text") {
  const std::string text = "a rare infectious disease, caused by x";
  SUBCASE("missing trailing character") {
    auto [doc, log] = fix_span_boundaries(parse_document(text, "T1\tDISEASE 7 24\tinfectious disease\n", "d"));
    CHECK(doc.entities[0].fragments == std::vector<Fragment>{{7, 25}});
    CHECK(log.entries.size() == 1);
  }
  SUBCASE("one extra trailing character") {
    auto [doc, log] = fix_span_boundaries(parse_document(text, "T1\tDISEASE 7 26\tinfectious disease\n", "d"));
    CHECK(doc.entities[0].fragments == std::vector<Fragment>{{7, 25}});
    CHECK(doc.entities[0].surface_text == "infectious disease");
    CHECK(log.entries.size() == 1);
  }
  SUBCASE("consistent span is unchanged") {
    const auto in = parse_document(text, "T1\tDISEASE 7 25\tinfectious disease\n", "d");
    auto [doc, log] = fix_span_boundaries(in);
    CHECK(doc == in);
    CHECK(log.entries.empty());
  }
  SUBCASE("larger disagreement rewrites the surface") {
    auto [doc, log] = fix_span_boundaries(parse_document(text, "T1\tDISEASE 7 25\tinfective disease\n", "d"));
    CHECK(doc.entities[0].fragments == std::vector<Fragment>{{7, 25}});
    CHECK(doc.entities[0].surface_text == "infectious disease");
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].after == "7 25 \"infectious disease\"");
  }
}

TEST_CASE("fragments are put in left to right order") {
  auto [doc, log] = fix_fragment_order(fixture("fingers"));
  const auto* t2 = doc.find_entity("T2");
  CHECK(t2->fragments == std::vector<Fragment>{{14, 35}, {48, 52}});
  CHECK(t2->surface_text == "abnormally long, thin toes");
  REQUIRE(log.entries.size() == 1);
  CHECK(log.entries[0].before == "48 52;14 35 \"toes abnormally long, thin\"");

  const std::string text(80, 'x');
  auto [two, two_log] = fix_fragment_order(parse_document(text, "T1\tSIGN 50 60;10 20\tx\n", "d"));
  CHECK(two.entities[0].fragments == std::vector<Fragment>{{10, 20}, {50, 60}});

  const auto sorted_in = parse_document(text, "T1\tSIGN 10 20;50 60\tx\n", "d");
  auto [same, same_log] = fix_fragment_order(sorted_in);
  CHECK(same == sorted_in);
  CHECK(same_log.entries.empty());

  CHECK_THROWS_AS(fix_fragment_order(parse_document(text, "T7\tSIGN 10 30;20 40\tx\n", "d")), RepairError);
}

TEST_CASE("shuffled fragments match a standalone sort") {
  std::mt19937 rng(7);
  const std::string text(400, 'y');
  for (int i = 0; i < 200; ++i) {
    std::vector<Fragment> frags;
    std::size_t pos = 0;
    const int n = 3 + i % 4;
    for (int k = 0; k < n; ++k) {
      pos += 1 + rng() % 10;
      const std::size_t len = 1 + rng() % 10;
      frags.push_back({pos, pos + len});
      pos += len;
    }
    auto expected = frags;
    std::shuffle(frags.begin(), frags.end(), rng);
    // Insertion sort, independent of the library ordering.
    for (std::size_t a = 1; a < expected.size(); ++a)
      for (std::size_t b = a; b > 0 && expected[b].start < expected[b - 1].start; --b)
        std::swap(expected[b], expected[b - 1]);
    AnnotatedDocument doc;
    doc.document = TextDocument("d", text);
    doc.entities.push_back({"T1", EntityType::kSign, frags, "y"});
    auto [out, log] = fix_fragment_order(doc);
    REQUIRE(out.entities[0].fragments == expected);
  }
}

TEST_CASE("repair_all applies the rules in order") {
  // One defect of each kind in one document.
  const std::string text = "Patients show abnormally long, thin fingers and toes, a rare infectious disease.";
  const std::string ann =
      "T1\tSIGN 48 52;14 35\ttoes abnormally long, thin\n"
      "T2\tDISEASE 61 78\tinfectious disease\n"
      "T3\tSIGN 0 8\tPatients\n"
      "R1\tproduces Arg1:T2 Arg2:T10\n";
  auto [doc, log] = repair_all(parse_document(text, ann, "mix"));
  REQUIRE(log.entries.size() == 3);
  CHECK(log.entries[0].rule == RepairRule::kFragmentOrder);
  CHECK(log.entries[1].rule == RepairRule::kSpanBoundary);
  CHECK(log.entries[2].rule == RepairRule::kRelationArgument);
  CHECK(log.touched(RepairRule::kSpanBoundary) == 1);
  CHECK(doc.find_entity("T2")->fragments == std::vector<Fragment>{{61, 79}});
  CHECK(doc.relations[0].object_ref == "T1");
  CHECK(doc.unresolved_refs.empty());
}

TEST_CASE("repair_all is idempotent and leaves slices agreeing with surfaces") {
  std::mt19937 rng(99);
  for (int i = 0; i < 1000; ++i) {
    auto doc = testing::synthetic_document(rng, "r" + std::to_string(i));
    // Inject defects: reversed fragments, a short end, a trailing zero.
    for (auto& e : doc.entities) {
      const int roll = static_cast<int>(rng() % 4);
      if (roll == 0 && e.fragments.size() > 1) std::reverse(e.fragments.begin(), e.fragments.end());
      if (roll == 1 && e.fragments.back().end - e.fragments.back().start > 1) {
        e.fragments.back().end -= 1;
        e.surface_text = doc.entity_text(e);
      }
    }
    if (!doc.relations.empty() && rng() % 2) {
      doc.relations[0].object_ref += "0";
      doc.refresh_unresolved();
    }
    const auto [once, log1] = repair_all(doc);
    for (const auto& e : once.entities) {
      REQUIRE(std::is_sorted(e.fragments.begin(), e.fragments.end()));
      REQUIRE(once.entity_text(e) == e.surface_text);
    }
    const auto [twice, log2] = repair_all(once);
    REQUIRE(twice == once);
    for (const auto& entry : log2.entries) REQUIRE(entry.after == kUnresolved);
  }
}
