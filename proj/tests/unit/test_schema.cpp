#include "doctest.h"

#include <random>
#include <set>

#include "rarerel/eval.hpp"
#include "rarerel/schema.hpp"
#include "support/synthetic.hpp"

using namespace rarerel;

namespace {

using ET = EntityType;
using P = Predicate;

Triple T(std::string s, ET st, P p, std::string o, ET ot) { return {std::move(s), st, p, std::move(o), ot}; }

// Drops the types a schema does not spell out.
std::set<Triple> project(const std::vector<Triple>& triples, SchemaKind kind) {
  std::set<Triple> out;
  for (Triple t : triples) {
    const auto enc = encoded_types(kind, t.predicate);
    if (!enc.subject) t.subject_type.reset();
    if (!enc.object) t.object_type.reset();
    t.subject_text = normalize_entity_text(t.subject_text);
    t.object_text = normalize_entity_text(t.object_text);
    out.insert(t);
  }
  return out;
}

}  // namespace

TEST_CASE("seq2rel linearization") {
  const std::vector<Triple> t = {T("Vitamin D Deficiency Rickets", ET::kRareDisease, P::kProduces, "bone disease", ET::kSign)};
  const std::string s = "Vitamin D Deficiency Rickets @RareDisease@ bone disease @Sign@ @PRODUCES@ @END@";
  CHECK(encode_triples(t, SchemaKind::kSeq2Rel) == s);
  const auto d = decode_target(s, SchemaKind::kSeq2Rel);
  CHECK(d.triples == t);
  CHECK(d.skipped.empty());

  CHECK(encode_triples({}, SchemaKind::kSeq2Rel) == "@NOREL@");
  CHECK(decode_target("@NOREL@", SchemaKind::kSeq2Rel).triples.empty());
  CHECK(decode_target("@NOREL@", SchemaKind::kSeq2Rel).skipped.empty());

  const std::vector<Triple> two = {T("neutropenia", ET::kDisease, P::kIncreasesRiskOf, "infections", ET::kDisease),
                                   T("LQTS", ET::kRareDisease, P::kIsAcron, "long QT syndrome", ET::kRareDisease)};
  CHECK(encode_triples(two, SchemaKind::kSeq2Rel) ==
        "neutropenia @Disease@ infections @Disease@ @INCREASES_RISK_OF@ "
        "LQTS @RareDisease@ long QT syndrome @RareDisease@ @IS_ACRON@ @END@");
}

TEST_CASE("rel-is sentences") {
  const auto t = T("Wilm's tumor", ET::kRareDisease, P::kIsA, "kidney cancer", ET::kDisease);
  CHECK(encode_triples({t}, SchemaKind::kRelIs) == "The relation between Wilm's tumor and kidney cancer is hyponym.");
  for (const char* s : {"The relation between Wilm's tumor and kidney cancer is hyponym.",
                        "The relationship between Wilm's tumor and kidney cancer is hyponym"}) {
    const auto d = decode_target(s, SchemaKind::kRelIs);
    REQUIRE(d.triples.size() == 1);
    CHECK(d.triples[0] == Triple{"Wilm's tumor", std::nullopt, P::kIsA, "kidney cancer", std::nullopt});
  }

  const auto fixed = normalize_generation("The relation between A and B is synonyms.");
  CHECK(fixed == "The relation between A and B is synonym.");
  const auto d = decode_target(fixed, SchemaKind::kRelIs);
  REQUIRE(d.triples.size() == 1);
  CHECK(d.triples[0].predicate == P::kIsSynon);
  CHECK(d.triples[0].subject_text == "A");
  CHECK(d.triples[0].object_text == "B");
  CHECK(decode_target("The relation between A and B is synonyms.", SchemaKind::kRelIs).triples.empty());
}

TEST_CASE("natural language templates") {
  struct Case {
    Triple triple;
    std::string sentence;
  };
  const std::vector<Case> cases = {
      {T("Asherman's syndrome", ET::kRareDisease, P::kProduces, "abdominal pain", ET::kSymptom),
       "Asherman's syndrome is a rare disease that produces abdominal pain, as a symptom"},
      {T("encephalitis", ET::kDisease, P::kAnaphora, "it", ET::kAnaphor),
       "The term it is an anaphor that refers back to the entity of the disease encephalitis"},
      {T("diastrophic dysplasia", ET::kDisease, P::kIsSynon, "disastrophic dwarfism", ET::kRareDisease),
       "The disease diastrophic dysplasia and the rare disease disastrophic dwarfism are synonyms"},
      {T("LQTS", ET::kRareDisease, P::kIsAcron, "long QT syndrome", ET::kRareDisease),
       "The acronym LQTS stands for long QT syndrome, a rare disease"},
      {T("neutropenia", ET::kDisease, P::kIncreasesRiskOf, "infections", ET::kDisease),
       "The presence of the disease neutropenia increases the risk of developing the disease infections"},
      {T("Bowen disease", ET::kRareSkinDisease, P::kIsA, "skin disorder", ET::kDisease),
       "The rare skin disease Bowen disease is a type of skin disorder, a disease"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.sentence);
    CHECK(encode_triples({c.triple}, SchemaKind::kNaturalLang) == c.sentence);
    const auto d = decode_target(c.sentence, SchemaKind::kNaturalLang);
    REQUIRE(d.triples.size() == 1);
    CHECK(project(d.triples, SchemaKind::kNaturalLang) == project({c.triple}, SchemaKind::kNaturalLang));
  }
  // The template form with "of" also decodes.
  const auto d = decode_target(
      "The presence of the disease neutropenia increases the risk of developing the disease of infections",
      SchemaKind::kNaturalLang);
  REQUIRE(d.triples.size() == 1);
  CHECK(d.triples[0].object_text == "infections");
  // Scaffolding is matched case-insensitively, spans keep their case.
  const auto lower = decode_target("the acronym LQTS STANDS FOR Long QT syndrome, A RARE DISEASE.", SchemaKind::kNaturalLang);
  REQUIRE(lower.triples.size() == 1);
  CHECK(lower.triples[0].object_text == "Long QT syndrome");
  CHECK(lower.triples[0].object_type == ET::kRareDisease);
}

TEST_CASE("decode reports malformed segments without failing") {
  const auto a = decode_target("foo @Sign@ @PRODUCES@ bar @END@", SchemaKind::kSeq2Rel);
  CHECK(a.triples.empty());
  CHECK_FALSE(a.skipped.empty());
  const auto b = decode_target(
      "x @Sign@ y @Sign@ @PRODUCES@ z @Bogus@ w @Sign@ @PRODUCES@ @END@", SchemaKind::kSeq2Rel);
  CHECK(b.triples.size() == 1);
  REQUIRE(b.skipped.size() == 2);
  CHECK(b.skipped[0].text == "z @Bogus@");
  CHECK(b.skipped[1].text == "w");
  const auto c = decode_target("The relation between a and b is nonsense. The relation between c and d is acronym.",
                               SchemaKind::kRelIs);
  REQUIRE(c.triples.size() == 1);
  CHECK(c.triples[0].predicate == P::kIsAcron);
  CHECK(c.skipped.size() == 1);
  const auto n = decode_target("nothing here; The acronym X stands for Y, a sign", SchemaKind::kNaturalLang);
  CHECK(n.triples.size() == 1);
  CHECK(n.skipped.size() == 1);
  CHECK(decode_target("", SchemaKind::kNaturalLang).triples.empty());
}

TEST_CASE("decode is total on random garbage") {
  std::mt19937 rng(1234);
  const std::string alphabet = "@ab ;.,The relation between and is @END@ @NOREL@ @Sign@ @IS_A@\n\t";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t n = rng() % 120;
    for (std::size_t k = 0; k < n; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
    for (auto kind : {SchemaKind::kSeq2Rel, SchemaKind::kRelIs, SchemaKind::kNaturalLang})
      CHECK_NOTHROW(decode_target(s, kind));
  }
}

TEST_CASE("document triples collapse duplicates and skip unresolved relations") {
  const std::string text = "LQTS is long QT syndrome. LQTS again.";
  const std::string ann =
      "T1\tRAREDISEASE 0 4\tLQTS\n"
      "T2\tRAREDISEASE 8 24\tlong QT syndrome\n"
      "T3\tRAREDISEASE 26 30\tLQTS\n"
      "R1\tis_acron Arg1:T1 Arg2:T2\n"
      "R2\tis_acron Arg1:T3 Arg2:T2\n"
      "R3\tis_synon Arg1:T1 Arg2:T9\n";
  const auto doc = parse_document(text, ann, "d");
  const auto triples = document_triples(doc);
  REQUIRE(triples.size() == 1);
  CHECK(encode_target(doc, SchemaKind::kSeq2Rel) ==
        "LQTS @RareDisease@ long QT syndrome @RareDisease@ @IS_ACRON@ @END@");
  CHECK(encode_target(parse_document(text, "", "e"), SchemaKind::kSeq2Rel) == "@NOREL@");
  CHECK(encode_target(parse_document(text, "", "e"), SchemaKind::kRelIs).empty());
}

TEST_CASE("relations follow entity order") {
  const std::string text = "aaa bbb ccc ddd";
  const std::string ann =
      "T1\tSIGN 0 3\taaa\nT2\tSIGN 4 7\tbbb\nT3\tSIGN 8 11\tccc\nT4\tSIGN 12 15\tddd\n"
      "R1\tproduces Arg1:T3 Arg2:T4\n"
      "R2\tproduces Arg1:T1 Arg2:T4\n"
      "R3\tis_a Arg1:T1 Arg2:T2\n"
      "R4\tanaphora Arg1:T1 Arg2:T2\n";
  const auto triples = document_triples(parse_document(text, ann, "d"));
  REQUIRE(triples.size() == 4);
  CHECK(triples[0].predicate == P::kAnaphora);
  CHECK(triples[1].predicate == P::kIsA);
  CHECK(triples[2].object_text == "ddd");
  CHECK(triples[3].subject_text == "ccc");
}

TEST_CASE("noun map") {
  PredicateNounMap nouns;
  CHECK(nouns.noun(P::kIsA) == "hyponym");
  CHECK(nouns.noun(P::kIsSynon) == "synonym");
  CHECK(nouns.noun(P::kIncreasesRiskOf) == "risk factor");
  CHECK(nouns.predicate_for("Hyponym") == P::kIsA);

  const auto custom = PredicateNounMap::from_json(
      R"({"produces":"cause","increases_risk_of":"risk","is_a":"hyponym","is_acron":"abbreviation",)"
      R"("is_synon":"synonym","anaphora":"reference"})");
  CHECK(custom.noun(P::kProduces) == "cause");
  const std::vector<Triple> t = {T("a b", ET::kSign, P::kProduces, "c", ET::kSign)};
  CHECK(encode_triples(t, SchemaKind::kRelIs, custom) == "The relation between a b and c is cause.");
  CHECK(decode_target("The relation between a b and c is cause.", SchemaKind::kRelIs, custom).triples.size() == 1);

  CHECK_THROWS_AS(PredicateNounMap::from_json(R"({"is_a":"hyponym"})"), SchemaError);
  CHECK_THROWS_AS(PredicateNounMap::from_json(
                      R"({"produces":"x","increases_risk_of":"x","is_a":"hyponym","is_acron":"y",)"
                      R"("is_synon":"synonym","anaphora":"z"})"),
                  SchemaError);
  CHECK_THROWS_AS(PredicateNounMap::from_json(
                      R"({"produces":"p","increases_risk_of":"r","is_a":"subtype","is_acron":"y",)"
                      R"("is_synon":"synonym","anaphora":"z"})"),
                  SchemaError);
  CHECK_THROWS_AS(PredicateNounMap::from_json("not json"), SchemaError);
}

TEST_CASE("prompt construction") {
  const std::string text = "Balantidiasis is a rare infectious disease.";
  CHECK(build_prompt(text, false) == text);
  CHECK(build_prompt(text, true) ==
        "From the given abstract, find all the entities and relations among them. "
        "Do not generate any token outside the abstract.\n\n" + text);
  CHECK(build_prompt(build_prompt(text, false), true).rfind("From the given abstract", 0) == 0);
}

TEST_CASE("generation normalization") {
  CHECK(normalize_generation("long - term") == "long-term");
  CHECK(normalize_generation("( protozoan )") == "(protozoan)");
  CHECK(normalize_generation("and / or") == "and/or");
  CHECK(normalize_generation("  a \t\n b  ") == "a b");
  CHECK(normalize_generation("X is synonyms.") == "X is synonym.");
  CHECK(normalize_generation("These are synonyms") == "These are synonyms");
  CHECK(normalize_generation("β - thalassemia") == "β-thalassemia");

  std::mt19937 rng(77);
  const std::string alphabet = "ab -/()  \tis synonyms";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t n = rng() % 40;
    for (std::size_t k = 0; k < n; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
    const auto once = normalize_generation(s);
    REQUIRE(normalize_generation(once) == once);
  }
}

TEST_CASE("special tokens") {
  const auto tokens = special_tokens();
  CHECK(tokens.size() == 14);
  const std::set<std::string> set(tokens.begin(), tokens.end());
  CHECK(set.size() == 14);
  for (const char* t : {"@RareSkinDisease@", "@IS_SYNON@", "@NOREL@", "@END@", "@Anaphor@"}) CHECK(set.count(t) == 1);
}

TEST_CASE("encode and decode round trip on random documents") {
  std::mt19937 rng(2024);
  std::size_t with_relations = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto doc = testing::synthetic_document(rng, "s" + std::to_string(i));
    const auto gold = document_triples(doc);
    if (!gold.empty()) ++with_relations;
    for (auto kind : {SchemaKind::kSeq2Rel, SchemaKind::kRelIs, SchemaKind::kNaturalLang}) {
      CAPTURE(name(kind));
      const auto target = encode_target(doc, kind);
      CAPTURE(target);
      const auto decoded = decode_target(target, kind);
      REQUIRE(decoded.skipped.empty());
      REQUIRE(project(decoded.triples, kind) == project(gold, kind));
      if (kind == SchemaKind::kSeq2Rel) {
        REQUIRE(decoded.triples == gold);
        std::size_t units = 0;
        for (std::size_t pos = 0; (pos = target.find('@', pos)) != std::string::npos; ++pos)
          if (target.compare(pos, 2, "@I") == 0 || target.compare(pos, 2, "@P") == 0 ||
              target.compare(pos, 3, "@AN") == 0)
            ++units;
        REQUIRE(units == gold.size());
        REQUIRE((gold.empty() ? target == "@NOREL@" : target.ends_with("@END@")));
      }
    }
  }
  CHECK(with_relations > 500);
}
