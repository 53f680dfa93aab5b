#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rarerel/standoff.hpp"
#include "rarerel/types.hpp"

namespace rarerel {

/// One relation as text.  Gold triples always carry both entity types; a
/// triple decoded from a template that does not spell out a type leaves it
/// empty.
struct Triple {
  std::string subject_text;
  std::optional<EntityType> subject_type;
  Predicate predicate = Predicate::kProduces;
  std::string object_text;
  std::optional<EntityType> object_type;

  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

/// Human-readable form used in diagnostics: `subj [type] -predicate-> obj [type]`.
std::string describe(const Triple& t);

enum class SchemaKind { kSeq2Rel, kRelIs, kNaturalLang };

std::string_view name(SchemaKind kind);
/// Accepts "seq2rel", "rel-is"/"rel_is", "natural-lang"/"natural_lang".
std::optional<SchemaKind> parse_schema_kind(std::string_view s);

/// Which entity types a schema spells out for a predicate.
struct EncodedTypes {
  bool subject = true;
  bool object = true;
};
EncodedTypes encoded_types(SchemaKind kind, Predicate predicate);

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Noun form of each predicate for the rel-is template.
class PredicateNounMap {
 public:
  /// producer, risk factor, hyponym, acronym, synonym, anaphor.
  PredicateNounMap();
  /// Reads a JSON object `{predicate: noun}`.  The result must cover all six
  /// predicates with distinct nouns and keep is_a -> hyponym and
  /// is_synon -> synonym.
  static PredicateNounMap from_json(std::string_view json);

  const std::string& noun(Predicate p) const { return nouns_.at(p); }
  std::optional<Predicate> predicate_for(std::string_view noun) const;

 private:
  void validate() const;
  std::map<Predicate, std::string> nouns_;
};

/// Duplicate-free triples of the resolvable relations of `doc`, in the order
/// used for encoding: first occurrence of the subject, then of the object,
/// then predicate token.  Entity text is the fragment slices joined by one
/// space.
std::vector<Triple> document_triples(const AnnotatedDocument& doc);

std::string encode_triples(const std::vector<Triple>& triples, SchemaKind kind,
                           const PredicateNounMap& nouns = {});
std::string encode_target(const AnnotatedDocument& doc, SchemaKind kind,
                          const PredicateNounMap& nouns = {});

/// Seq2rel special tokens: entity types, predicates, @NOREL@ and @END@.
std::vector<std::string> special_tokens();

struct SkippedSegment {
  std::string text;
  std::string reason;
};

struct Decoded {
  std::vector<Triple> triples;
  std::vector<SkippedSegment> skipped;
};

/// Never throws on malformed input; unusable segments are listed in `skipped`.
Decoded decode_target(std::string_view generation, SchemaKind kind, const PredicateNounMap& nouns = {});

inline constexpr std::string_view kCopyInstruction =
    "From the given abstract, find all the entities and relations among them. "
    "Do not generate any token outside the abstract.";

std::string build_prompt(std::string_view doc_text, bool copy_instruct);

/// Collapses whitespace, removes spaces hugging hyphens, slashes and the
/// inner side of round brackets, and rewrites "is synonyms" as "is synonym".
std::string normalize_generation(std::string_view generation);

}  // namespace rarerel
