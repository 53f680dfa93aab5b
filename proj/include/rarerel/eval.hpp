#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rarerel/schema.hpp"

namespace rarerel {

struct ScoreOptions {
  /// Compare entity text verbatim instead of lowercased with collapsed whitespace.
  bool strict_case = false;
  /// Ignore both entity types when matching.
  bool type_agnostic = false;
};

/// A triple tagged with the document it belongs to.
struct LabeledTriple {
  std::string doc_id;
  Triple triple;
  bool operator==(const LabeledTriple&) const = default;
  auto operator<=>(const LabeledTriple&) const = default;
};

std::string normalize_entity_text(std::string_view text, const ScoreOptions& options = {});

/// Distinct triples after applying the scoring normalization to each one.
std::set<Triple> collapse_duplicates(const std::vector<Triple>& triples, const ScoreOptions& options = {});
std::set<LabeledTriple> collapse_duplicates(const std::vector<LabeledTriple>& triples,
                                            const ScoreOptions& options = {});

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  Counts& operator+=(const Counts& other);
  bool operator==(const Counts&) const = default;
};

struct ScoreReport {
  Counts micro;
  std::map<Predicate, Counts> per_predicate;

  /// Micro row followed by one row per predicate.
  std::string table() const;
  std::string json() const;
  /// `P=<p> R=<r> F=<f>` for the micro row.
  std::string summary() const;
};

/// Strict match on all five fields, per document, after duplicate collapsing.
ScoreReport score(const std::vector<LabeledTriple>& gold, const std::vector<LabeledTriple>& predicted,
                  const ScoreOptions& options = {});
ScoreReport score(const std::vector<Triple>& gold, const std::vector<Triple>& predicted,
                  const ScoreOptions& options = {});

enum class ErrorCategory { kPartialMatch, kTypeMismatch, kDiscontinuousMerge, kHallucinatedSpan, kSpurious, kMissing };

std::string_view name(ErrorCategory category);

struct ErrorRecord {
  std::string doc_id;
  ErrorCategory category = ErrorCategory::kSpurious;
  std::optional<Triple> predicted;
  std::optional<Triple> gold;
};

/// Jaccard overlap of word_tokens() sets; 1 for two empty strings.
double token_jaccard(std::string_view a, std::string_view b);

/// Assigns every false positive and false negative exactly one category.
/// `sources` maps doc_id to document text; documents without a source are
/// never flagged hallucinated_span.
std::vector<ErrorRecord> categorize_errors(const std::vector<LabeledTriple>& gold,
                                           const std::vector<LabeledTriple>& predicted,
                                           const ScoreOptions& options = {},
                                           const std::map<std::string, std::string>& sources = {});

/// Tab-separated audit lines: doc_id, category, predicted, gold.
std::string audit_lines(const std::vector<ErrorRecord>& records);

class TripleFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tab-separated records: doc_id, subject text, subject type, predicate,
/// object text, object type.  Types may be empty.  Blank lines and lines
/// starting with '#' are skipped.
std::vector<LabeledTriple> read_triples(std::istream& in);
void write_triples(std::ostream& out, const std::vector<LabeledTriple>& triples);

}  // namespace rarerel
