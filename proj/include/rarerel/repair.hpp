#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rarerel/standoff.hpp"

namespace rarerel {

enum class RepairRule { kRelationArgument, kSpanBoundary, kFragmentOrder };

std::string_view name(RepairRule rule);

struct RepairEntry {
  RepairRule rule = RepairRule::kRelationArgument;
  std::string target_id;
  std::string before;
  std::string after;
  bool operator==(const RepairEntry&) const = default;
};

struct RepairLog {
  std::string doc_id;
  std::vector<RepairEntry> entries;

  void append(const RepairLog& other);
  /// Distinct target ids touched by `rule`.
  std::size_t touched(RepairRule rule) const;
  /// One line per entry: `<doc_id> <rule> <target_id> <before> -> <after>`.
  std::string to_string() const;
};

/// Marker written as `after` for dangling references that could not be fixed.
inline constexpr std::string_view kUnresolved = "UNRESOLVED";

class RepairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rewrites a dangling `T<d..d>0` argument to the id without its trailing
/// zero when that id exists.  Only one zero is ever stripped.
std::pair<AnnotatedDocument, RepairLog> fix_relation_arguments(AnnotatedDocument doc);

/// Moves a fragment end by at most one code point when that makes the
/// fragment slices agree with surface_text and the new end sits on a word
/// boundary.  Otherwise surface_text is replaced by the slices.  A fragment
/// whose slice already agrees but whose end falls one code point short of a
/// word boundary is extended, and surface_text follows.
std::pair<AnnotatedDocument, RepairLog> fix_span_boundaries(AnnotatedDocument doc);

/// Sorts fragments left to right.  Throws RepairError when sorted fragments
/// overlap.
std::pair<AnnotatedDocument, RepairLog> fix_fragment_order(AnnotatedDocument doc);

/// fragment order, then span boundaries, then relation arguments.
std::pair<AnnotatedDocument, RepairLog> repair_all(AnnotatedDocument doc);

}  // namespace rarerel
