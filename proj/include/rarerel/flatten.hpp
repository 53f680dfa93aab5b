#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rarerel/standoff.hpp"

namespace rarerel {

/// Maps intervals of rewritten text back to the original.  An entry without
/// an original interval is synthetic glue inserted by the rewrite.
struct OffsetMap {
  struct Entry {
    Fragment rewritten;
    std::optional<Fragment> original;
    bool operator==(const Entry&) const = default;
  };
  std::vector<Entry> entries;

  /// Original intervals covered by `span` of the rewritten text, with
  /// synthetic pieces dropped and adjacent pieces merged.
  std::vector<Fragment> to_original(const Fragment& span) const;
  bool is_identity(std::size_t length) const;
  std::string to_json(const std::string& doc_id) const;
  bool operator==(const OffsetMap&) const = default;
};

class FlattenError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rewrites every overlap group that holds a discontinuous entity as the
/// contiguous renderings of its members joined by " and ".  Contiguous
/// members lying inside a fragment of an earlier member are carried along
/// inside that rendering instead of being repeated.  A member sitting wholly
/// inside the gap of a discontinuous entity raises FlattenError.
std::pair<AnnotatedDocument, OffsetMap> flatten_document(const AnnotatedDocument& doc);

}  // namespace rarerel
