#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rarerel/types.hpp"

namespace rarerel {

/// Half-open interval of code points.
struct Fragment {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const Fragment&) const = default;
  auto operator<=>(const Fragment&) const = default;
};

/// Document text addressed by code point.  The UTF-8 string is kept as is;
/// a byte-offset table makes code-point slicing O(1).
class TextDocument {
 public:
  TextDocument() = default;
  TextDocument(std::string doc_id, std::string text);

  const std::string& doc_id() const { return doc_id_; }
  const std::string& text() const { return text_; }
  /// Number of code points.
  std::size_t length() const { return offsets_.size() - 1; }

  /// UTF-8 text of code points [start, end).  Arguments are clamped.
  std::string slice(std::size_t start, std::size_t end) const;
  std::string slice(const Fragment& f) const { return slice(f.start, f.end); }
  /// Code point at `index` (0 when out of range).
  char32_t at(std::size_t index) const;

  bool operator==(const TextDocument& other) const {
    return doc_id_ == other.doc_id_ && text_ == other.text_;
  }

 private:
  std::string doc_id_;
  std::string text_;
  std::vector<std::size_t> offsets_{0};
};

struct EntityMention {
  std::string id;
  EntityType type = EntityType::kDisease;
  std::vector<Fragment> fragments;
  std::string surface_text;

  /// (min start, max end) over fragments.
  Fragment covering_span() const;
  bool discontinuous() const { return fragments.size() > 1; }
  bool operator==(const EntityMention&) const = default;
};

struct RelationInstance {
  std::string id;
  Predicate predicate = Predicate::kProduces;
  std::string subject_ref;
  std::string object_ref;
  bool operator==(const RelationInstance&) const = default;
};

enum class ArgSlot { kArg1, kArg2 };

std::string_view name(ArgSlot slot);

struct UnresolvedRef {
  std::string relation_id;
  ArgSlot slot = ArgSlot::kArg1;
  std::string entity_id;
  bool operator==(const UnresolvedRef&) const = default;
};

struct AnnotatedDocument {
  TextDocument document;
  std::vector<EntityMention> entities;
  std::vector<RelationInstance> relations;
  std::vector<UnresolvedRef> unresolved_refs;

  const std::string& doc_id() const { return document.doc_id(); }
  const EntityMention* find_entity(std::string_view id) const;
  EntityMention* find_entity(std::string_view id);
  /// True when both arguments of `relation` name entities of this document.
  bool resolves(const RelationInstance& relation) const;
  /// Recomputes unresolved_refs from the current relations and entities.
  void refresh_unresolved();
  /// Fragment slices joined by one space.
  std::string entity_text(const EntityMention& entity) const;

  bool operator==(const AnnotatedDocument&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses one brat-style .ann body against its text.  Lines of other brat
/// kinds (events, attributes, normalizations, notes) are ignored; anything
/// else that does not parse is a ParseError carrying the 1-based line.
AnnotatedDocument parse_document(std::string_view text_content, std::string_view ann_content,
                                 std::string doc_id);

/// Returns (text_content, ann_content).
std::pair<std::string, std::string> serialize_document(const AnnotatedDocument& doc);

}  // namespace rarerel
