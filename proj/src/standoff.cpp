#include "rarerel/standoff.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "rarerel/text.hpp"

namespace rarerel {

TextDocument::TextDocument(std::string doc_id, std::string text)
    : doc_id_(std::move(doc_id)), text_(std::move(text)), offsets_(utf8_offsets(text_)) {}

std::string TextDocument::slice(std::size_t start, std::size_t end) const {
  const std::size_t n = length();
  start = std::min(start, n);
  end = std::clamp(end, start, n);
  return text_.substr(offsets_[start], offsets_[end] - offsets_[start]);
}

char32_t TextDocument::at(std::size_t index) const {
  if (index >= length()) return 0;
  return decode_code_point(std::string_view(text_).substr(offsets_[index],
                                                          offsets_[index + 1] - offsets_[index]));
}

Fragment EntityMention::covering_span() const {
  Fragment span{fragments.front().start, fragments.front().end};
  for (const auto& f : fragments) {
    span.start = std::min(span.start, f.start);
    span.end = std::max(span.end, f.end);
  }
  return span;
}

std::string_view name(ArgSlot slot) { return slot == ArgSlot::kArg1 ? "Arg1" : "Arg2"; }

const EntityMention* AnnotatedDocument::find_entity(std::string_view id) const {
  for (const auto& e : entities)
    if (e.id == id) return &e;
  return nullptr;
}

EntityMention* AnnotatedDocument::find_entity(std::string_view id) {
  for (auto& e : entities)
    if (e.id == id) return &e;
  return nullptr;
}

bool AnnotatedDocument::resolves(const RelationInstance& relation) const {
  return find_entity(relation.subject_ref) != nullptr && find_entity(relation.object_ref) != nullptr;
}

void AnnotatedDocument::refresh_unresolved() {
  unresolved_refs.clear();
  for (const auto& r : relations) {
    if (!find_entity(r.subject_ref)) unresolved_refs.push_back({r.id, ArgSlot::kArg1, r.subject_ref});
    if (!find_entity(r.object_ref)) unresolved_refs.push_back({r.id, ArgSlot::kArg2, r.object_ref});
  }
}

std::string AnnotatedDocument::entity_text(const EntityMention& entity) const {
  std::string out;
  for (std::size_t i = 0; i < entity.fragments.size(); ++i) {
    if (i) out.push_back(' ');
    out += document.slice(entity.fragments[i]);
  }
  return out;
}

ParseError::ParseError(std::size_t line, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}

namespace {

bool is_id(std::string_view s, char prefix) {
  if (s.size() < 2 || s[0] != prefix) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t parse_offset(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    throw ParseError(line, "non-numeric offset '" + std::string(token) + "'");
  return value;
}

EntityMention parse_entity_line(const std::vector<std::string_view>& fields, std::size_t line,
                                std::size_t doc_length) {
  if (fields.size() != 3) throw ParseError(line, "entity line needs 3 tab-separated fields");
  if (!is_id(fields[0], 'T')) throw ParseError(line, "bad entity id '" + std::string(fields[0]) + "'");
  EntityMention entity;
  entity.id = std::string(fields[0]);
  entity.surface_text = std::string(fields[2]);

  const std::string_view spec = fields[1];
  const std::size_t space = spec.find(' ');
  if (space == std::string_view::npos) throw ParseError(line, "entity type without offsets");
  const std::string_view label = spec.substr(0, space);
  const auto type = parse_entity_type(label);
  if (!type) throw ParseError(line, "unknown entity type '" + std::string(label) + "'");
  entity.type = *type;

  for (std::string_view piece : split(spec.substr(space + 1), ';')) {
    const auto bounds = split(piece, ' ');
    if (bounds.size() != 2) throw ParseError(line, "fragment must be '<start> <end>'");
    Fragment f{parse_offset(bounds[0], line), parse_offset(bounds[1], line)};
    if (f.start >= f.end) throw ParseError(line, "empty or inverted fragment");
    if (f.end > doc_length)
      throw ParseError(line, "offset " + std::to_string(f.end) + " beyond document length " +
                                 std::to_string(doc_length));
    entity.fragments.push_back(f);
  }
  return entity;
}

std::string_view strip_arg(std::string_view token, std::string_view key, std::size_t line) {
  if (token.substr(0, key.size()) != key)
    throw ParseError(line, "expected " + std::string(key) + " argument");
  const std::string_view ref = token.substr(key.size());
  if (!is_id(ref, 'T')) throw ParseError(line, "bad argument reference '" + std::string(ref) + "'");
  return ref;
}

RelationInstance parse_relation_line(const std::vector<std::string_view>& fields, std::size_t line) {
  // brat writes relation lines with a trailing tab on some exports.
  std::size_t count = fields.size();
  if (count == 3 && fields[2].empty()) count = 2;
  if (count != 2) throw ParseError(line, "relation line needs 2 tab-separated fields");
  if (!is_id(fields[0], 'R')) throw ParseError(line, "bad relation id '" + std::string(fields[0]) + "'");
  const auto parts = split(fields[1], ' ');
  if (parts.size() != 3) throw ParseError(line, "relation needs '<TYPE> Arg1:T.. Arg2:T..'");
  const auto predicate = parse_predicate(parts[0]);
  if (!predicate) throw ParseError(line, "unknown relation type '" + std::string(parts[0]) + "'");
  return RelationInstance{std::string(fields[0]), *predicate,
                          std::string(strip_arg(parts[1], "Arg1:", line)),
                          std::string(strip_arg(parts[2], "Arg2:", line))};
}

}  // namespace

AnnotatedDocument parse_document(std::string_view text_content, std::string_view ann_content,
                                 std::string doc_id) {
  AnnotatedDocument doc;
  doc.document = TextDocument(std::move(doc_id), std::string(text_content));
  std::unordered_set<std::string> ids;

  std::size_t line_no = 0;
  for (std::string_view raw : split(ann_content, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty()) continue;
    const char kind = raw.front();
    if (kind == 'E' || kind == 'A' || kind == 'M' || kind == 'N' || kind == '#') continue;

    const auto fields = split(raw, '\t');
    std::string id;
    if (kind == 'T') {
      auto entity = parse_entity_line(fields, line_no, doc.document.length());
      id = entity.id;
      if (!ids.insert(id).second) throw ParseError(line_no, "duplicate id " + id);
      doc.entities.push_back(std::move(entity));
    } else if (kind == 'R') {
      auto relation = parse_relation_line(fields, line_no);
      id = relation.id;
      if (!ids.insert(id).second) throw ParseError(line_no, "duplicate id " + id);
      doc.relations.push_back(std::move(relation));
    } else {
      throw ParseError(line_no, "unrecognized annotation line");
    }
  }
  doc.refresh_unresolved();
  return doc;
}

std::pair<std::string, std::string> serialize_document(const AnnotatedDocument& doc) {
  std::ostringstream ann;
  for (const auto& e : doc.entities) {
    ann << e.id << '\t' << standoff_label(e.type) << ' ';
    for (std::size_t i = 0; i < e.fragments.size(); ++i) {
      if (i) ann << ';';
      ann << e.fragments[i].start << ' ' << e.fragments[i].end;
    }
    ann << '\t' << e.surface_text << '\n';
  }
  for (const auto& r : doc.relations) {
    ann << r.id << '\t' << name(r.predicate) << " Arg1:" << r.subject_ref << " Arg2:" << r.object_ref
        << '\n';
  }
  return {doc.document.text(), ann.str()};
}

}  // namespace rarerel
