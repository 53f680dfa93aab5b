#include "rarerel/flatten.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "rarerel/text.hpp"

namespace rarerel {

std::vector<Fragment> OffsetMap::to_original(const Fragment& span) const {
  std::vector<Fragment> out;
  for (const auto& e : entries) {
    const std::size_t lo = std::max(span.start, e.rewritten.start);
    const std::size_t hi = std::min(span.end, e.rewritten.end);
    if (lo >= hi || !e.original) continue;
    Fragment piece{e.original->start + (lo - e.rewritten.start), e.original->start + (hi - e.rewritten.start)};
    if (!out.empty() && out.back().end == piece.start) out.back().end = piece.end;
    else out.push_back(piece);
  }
  return out;
}

bool OffsetMap::is_identity(std::size_t length) const {
  if (length == 0) return entries.empty();
  return entries.size() == 1 && entries[0].rewritten == Fragment{0, length} &&
         entries[0].original == Fragment{0, length};
}

std::string OffsetMap::to_json(const std::string& doc_id) const {
  nlohmann::ordered_json root;
  root["doc_id"] = doc_id;
  root["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json item;
    item["rewritten"] = {e.rewritten.start, e.rewritten.end};
    if (e.original) item["original"] = {e.original->start, e.original->end};
    else item["original"] = nullptr;
    root["entries"].push_back(std::move(item));
  }
  return root.dump() + "\n";
}

namespace {

// Accumulates rewritten text and its offset map.
class Writer {
 public:
  explicit Writer(const TextDocument& source) : source_(source) {}

  std::size_t position() const { return length_; }

  void copy(std::size_t start, std::size_t end) {
    if (start >= end) return;
    text_ += source_.slice(start, end);
    auto& entries = map_.entries;
    if (!entries.empty() && entries.back().original && entries.back().original->end == start &&
        entries.back().rewritten.end == length_) {
      entries.back().rewritten.end += end - start;
      entries.back().original->end = end;
    } else {
      entries.push_back({{length_, length_ + (end - start)}, Fragment{start, end}});
    }
    length_ += end - start;
  }

  void glue(std::string_view s) {
    const std::size_t n = code_point_count(s);
    text_ += s;
    map_.entries.push_back({{length_, length_ + n}, std::nullopt});
    length_ += n;
  }

  std::string take_text() { return std::move(text_); }
  OffsetMap take_map() { return std::move(map_); }

 private:
  const TextDocument& source_;
  std::string text_;
  std::size_t length_ = 0;
  OffsetMap map_;
};

struct Group {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::size_t> members;
  bool rewrite = false;
};

std::vector<Group> overlap_groups(const AnnotatedDocument& doc) {
  std::vector<std::size_t> order(doc.entities.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return doc.entities[a].covering_span() < doc.entities[b].covering_span();
  });
  std::vector<Group> groups;
  for (std::size_t idx : order) {
    const auto& e = doc.entities[idx];
    const Fragment span = e.covering_span();
    if (groups.empty() || span.start >= groups.back().end) groups.push_back({span.start, span.end, {}, false});
    Group& g = groups.back();
    g.end = std::max(g.end, span.end);
    g.members.push_back(idx);
    g.rewrite = g.rewrite || e.discontinuous();
  }
  return groups;
}

bool inside(const Fragment& inner, const Fragment& outer) {
  return outer.start <= inner.start && inner.end <= outer.end;
}

}  // namespace

std::pair<AnnotatedDocument, OffsetMap> flatten_document(const AnnotatedDocument& doc) {
  const auto& entities = doc.entities;
  std::vector<Fragment> new_span(entities.size());
  Writer out(doc.document);
  std::size_t cursor = 0;

  for (const Group& group : overlap_groups(doc)) {
    if (!group.rewrite) continue;
    out.copy(cursor, group.start);

    // Outer members first so that a contiguous member can be embedded in the
    // fragment of a longer member sharing its start.
    std::vector<std::size_t> by_extent = group.members;
    std::stable_sort(by_extent.begin(), by_extent.end(), [&](std::size_t a, std::size_t b) {
      const Fragment sa = entities[a].covering_span(), sb = entities[b].covering_span();
      if (sa.start != sb.start) return sa.start < sb.start;
      return sa.end > sb.end;
    });
    auto within_fragment = [&](std::size_t member, std::size_t container) {
      for (const auto& f : entities[container].fragments)
        if (inside(entities[member].fragments.front(), f)) return true;
      return false;
    };
    std::vector<std::size_t> top;
    std::vector<std::size_t> embedded;
    for (std::size_t idx : by_extent) {
      const bool nested = !entities[idx].discontinuous() &&
                          std::any_of(top.begin(), top.end(), [&](std::size_t t) { return within_fragment(idx, t); });
      (nested ? embedded : top).push_back(idx);
    }

    for (std::size_t d : top) {
      const auto& frags = entities[d].fragments;
      for (std::size_t t : top) {
        if (t == d) continue;
        const Fragment span = entities[t].covering_span();
        for (std::size_t i = 0; i + 1 < frags.size(); ++i) {
          if (inside(span, {frags[i].end, frags[i + 1].start}))
            throw FlattenError(doc.doc_id() + ": entity " + entities[t].id + " lies inside the gap of " +
                               "discontinuous entity " + entities[d].id);
        }
      }
    }

    std::vector<std::size_t> render_order = top;
    std::stable_sort(render_order.begin(), render_order.end(), [&](std::size_t a, std::size_t b) {
      const auto& fa = entities[a].fragments.front();
      const auto& fb = entities[b].fragments.front();
      if (fa.start != fb.start) return fa.start < fb.start;
      return entities[a].covering_span().end < entities[b].covering_span().end;
    });

    // Where each fragment of a top-level member landed in the output.
    std::vector<std::vector<std::size_t>> fragment_pos(entities.size());
    for (std::size_t k = 0; k < render_order.size(); ++k) {
      const std::size_t idx = render_order[k];
      if (k) out.glue(" and ");
      const std::size_t begin = out.position();
      for (std::size_t j = 0; j < entities[idx].fragments.size(); ++j) {
        if (j) out.glue(" ");
        fragment_pos[idx].push_back(out.position());
        out.copy(entities[idx].fragments[j].start, entities[idx].fragments[j].end);
      }
      new_span[idx] = {begin, out.position()};
    }
    for (std::size_t idx : embedded) {
      // Carried by the first rendering that holds it.
      const std::size_t container =
          *std::find_if(render_order.begin(), render_order.end(), [&](std::size_t t) { return within_fragment(idx, t); });
      const Fragment f = entities[idx].fragments.front();
      const auto& frags = entities[container].fragments;
      for (std::size_t j = 0; j < frags.size(); ++j) {
        if (!inside(f, frags[j])) continue;
        const std::size_t start = fragment_pos[container][j] + (f.start - frags[j].start);
        new_span[idx] = {start, start + f.size()};
        break;
      }
    }
    cursor = group.end;
  }
  out.copy(cursor, doc.document.length());

  OffsetMap map = out.take_map();
  AnnotatedDocument result;
  result.document = TextDocument(doc.doc_id(), out.take_text());
  result.relations = doc.relations;
  result.unresolved_refs = doc.unresolved_refs;
  result.entities.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) {
    EntityMention e = entities[i];
    if (new_span[i].end == 0) {
      // Untouched entity: shift by the copy entry that holds it.
      const Fragment span = e.covering_span();
      for (const auto& entry : map.entries) {
        if (entry.original && inside(span, *entry.original)) {
          const std::size_t shift_from = entry.original->start, shift_to = entry.rewritten.start;
          for (auto& f : e.fragments) f = {f.start - shift_from + shift_to, f.end - shift_from + shift_to};
          break;
        }
      }
    } else {
      e.fragments = {new_span[i]};
    }
    e.surface_text = result.entity_text(e);
    result.entities.push_back(std::move(e));
  }
  return {std::move(result), std::move(map)};
}

}  // namespace rarerel
