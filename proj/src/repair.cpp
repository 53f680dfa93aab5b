#include "rarerel/repair.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "rarerel/text.hpp"

namespace rarerel {

std::string_view name(RepairRule rule) {
  switch (rule) {
    case RepairRule::kRelationArgument: return "relation_argument";
    case RepairRule::kSpanBoundary: return "span_boundary";
    case RepairRule::kFragmentOrder: return "fragment_order";
  }
  return "";
}

void RepairLog::append(const RepairLog& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

std::size_t RepairLog::touched(RepairRule rule) const {
  std::set<std::string> ids;
  for (const auto& e : entries)
    if (e.rule == rule) ids.insert(e.target_id);
  return ids.size();
}

std::string RepairLog::to_string() const {
  std::ostringstream out;
  for (const auto& e : entries)
    out << doc_id << ' ' << name(e.rule) << ' ' << e.target_id << ' ' << e.before << " -> " << e.after
        << '\n';
  return out.str();
}

namespace {

std::string render_fragments(const std::vector<Fragment>& fragments) {
  std::string out;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (i) out.push_back(';');
    out += std::to_string(fragments[i].start) + ' ' + std::to_string(fragments[i].end);
  }
  return out;
}

std::string render_span(const std::vector<Fragment>& fragments, const std::string& surface) {
  return render_fragments(fragments) + " \"" + surface + '"';
}

std::string joined_slices(const TextDocument& text, const std::vector<Fragment>& fragments) {
  std::string out;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (i) out.push_back(' ');
    out += text.slice(fragments[i]);
  }
  return out;
}

bool word_boundary(const TextDocument& text, std::size_t pos) {
  if (pos == 0 || pos >= text.length()) return true;
  return !(is_word_char(text.at(pos - 1)) && is_word_char(text.at(pos)));
}

// Searches per-fragment end shifts in {0, +1, -1} for the assignment with the
// fewest changes that reproduces `surface`.
std::optional<std::vector<Fragment>> adjust_ends(const TextDocument& text,
                                                 const std::vector<Fragment>& fragments,
                                                 const std::string& surface) {
  constexpr std::size_t kMaxFragments = 8;
  const std::size_t k = fragments.size();
  if (k > kMaxFragments) return std::nullopt;

  std::size_t combos = 1;
  for (std::size_t i = 0; i < k; ++i) combos *= 3;

  std::optional<std::vector<Fragment>> best;
  std::size_t best_changes = k + 1;
  for (std::size_t code = 1; code < combos; ++code) {
    std::vector<Fragment> candidate = fragments;
    std::size_t changes = 0;
    bool valid = true;
    std::size_t digits = code;
    for (std::size_t i = 0; i < k && valid; ++i, digits /= 3) {
      const std::size_t shift = digits % 3;
      if (shift == 0) continue;
      ++changes;
      Fragment& f = candidate[i];
      if (shift == 1) {
        if (f.end + 1 > text.length()) valid = false;
        else f.end += 1;
      } else {
        if (f.end - 1 <= f.start) valid = false;
        else f.end -= 1;
      }
      if (valid && !word_boundary(text, f.end)) valid = false;
      if (valid && i + 1 < k && f.end > candidate[i + 1].start) valid = false;
    }
    if (!valid || changes >= best_changes) continue;
    if (joined_slices(text, candidate) != surface) continue;
    best = std::move(candidate);
    best_changes = changes;
  }
  return best;
}

bool extend_truncated_ends(const TextDocument& text, std::vector<Fragment>& fragments) {
  bool changed = false;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    Fragment& f = fragments[i];
    if (word_boundary(text, f.end) || !word_boundary(text, f.end + 1)) continue;
    if (i + 1 < fragments.size() && f.end + 1 > fragments[i + 1].start) continue;
    f.end += 1;
    changed = true;
  }
  return changed;
}

}  // namespace

std::pair<AnnotatedDocument, RepairLog> fix_relation_arguments(AnnotatedDocument doc) {
  RepairLog log{doc.doc_id(), {}};
  for (auto& relation : doc.relations) {
    for (ArgSlot slot : {ArgSlot::kArg1, ArgSlot::kArg2}) {
      std::string& ref = slot == ArgSlot::kArg1 ? relation.subject_ref : relation.object_ref;
      if (doc.find_entity(ref)) continue;
      const std::string before = std::string(name(slot)) + ':' + ref;
      if (ref.size() > 2 && ref.back() == '0' && doc.find_entity(ref.substr(0, ref.size() - 1))) {
        ref.pop_back();
        log.entries.push_back({RepairRule::kRelationArgument, relation.id, before,
                               std::string(name(slot)) + ':' + ref});
      } else {
        log.entries.push_back(
            {RepairRule::kRelationArgument, relation.id, before, std::string(kUnresolved)});
      }
    }
  }
  doc.refresh_unresolved();
  return {std::move(doc), std::move(log)};
}

std::pair<AnnotatedDocument, RepairLog> fix_span_boundaries(AnnotatedDocument doc) {
  RepairLog log{doc.doc_id(), {}};
  for (auto& entity : doc.entities) {
    const std::string slices = joined_slices(doc.document, entity.fragments);
    const std::string before = render_span(entity.fragments, entity.surface_text);
    if (slices == entity.surface_text) {
      // Offsets and surface truncated together: the end splits a word one
      // code point short of its boundary.
      if (!extend_truncated_ends(doc.document, entity.fragments)) continue;
      entity.surface_text = joined_slices(doc.document, entity.fragments);
      log.entries.push_back({RepairRule::kSpanBoundary, entity.id, before,
                             render_span(entity.fragments, entity.surface_text)});
      continue;
    }
    if (auto adjusted = adjust_ends(doc.document, entity.fragments, entity.surface_text)) {
      entity.fragments = std::move(*adjusted);
    } else {
      entity.surface_text = slices;
    }
    log.entries.push_back({RepairRule::kSpanBoundary, entity.id, before,
                           render_span(entity.fragments, entity.surface_text)});
  }
  return {std::move(doc), std::move(log)};
}

std::pair<AnnotatedDocument, RepairLog> fix_fragment_order(AnnotatedDocument doc) {
  RepairLog log{doc.doc_id(), {}};
  for (auto& entity : doc.entities) {
    std::vector<Fragment> sorted = entity.fragments;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i - 1].end > sorted[i].start)
        throw RepairError(doc.doc_id() + ": entity " + entity.id + " has overlapping fragments " +
                          render_fragments(sorted));
    }
    if (sorted == entity.fragments) continue;
    const std::string before = render_span(entity.fragments, entity.surface_text);
    entity.fragments = std::move(sorted);
    entity.surface_text = joined_slices(doc.document, entity.fragments);
    log.entries.push_back({RepairRule::kFragmentOrder, entity.id, before,
                           render_span(entity.fragments, entity.surface_text)});
  }
  return {std::move(doc), std::move(log)};
}

std::pair<AnnotatedDocument, RepairLog> repair_all(AnnotatedDocument doc) {
  auto [ordered, log] = fix_fragment_order(std::move(doc));
  auto [spans, span_log] = fix_span_boundaries(std::move(ordered));
  auto [args, arg_log] = fix_relation_arguments(std::move(spans));
  log.append(span_log);
  log.append(arg_log);
  return {std::move(args), std::move(log)};
}

}  // namespace rarerel
