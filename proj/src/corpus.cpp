#include "rarerel/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace rarerel {

std::string_view name(ShapeClass shape) {
  switch (shape) {
    case ShapeClass::kFlat: return "flat";
    case ShapeClass::kDiscontinuous: return "discontinuous";
    case ShapeClass::kOverlapped: return "overlapped";
    case ShapeClass::kNested: return "nested";
  }
  return "";
}

ShapeClass classify_shape(const EntityMention& entity, const AnnotatedDocument& doc) {
  if (entity.discontinuous()) return ShapeClass::kDiscontinuous;
  const Fragment span = entity.covering_span();
  bool overlapped = false;
  for (const auto& other : doc.entities) {
    if (other.id == entity.id) continue;
    const Fragment o = other.covering_span();
    if (o.start <= span.start && span.end <= o.end && o != span) return ShapeClass::kNested;
    if (span.start < o.end && o.start < span.end) overlapped = true;
  }
  return overlapped ? ShapeClass::kOverlapped : ShapeClass::kFlat;
}

std::size_t CorpusStats::total_entities() const {
  std::size_t n = 0;
  for (const auto& [_, c] : entity_types) n += c;
  return n;
}

std::size_t CorpusStats::total_relations() const {
  std::size_t n = 0;
  for (const auto& [_, c] : relation_types) n += c;
  return n;
}

CorpusStats& CorpusStats::operator+=(const CorpusStats& other) {
  documents += other.documents;
  for (const auto& [k, v] : other.entity_types) entity_types[k] += v;
  for (const auto& [k, v] : other.relation_types) relation_types[k] += v;
  for (const auto& [k, v] : other.shapes) shapes[k] += v;
  return *this;
}

CorpusStats corpus_statistics(const std::vector<AnnotatedDocument>& split) {
  CorpusStats stats;
  for (EntityType t : kAllEntityTypes) stats.entity_types[t] = 0;
  for (Predicate p : kAllPredicates) stats.relation_types[p] = 0;
  for (ShapeClass s : kAllShapes) stats.shapes[s] = 0;
  for (const auto& doc : split) {
    ++stats.documents;
    for (const auto& e : doc.entities) {
      ++stats.entity_types[e.type];
      ++stats.shapes[classify_shape(e, doc)];
    }
    for (const auto& r : doc.relations) ++stats.relation_types[r.predicate];
  }
  return stats;
}

namespace {

// Row order of the published tables.
constexpr std::array<EntityType, 6> kEntityRows = {
    EntityType::kSign,    EntityType::kRareDisease,     EntityType::kDisease,
    EntityType::kAnaphor, EntityType::kRareSkinDisease, EntityType::kSymptom};
constexpr std::array<Predicate, 6> kRelationRows = {
    Predicate::kProduces,        Predicate::kAnaphora, Predicate::kIsA,
    Predicate::kIncreasesRiskOf, Predicate::kIsAcron,  Predicate::kIsSynon};

std::size_t lookup(const auto& map, auto key) {
  auto it = map.find(key);
  return it == map.end() ? 0 : it->second;
}

}  // namespace

std::string stats_table(const std::vector<NamedStats>& columns) {
  std::ostringstream out;
  auto row = [&](std::string_view label, auto value_of) {
    out << std::left << std::setw(20) << label;
    for (const auto& c : columns) out << std::right << std::setw(10) << value_of(c.stats);
    out << '\n';
  };
  auto rule = [&] { out << std::string(20 + 10 * columns.size(), '-') << '\n'; };

  out << std::left << std::setw(20) << "type";
  for (const auto& c : columns) out << std::right << std::setw(10) << c.split;
  out << '\n';
  rule();
  for (EntityType t : kEntityRows)
    row(name(t), [&](const CorpusStats& s) { return lookup(s.entity_types, t); });
  rule();
  for (Predicate p : kRelationRows)
    row(name(p), [&](const CorpusStats& s) { return lookup(s.relation_types, p); });
  rule();
  for (ShapeClass sc : kAllShapes)
    row(name(sc), [&](const CorpusStats& s) { return lookup(s.shapes, sc); });
  row("total", [](const CorpusStats& s) { return s.total_entities(); });
  rule();
  row("documents", [](const CorpusStats& s) { return s.documents; });
  return out.str();
}

std::string stats_json(const std::vector<NamedStats>& columns) {
  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  for (const auto& c : columns) {
    nlohmann::ordered_json col;
    col["documents"] = c.stats.documents;
    for (EntityType t : kEntityRows) col["entity_types"][std::string(name(t))] = lookup(c.stats.entity_types, t);
    for (Predicate p : kRelationRows)
      col["relation_types"][std::string(name(p))] = lookup(c.stats.relation_types, p);
    for (ShapeClass s : kAllShapes) col["shapes"][std::string(name(s))] = lookup(c.stats.shapes, s);
    col["shapes"]["total"] = c.stats.total_entities();
    root[c.split] = std::move(col);
  }
  return root.dump(2) + "\n";
}

CorpusSplit split_corpus(const std::vector<AnnotatedDocument>& corpus, const SplitSpec& spec) {
  std::unordered_map<std::string, const AnnotatedDocument*> by_id;
  for (const auto& doc : corpus) {
    if (!by_id.emplace(doc.doc_id(), &doc).second)
      throw SplitError("duplicate doc_id in corpus: " + doc.doc_id());
  }

  std::array<std::vector<std::string>, 3> assignment;
  if (spec.mode == SplitSpec::Mode::kRatio) {
    const double sum = std::accumulate(spec.ratios.begin(), spec.ratios.end(), 0.0);
    if (std::any_of(spec.ratios.begin(), spec.ratios.end(), [](double r) { return r < 0.0; }))
      throw SplitError("split ratios must be non-negative");
    if (std::abs(sum - 1.0) > 1e-9) throw SplitError("split ratios must sum to 1");

    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const auto& doc : corpus) ids.push_back(doc.doc_id());
    std::sort(ids.begin(), ids.end());
    std::mt19937_64 rng(spec.seed);
    std::shuffle(ids.begin(), ids.end(), rng);

    const double n = static_cast<double>(ids.size());
    const auto cut1 = static_cast<std::size_t>(std::llround(spec.ratios[0] * n));
    const auto cut2 = std::max(cut1, static_cast<std::size_t>(std::llround((spec.ratios[0] + spec.ratios[1]) * n)));
    assignment[0].assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(cut1));
    assignment[1].assign(ids.begin() + static_cast<std::ptrdiff_t>(cut1),
                         ids.begin() + static_cast<std::ptrdiff_t>(std::min(cut2, ids.size())));
    if (cut2 < ids.size()) assignment[2].assign(ids.begin() + static_cast<std::ptrdiff_t>(cut2), ids.end());
  } else {
    std::set<std::string> seen;
    for (std::size_t s = 0; s < 3; ++s) {
      for (const auto& id : spec.lists[s]) {
        if (!by_id.count(id)) throw SplitError("split list names unknown doc_id: " + id);
        if (!seen.insert(id).second) throw SplitError("doc_id listed more than once: " + id);
        assignment[s].push_back(id);
      }
    }
    for (const auto& doc : corpus)
      if (!seen.count(doc.doc_id())) throw SplitError("doc_id missing from split lists: " + doc.doc_id());
  }

  std::array<std::vector<AnnotatedDocument>, 3> parts;
  for (std::size_t s = 0; s < 3; ++s) {
    std::sort(assignment[s].begin(), assignment[s].end());
    for (const auto& id : assignment[s]) parts[s].push_back(*by_id.at(id));
  }
  return {std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

}  // namespace rarerel
