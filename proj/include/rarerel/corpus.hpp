#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rarerel/standoff.hpp"

namespace rarerel {

enum class ShapeClass { kFlat, kDiscontinuous, kOverlapped, kNested };

inline constexpr std::array<ShapeClass, 4> kAllShapes = {
    ShapeClass::kFlat, ShapeClass::kDiscontinuous, ShapeClass::kOverlapped, ShapeClass::kNested};

std::string_view name(ShapeClass shape);

/// discontinuous > nested > overlapped > flat.  Nesting and overlap are
/// judged on covering spans; identical spans are overlapped, not nested.
ShapeClass classify_shape(const EntityMention& entity, const AnnotatedDocument& doc);

struct CorpusStats {
  std::size_t documents = 0;
  std::map<EntityType, std::size_t> entity_types;
  std::map<Predicate, std::size_t> relation_types;
  std::map<ShapeClass, std::size_t> shapes;

  std::size_t total_entities() const;
  std::size_t total_relations() const;
  CorpusStats& operator+=(const CorpusStats& other);
  bool operator==(const CorpusStats&) const = default;
};

/// Every key of the closed type sets is present, zero when absent.
CorpusStats corpus_statistics(const std::vector<AnnotatedDocument>& split);

struct NamedStats {
  std::string split;
  CorpusStats stats;
};

/// Tabular text with one column per split: entity types, relation types,
/// then shape classes and their total.
std::string stats_table(const std::vector<NamedStats>& columns);
/// JSON document keyed `{split: {documents, entity_types, relation_types, shapes}}`.
std::string stats_json(const std::vector<NamedStats>& columns);

struct SplitSpec {
  enum class Mode { kRatio, kFileList };
  Mode mode = Mode::kRatio;
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  std::array<std::vector<std::string>, 3> lists;
  std::uint64_t seed = 0;
};

struct CorpusSplit {
  std::vector<AnnotatedDocument> train;
  std::vector<AnnotatedDocument> dev;
  std::vector<AnnotatedDocument> test;
};

class SplitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ratio mode sorts doc ids, shuffles them with the seed and cuts at the
/// rounded ratio boundaries; file-list mode follows the lists.  Each split is
/// returned sorted by doc id.
CorpusSplit split_corpus(const std::vector<AnnotatedDocument>& corpus, const SplitSpec& spec);

}  // namespace rarerel
