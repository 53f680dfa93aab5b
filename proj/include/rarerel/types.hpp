#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace rarerel {

enum class EntityType {
  kDisease,
  kRareDisease,
  kSymptom,
  kSign,
  kAnaphor,
  kRareSkinDisease,
};

enum class Predicate {
  kProduces,
  kIncreasesRiskOf,
  kIsA,
  kIsAcron,
  kIsSynon,
  kAnaphora,
};

inline constexpr std::array<EntityType, 6> kAllEntityTypes = {
    EntityType::kDisease, EntityType::kRareDisease, EntityType::kSymptom,
    EntityType::kSign,    EntityType::kAnaphor,     EntityType::kRareSkinDisease,
};

inline constexpr std::array<Predicate, 6> kAllPredicates = {
    Predicate::kProduces, Predicate::kIncreasesRiskOf, Predicate::kIsA,
    Predicate::kIsAcron,  Predicate::kIsSynon,         Predicate::kAnaphora,
};

/// Canonical snake_case name: "rare_disease", "increases_risk_of", ...
std::string_view name(EntityType type);
std::string_view name(Predicate predicate);

/// Lowercase words used inside natural-language templates ("rare skin disease").
std::string_view words(EntityType type);

/// Label written to .ann files ("RAREDISEASE").
std::string_view standoff_label(EntityType type);

/// Label lookup is case-insensitive and ignores spaces, hyphens and
/// underscores, so "SKINRAREDISEASE", "skin rare disease" and
/// "rare_skin_disease" all resolve to the same type.  The corpus spelling
/// "increase_risk_of" is accepted for increases_risk_of.
std::optional<EntityType> parse_entity_type(std::string_view label);
std::optional<Predicate> parse_predicate(std::string_view label);

}  // namespace rarerel
