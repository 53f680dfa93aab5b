#include "rarerel/types.hpp"

#include <cctype>

namespace rarerel {

namespace {

std::string squash(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    if (c == ' ' || c == '-' || c == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view name(EntityType type) {
  switch (type) {
    case EntityType::kDisease: return "disease";
    case EntityType::kRareDisease: return "rare_disease";
    case EntityType::kSymptom: return "symptom";
    case EntityType::kSign: return "sign";
    case EntityType::kAnaphor: return "anaphor";
    case EntityType::kRareSkinDisease: return "rare_skin_disease";
  }
  return "";
}

std::string_view name(Predicate predicate) {
  switch (predicate) {
    case Predicate::kProduces: return "produces";
    case Predicate::kIncreasesRiskOf: return "increases_risk_of";
    case Predicate::kIsA: return "is_a";
    case Predicate::kIsAcron: return "is_acron";
    case Predicate::kIsSynon: return "is_synon";
    case Predicate::kAnaphora: return "anaphora";
  }
  return "";
}

std::string_view words(EntityType type) {
  switch (type) {
    case EntityType::kDisease: return "disease";
    case EntityType::kRareDisease: return "rare disease";
    case EntityType::kSymptom: return "symptom";
    case EntityType::kSign: return "sign";
    case EntityType::kAnaphor: return "anaphor";
    case EntityType::kRareSkinDisease: return "rare skin disease";
  }
  return "";
}

std::string_view standoff_label(EntityType type) {
  switch (type) {
    case EntityType::kDisease: return "DISEASE";
    case EntityType::kRareDisease: return "RAREDISEASE";
    case EntityType::kSymptom: return "SYMPTOM";
    case EntityType::kSign: return "SIGN";
    case EntityType::kAnaphor: return "ANAPHOR";
    case EntityType::kRareSkinDisease: return "SKINRAREDISEASE";
  }
  return "";
}

std::optional<EntityType> parse_entity_type(std::string_view label) {
  const std::string key = squash(label);
  if (key == "disease") return EntityType::kDisease;
  if (key == "raredisease") return EntityType::kRareDisease;
  if (key == "symptom") return EntityType::kSymptom;
  if (key == "sign") return EntityType::kSign;
  if (key == "anaphor") return EntityType::kAnaphor;
  if (key == "rareskindisease" || key == "skinraredisease") return EntityType::kRareSkinDisease;
  return std::nullopt;
}

std::optional<Predicate> parse_predicate(std::string_view label) {
  const std::string key = squash(label);
  if (key == "produces") return Predicate::kProduces;
  if (key == "increasesriskof" || key == "increaseriskof") return Predicate::kIncreasesRiskOf;
  if (key == "isa") return Predicate::kIsA;
  if (key == "isacron") return Predicate::kIsAcron;
  if (key == "issynon") return Predicate::kIsSynon;
  if (key == "anaphora") return Predicate::kAnaphora;
  return std::nullopt;
}

}  // namespace rarerel
