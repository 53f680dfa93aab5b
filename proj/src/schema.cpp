#include "rarerel/schema.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <tuple>

#include "json.hpp"
#include "rarerel/text.hpp"

namespace rarerel {

std::string describe(const Triple& t) {
  auto type = [](const std::optional<EntityType>& e) { return e ? std::string(name(*e)) : std::string("?"); };
  return t.subject_text + " [" + type(t.subject_type) + "] -" + std::string(name(t.predicate)) + "-> " +
         t.object_text + " [" + type(t.object_type) + "]";
}

std::string_view name(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::kSeq2Rel: return "seq2rel";
    case SchemaKind::kRelIs: return "rel-is";
    case SchemaKind::kNaturalLang: return "natural-lang";
  }
  return "";
}

std::optional<SchemaKind> parse_schema_kind(std::string_view s) {
  const std::string key = to_lower(s);
  if (key == "seq2rel") return SchemaKind::kSeq2Rel;
  if (key == "rel-is" || key == "rel_is") return SchemaKind::kRelIs;
  if (key == "natural-lang" || key == "natural_lang") return SchemaKind::kNaturalLang;
  return std::nullopt;
}

EncodedTypes encoded_types(SchemaKind kind, Predicate predicate) {
  switch (kind) {
    case SchemaKind::kSeq2Rel: return {true, true};
    case SchemaKind::kRelIs: return {false, false};
    case SchemaKind::kNaturalLang:
      if (predicate == Predicate::kAnaphora) return {true, false};
      if (predicate == Predicate::kIsAcron) return {false, true};
      return {true, true};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Noun map

PredicateNounMap::PredicateNounMap()
    : nouns_{{Predicate::kProduces, "producer"}, {Predicate::kIncreasesRiskOf, "risk factor"},
             {Predicate::kIsA, "hyponym"},       {Predicate::kIsAcron, "acronym"},
             {Predicate::kIsSynon, "synonym"},   {Predicate::kAnaphora, "anaphor"}} {}

PredicateNounMap PredicateNounMap::from_json(std::string_view json) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("noun map is not valid JSON: ") + e.what());
  }
  if (!parsed.is_object()) throw SchemaError("noun map must be a JSON object");
  PredicateNounMap map;
  map.nouns_.clear();
  for (const auto& [key, value] : parsed.items()) {
    const auto p = parse_predicate(key);
    if (!p) throw SchemaError("noun map: unknown predicate '" + key + "'");
    if (!value.is_string()) throw SchemaError("noun map: value for '" + key + "' must be a string");
    map.nouns_[*p] = value.get<std::string>();
  }
  map.validate();
  return map;
}

void PredicateNounMap::validate() const {
  std::set<std::string> seen;
  for (Predicate p : kAllPredicates) {
    auto it = nouns_.find(p);
    if (it == nouns_.end() || trim(it->second).empty())
      throw SchemaError("noun map: missing noun for " + std::string(name(p)));
    if (!seen.insert(to_lower(it->second)).second)
      throw SchemaError("noun map: noun '" + it->second + "' used twice");
  }
  if (nouns_.at(Predicate::kIsA) != "hyponym") throw SchemaError("noun map: is_a must map to 'hyponym'");
  if (nouns_.at(Predicate::kIsSynon) != "synonym") throw SchemaError("noun map: is_synon must map to 'synonym'");
}

std::optional<Predicate> PredicateNounMap::predicate_for(std::string_view noun) const {
  const std::string key = to_lower(trim(noun));
  for (const auto& [p, n] : nouns_)
    if (to_lower(n) == key) return p;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

std::string_view seq2rel_type_token(EntityType type) {
  switch (type) {
    case EntityType::kDisease: return "@Disease@";
    case EntityType::kRareDisease: return "@RareDisease@";
    case EntityType::kSymptom: return "@Symptom@";
    case EntityType::kSign: return "@Sign@";
    case EntityType::kAnaphor: return "@Anaphor@";
    case EntityType::kRareSkinDisease: return "@RareSkinDisease@";
  }
  return "";
}

std::string seq2rel_predicate_token(Predicate p) {
  std::string token = "@";
  for (char c : name(p)) token.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return token + "@";
}

constexpr std::string_view kNoRel = "@NOREL@";
constexpr std::string_view kEnd = "@END@";

std::string type_words(const std::optional<EntityType>& t) { return t ? std::string(words(*t)) : std::string(); }

std::string natural_sentence(const Triple& t) {
  const std::string& s = t.subject_text;
  const std::string& o = t.object_text;
  const std::string st = type_words(t.subject_type);
  const std::string ot = type_words(t.object_type);
  switch (t.predicate) {
    case Predicate::kProduces: return s + " is a " + st + " that produces " + o + ", as a " + ot;
    case Predicate::kAnaphora: return "The term " + o + " is an anaphor that refers back to the entity of the " + st + " " + s;
    case Predicate::kIsSynon: return "The " + st + " " + s + " and the " + ot + " " + o + " are synonyms";
    case Predicate::kIsAcron: return "The acronym " + s + " stands for " + o + ", a " + ot;
    case Predicate::kIncreasesRiskOf:
      return "The presence of the " + st + " " + s + " increases the risk of developing the " + ot + " " + o;
    case Predicate::kIsA: return "The " + st + " " + s + " is a type of " + o + ", a " + ot;
  }
  return "";
}

}  // namespace

std::vector<Triple> document_triples(const AnnotatedDocument& doc) {
  struct Keyed {
    std::size_t subject_pos;
    std::size_t object_pos;
    std::string predicate_token;
    Triple triple;
  };
  std::vector<Keyed> keyed;
  for (const auto& r : doc.relations) {
    const EntityMention* subj = doc.find_entity(r.subject_ref);
    const EntityMention* obj = doc.find_entity(r.object_ref);
    if (!subj || !obj) continue;
    Triple t{doc.entity_text(*subj), subj->type, r.predicate, doc.entity_text(*obj), obj->type};
    const std::size_t sp = subj->covering_span().start, op = obj->covering_span().start;
    auto it = std::find_if(keyed.begin(), keyed.end(), [&](const Keyed& k) { return k.triple == t; });
    if (it == keyed.end()) {
      keyed.push_back({sp, op, seq2rel_predicate_token(r.predicate), std::move(t)});
    } else if (std::tie(sp, op) < std::tie(it->subject_pos, it->object_pos)) {
      it->subject_pos = sp;
      it->object_pos = op;
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.subject_pos, a.object_pos, a.predicate_token, a.triple) <
           std::tie(b.subject_pos, b.object_pos, b.predicate_token, b.triple);
  });
  std::vector<Triple> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::move(k.triple));
  return out;
}

std::string encode_triples(const std::vector<Triple>& triples, SchemaKind kind, const PredicateNounMap& nouns) {
  std::string out;
  switch (kind) {
    case SchemaKind::kSeq2Rel:
      if (triples.empty()) return std::string(kNoRel);
      for (const auto& t : triples) {
        if (!t.subject_type || !t.object_type) throw SchemaError("seq2rel needs typed entities: " + describe(t));
        out += t.subject_text + ' ' + std::string(seq2rel_type_token(*t.subject_type)) + ' ' + t.object_text + ' ' +
               std::string(seq2rel_type_token(*t.object_type)) + ' ' + seq2rel_predicate_token(t.predicate) + ' ';
      }
      return out + std::string(kEnd);
    case SchemaKind::kRelIs:
      for (const auto& t : triples) {
        if (!out.empty()) out.push_back(' ');
        out += "The relation between " + t.subject_text + " and " + t.object_text + " is " + nouns.noun(t.predicate) + ".";
      }
      return out;
    case SchemaKind::kNaturalLang:
      for (const auto& t : triples) {
        const EncodedTypes need = encoded_types(kind, t.predicate);
        if ((need.subject && !t.subject_type) || (need.object && !t.object_type))
          throw SchemaError("natural-lang template needs entity type: " + describe(t));
        if (!out.empty()) out += "; ";
        out += natural_sentence(t);
      }
      return out;
  }
  return out;
}

std::string encode_target(const AnnotatedDocument& doc, SchemaKind kind, const PredicateNounMap& nouns) {
  return encode_triples(document_triples(doc), kind, nouns);
}

std::vector<std::string> special_tokens() {
  std::vector<std::string> tokens;
  for (EntityType t : kAllEntityTypes) tokens.emplace_back(seq2rel_type_token(t));
  for (Predicate p : kAllPredicates) tokens.push_back(seq2rel_predicate_token(p));
  tokens.emplace_back(kNoRel);
  tokens.emplace_back(kEnd);
  return tokens;
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

std::optional<EntityType> type_from_token(std::string_view token) {
  for (EntityType t : kAllEntityTypes)
    if (seq2rel_type_token(t) == token) return t;
  return std::nullopt;
}

std::optional<Predicate> predicate_from_token(std::string_view token) {
  for (Predicate p : kAllPredicates)
    if (seq2rel_predicate_token(p) == token) return p;
  return std::nullopt;
}

Decoded decode_seq2rel(std::string_view generation) {
  static const std::regex kToken(R"(@[^@\s]+@)");
  Decoded out;
  std::vector<std::pair<std::string, EntityType>> pending;
  const std::string text(generation);
  std::size_t cursor = 0;
  auto drop_pending = [&](const std::string& reason) {
    if (pending.empty()) return;
    std::string joined;
    for (const auto& [span, _] : pending) joined += (joined.empty() ? "" : " | ") + span;
    out.skipped.push_back({joined, reason});
    pending.clear();
  };

  for (auto it = std::sregex_iterator(text.begin(), text.end(), kToken); it != std::sregex_iterator(); ++it) {
    const std::string token = it->str();
    const std::string span(trim(std::string_view(text).substr(cursor, static_cast<std::size_t>(it->position()) - cursor)));
    cursor = static_cast<std::size_t>(it->position() + it->length());

    if (auto type = type_from_token(token)) {
      if (span.empty()) out.skipped.push_back({token, "entity type token without a span"});
      else pending.emplace_back(span, *type);
    } else if (auto predicate = predicate_from_token(token)) {
      if (!span.empty()) out.skipped.push_back({span, "text without an entity type before " + token});
      if (pending.size() == 2) {
        out.triples.push_back({pending[0].first, pending[0].second, *predicate, pending[1].first, pending[1].second});
        pending.clear();
      } else if (pending.empty()) {
        if (span.empty()) out.skipped.push_back({token, "predicate without entities"});
      } else {
        drop_pending(token + " needs exactly two typed entities");
      }
    } else if (token == kEnd) {
      if (!span.empty()) out.skipped.push_back({span, "text without an entity type before @END@"});
      drop_pending("incomplete relation before @END@");
      const std::string rest(trim(std::string_view(text).substr(cursor)));
      if (!rest.empty()) out.skipped.push_back({rest, "text after @END@"});
      return out;
    } else if (token == kNoRel) {
      if (!span.empty()) out.skipped.push_back({span, "text before @NOREL@"});
    } else {
      drop_pending("relation interrupted by " + token);
      out.skipped.push_back({span.empty() ? token : span + " " + token, "unknown special token"});
    }
  }
  const std::string rest(trim(std::string_view(text).substr(cursor)));
  if (!rest.empty()) out.skipped.push_back({rest, "trailing text without special tokens"});
  drop_pending("incomplete relation at end of generation");
  return out;
}

std::string regex_escape(std::string_view s) {
  static const std::string kSpecial = R"(\^$.|?*+()[]{}/)";
  std::string out;
  for (char c : s) {
    if (kSpecial.find(c) != std::string::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string type_alternation() {
  return "(rare skin disease|skin rare disease|rare disease|disease|symptom|sign|anaphor)";
}

std::string group(const std::smatch& m, std::size_t i) { return std::string(trim(m[static_cast<int>(i)].str())); }

Decoded decode_rel_is(std::string_view generation, const PredicateNounMap& nouns) {
  static const std::regex kLead("the relation(ship)? between ", std::regex::icase);
  std::vector<std::string> noun_list;
  for (Predicate p : kAllPredicates) noun_list.push_back(nouns.noun(p));
  std::sort(noun_list.begin(), noun_list.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::string alternatives;
  for (const auto& n : noun_list) alternatives += (alternatives.empty() ? "" : "|") + regex_escape(n);
  const std::regex sentence("the relation(?:ship)? between (.+?) and (.+) is (" + alternatives + ")\\s*\\.?\\s*",
                            std::regex::icase);

  Decoded out;
  const std::string text(generation);
  std::vector<std::size_t> starts;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kLead); it != std::sregex_iterator(); ++it)
    starts.push_back(static_cast<std::size_t>(it->position()));
  const std::string head(trim(std::string_view(text).substr(0, starts.empty() ? text.size() : starts.front())));
  if (!head.empty()) out.skipped.push_back({head, "text outside any rel-is sentence"});

  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::size_t end = i + 1 < starts.size() ? starts[i + 1] : text.size();
    const std::string segment(trim(std::string_view(text).substr(starts[i], end - starts[i])));
    std::smatch m;
    if (!std::regex_match(segment, m, sentence)) {
      out.skipped.push_back({segment, "does not match the rel-is template"});
      continue;
    }
    const auto predicate = nouns.predicate_for(m[3].str());
    out.triples.push_back({group(m, 1), std::nullopt, *predicate, group(m, 2), std::nullopt});
  }
  return out;
}

struct Template {
  Predicate predicate;
  std::regex pattern;
  // Capture group indices; 0 means not encoded.
  int subject, subject_type, object, object_type;
};

const std::vector<Template>& natural_templates() {
  static const std::vector<Template> kTemplates = [] {
    const std::string T = type_alternation();
    const auto flags = std::regex::icase;
    std::vector<Template> t;
    t.push_back({Predicate::kAnaphora,
                 std::regex("the term (.+?) is an anaphor that refers back to the entity of the " + T + " (.+)", flags),
                 3, 2, 1, 0});
    t.push_back({Predicate::kIsAcron, std::regex("the acronym (.+?) stands for (.+), an? " + T, flags), 1, 0, 2, 3});
    t.push_back({Predicate::kIncreasesRiskOf,
                 std::regex("the presence of the " + T + " (.+?) increases the risk of developing the " + T +
                                " (?:of )?(.+)",
                            flags),
                 2, 1, 4, 3});
    t.push_back({Predicate::kIsSynon, std::regex("the " + T + " (.+?) and the " + T + " (.+) are synonyms?", flags), 2,
                 1, 4, 3});
    t.push_back({Predicate::kIsA, std::regex("the " + T + " (.+?) is an? type of (.+), an? " + T, flags), 2, 1, 3, 4});
    t.push_back({Predicate::kProduces, std::regex("(.+?) is an? " + T + " that produces (.+), as an? " + T, flags), 1,
                 2, 3, 4});
    return t;
  }();
  return kTemplates;
}

Decoded decode_natural_lang(std::string_view generation) {
  Decoded out;
  std::string text(generation);
  std::replace(text.begin(), text.end(), '\n', ';');
  for (std::string_view piece : split(text, ';')) {
    std::string_view segment = trim(piece);
    while (!segment.empty() && segment.back() == '.') segment = trim(segment.substr(0, segment.size() - 1));
    if (segment.empty()) continue;
    const std::string s(segment);
    bool matched = false;
    for (const auto& tpl : natural_templates()) {
      std::smatch m;
      if (!std::regex_match(s, m, tpl.pattern)) continue;
      Triple t;
      t.predicate = tpl.predicate;
      t.subject_text = group(m, static_cast<std::size_t>(tpl.subject));
      t.object_text = group(m, static_cast<std::size_t>(tpl.object));
      if (tpl.subject_type) t.subject_type = parse_entity_type(m[tpl.subject_type].str());
      if (tpl.object_type) t.object_type = parse_entity_type(m[tpl.object_type].str());
      if (t.subject_text.empty() || t.object_text.empty()) break;
      out.triples.push_back(std::move(t));
      matched = true;
      break;
    }
    if (!matched) out.skipped.push_back({s, "does not match any natural-lang template"});
  }
  return out;
}

}  // namespace

Decoded decode_target(std::string_view generation, SchemaKind kind, const PredicateNounMap& nouns) {
  switch (kind) {
    case SchemaKind::kSeq2Rel: return decode_seq2rel(generation);
    case SchemaKind::kRelIs: return decode_rel_is(generation, nouns);
    case SchemaKind::kNaturalLang: return decode_natural_lang(generation);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Prompts and post-processing

std::string build_prompt(std::string_view doc_text, bool copy_instruct) {
  if (!copy_instruct) return std::string(doc_text);
  return std::string(kCopyInstruction) + "\n\n" + std::string(doc_text);
}

std::string normalize_generation(std::string_view generation) {
  const std::string collapsed = collapse_whitespace(generation);
  std::string out;
  out.reserve(collapsed.size());
  for (std::size_t i = 0; i < collapsed.size(); ++i) {
    const char c = collapsed[i];
    if (c == ' ') {
      const char prev = out.empty() ? '\0' : out.back();
      const char next = i + 1 < collapsed.size() ? collapsed[i + 1] : '\0';
      if (prev == '-' || prev == '/' || prev == '(') continue;
      if (next == '-' || next == '/' || next == ')') continue;
    }
    out.push_back(c);
  }
  static const std::regex kSynonyms(R"(\b(is) synonyms\b)", std::regex::icase);
  return std::regex_replace(out, kSynonyms, "$1 synonym");
}

}  // namespace rarerel
