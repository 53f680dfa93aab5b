#include "rarerel/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "rarerel/text.hpp"

namespace rarerel {

std::string normalize_entity_text(std::string_view text, const ScoreOptions& options) {
  if (options.strict_case) return std::string(text);
  return to_lower(collapse_whitespace(text));
}

namespace {

Triple normalized(const Triple& t, const ScoreOptions& options) {
  Triple n = t;
  n.subject_text = normalize_entity_text(t.subject_text, options);
  n.object_text = normalize_entity_text(t.object_text, options);
  if (options.type_agnostic) {
    n.subject_type.reset();
    n.object_type.reset();
  }
  return n;
}

}  // namespace

std::set<Triple> collapse_duplicates(const std::vector<Triple>& triples, const ScoreOptions& options) {
  std::set<Triple> out;
  for (const auto& t : triples) out.insert(normalized(t, options));
  return out;
}

std::set<LabeledTriple> collapse_duplicates(const std::vector<LabeledTriple>& triples, const ScoreOptions& options) {
  std::set<LabeledTriple> out;
  for (const auto& t : triples) out.insert({t.doc_id, normalized(t.triple, options)});
  return out;
}

double Counts::precision() const { return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp); }
double Counts::recall() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
double Counts::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

Counts& Counts::operator+=(const Counts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

std::string ScoreReport::table() const {
  std::ostringstream out;
  out << std::left << std::setw(20) << "relation" << std::right << std::setw(7) << "TP" << std::setw(7) << "FP"
      << std::setw(7) << "FN" << std::setw(9) << "P" << std::setw(9) << "R" << std::setw(9) << "F1" << '\n';
  auto row = [&](std::string_view label, const Counts& c) {
    out << std::left << std::setw(20) << label << std::right << std::setw(7) << c.tp << std::setw(7) << c.fp
        << std::setw(7) << c.fn << std::fixed << std::setprecision(4) << std::setw(9) << c.precision() << std::setw(9)
        << c.recall() << std::setw(9) << c.f1() << '\n';
    out.unsetf(std::ios::fixed);
  };
  row("micro", micro);
  for (const auto& [p, c] : per_predicate) row(name(p), c);
  return out.str();
}

std::string ScoreReport::json() const {
  auto counts = [](const Counts& c) {
    nlohmann::ordered_json j;
    j["tp"] = c.tp;
    j["fp"] = c.fp;
    j["fn"] = c.fn;
    j["precision"] = c.precision();
    j["recall"] = c.recall();
    j["f1"] = c.f1();
    return j;
  };
  nlohmann::ordered_json root;
  root["micro"] = counts(micro);
  root["per_predicate"] = nlohmann::ordered_json::object();
  for (const auto& [p, c] : per_predicate) root["per_predicate"][std::string(name(p))] = counts(c);
  return root.dump(2) + "\n";
}

std::string ScoreReport::summary() const {
  std::ostringstream out;
  out << std::setprecision(4) << "P=" << micro.precision() << " R=" << micro.recall() << " F=" << micro.f1();
  return out.str();
}

ScoreReport score(const std::vector<LabeledTriple>& gold, const std::vector<LabeledTriple>& predicted,
                  const ScoreOptions& options) {
  const auto g = collapse_duplicates(gold, options);
  const auto p = collapse_duplicates(predicted, options);
  ScoreReport report;
  for (Predicate pred : kAllPredicates) report.per_predicate[pred] = {};
  for (const auto& t : p) {
    if (g.count(t)) ++report.per_predicate[t.triple.predicate].tp;
    else ++report.per_predicate[t.triple.predicate].fp;
  }
  for (const auto& t : g)
    if (!p.count(t)) ++report.per_predicate[t.triple.predicate].fn;
  for (const auto& [_, c] : report.per_predicate) report.micro += c;
  return report;
}

ScoreReport score(const std::vector<Triple>& gold, const std::vector<Triple>& predicted, const ScoreOptions& options) {
  auto label = [](const std::vector<Triple>& ts) {
    std::vector<LabeledTriple> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back({"", t});
    return out;
  };
  return score(label(gold), label(predicted), options);
}

std::string_view name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kPartialMatch: return "partial_match";
    case ErrorCategory::kTypeMismatch: return "type_mismatch";
    case ErrorCategory::kDiscontinuousMerge: return "discontinuous_merge";
    case ErrorCategory::kHallucinatedSpan: return "hallucinated_span";
    case ErrorCategory::kSpurious: return "spurious";
    case ErrorCategory::kMissing: return "missing";
  }
  return "";
}

double token_jaccard(std::string_view a, std::string_view b) {
  const auto ta = word_tokens(a), tb = word_tokens(b);
  const std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

namespace {

constexpr double kPartialThreshold = 0.5;

bool is_coordinator(const std::string& token) {
  return token == "and" || token == "or" || token == "and/or" || token == "&";
}

// True when `predicted` coordinates the heads of at least two distinct gold
// spans, e.g. "long, thin fingers and toes" against "... fingers" and "... toes".
bool merges_coordination(const std::string& predicted, const std::vector<std::string>& gold_spans) {
  const auto tokens = word_tokens(predicted);
  if (std::none_of(tokens.begin(), tokens.end(), is_coordinator)) return false;
  const std::set<std::string> vocabulary(tokens.begin(), tokens.end());
  std::set<std::string> heads;
  for (const auto& span : gold_spans) {
    const auto g = word_tokens(span);
    if (!g.empty() && vocabulary.count(g.back()) && !is_coordinator(g.back())) heads.insert(g.back());
  }
  return heads.size() >= 2;
}

}  // namespace

std::vector<ErrorRecord> categorize_errors(const std::vector<LabeledTriple>& gold,
                                           const std::vector<LabeledTriple>& predicted, const ScoreOptions& options,
                                           const std::map<std::string, std::string>& sources) {
  const auto g = collapse_duplicates(gold, options);
  const auto p = collapse_duplicates(predicted, options);
  std::vector<LabeledTriple> fps, fns;
  std::set_difference(p.begin(), p.end(), g.begin(), g.end(), std::back_inserter(fps));
  std::set_difference(g.begin(), g.end(), p.begin(), p.end(), std::back_inserter(fns));

  struct Candidate {
    double weight;
    std::size_t fp, fn;
    ErrorCategory category;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    for (std::size_t j = 0; j < fns.size(); ++j) {
      if (fps[i].doc_id != fns[j].doc_id) continue;
      const Triple& a = fps[i].triple;
      const Triple& b = fns[j].triple;
      if (a.predicate != b.predicate) continue;
      const bool same_types = a.subject_type == b.subject_type && a.object_type == b.object_type;
      if (a.subject_text == b.subject_text && a.object_text == b.object_text) {
        if (!same_types) candidates.push_back({3.0, i, j, ErrorCategory::kTypeMismatch});
        continue;
      }
      if (!same_types) continue;
      const double js = token_jaccard(a.subject_text, b.subject_text);
      const double jo = token_jaccard(a.object_text, b.object_text);
      if (std::min(js, jo) >= kPartialThreshold) candidates.push_back({js + jo, i, j, ErrorCategory::kPartialMatch});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.weight > y.weight; });

  std::vector<ErrorRecord> records;
  std::vector<bool> fp_used(fps.size(), false), fn_used(fns.size(), false);
  for (const auto& c : candidates) {
    if (fp_used[c.fp] || fn_used[c.fn]) continue;
    fp_used[c.fp] = fn_used[c.fn] = true;
    ErrorCategory category = c.category;
    if (category == ErrorCategory::kPartialMatch) {
      const Triple& a = fps[c.fp].triple;
      std::vector<std::string> gold_subjects, gold_objects;
      for (const auto& fn : fns) {
        if (fn.doc_id != fps[c.fp].doc_id || fn.triple.predicate != a.predicate) continue;
        gold_subjects.push_back(fn.triple.subject_text);
        gold_objects.push_back(fn.triple.object_text);
      }
      if (merges_coordination(a.subject_text, gold_subjects) || merges_coordination(a.object_text, gold_objects))
        category = ErrorCategory::kDiscontinuousMerge;
    }
    records.push_back({fps[c.fp].doc_id, category, fps[c.fp].triple, fns[c.fn].triple});
  }

  for (std::size_t i = 0; i < fps.size(); ++i) {
    if (fp_used[i]) continue;
    ErrorCategory category = ErrorCategory::kSpurious;
    if (auto it = sources.find(fps[i].doc_id); it != sources.end()) {
      const std::string haystack = to_lower(collapse_whitespace(it->second));
      const Triple& t = fps[i].triple;
      for (const std::string* span : {&t.subject_text, &t.object_text}) {
        if (haystack.find(to_lower(collapse_whitespace(*span))) == std::string::npos)
          category = ErrorCategory::kHallucinatedSpan;
      }
    }
    records.push_back({fps[i].doc_id, category, fps[i].triple, std::nullopt});
  }
  for (std::size_t j = 0; j < fns.size(); ++j)
    if (!fn_used[j]) records.push_back({fns[j].doc_id, ErrorCategory::kMissing, std::nullopt, fns[j].triple});

  std::stable_sort(records.begin(), records.end(),
                   [](const ErrorRecord& a, const ErrorRecord& b) { return a.doc_id < b.doc_id; });
  return records;
}

std::string audit_lines(const std::vector<ErrorRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    out << r.doc_id << '\t' << name(r.category) << '\t' << (r.predicted ? describe(*r.predicted) : "-") << '\t'
        << (r.gold ? describe(*r.gold) : "-") << '\n';
  }
  return out.str();
}

std::vector<LabeledTriple> read_triples(std::istream& in) {
  std::vector<LabeledTriple> out;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& reason) {
    throw TripleFileError("line " + std::to_string(line_no) + ": " + reason);
  };
  auto type_field = [&](std::string_view field) -> std::optional<EntityType> {
    field = trim(field);
    if (field.empty() || field == "-") return std::nullopt;
    auto t = parse_entity_type(field);
    if (!t) fail("unknown entity type '" + std::string(field) + "'");
    return t;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 6) fail("expected 6 tab-separated fields, got " + std::to_string(fields.size()));
    LabeledTriple t;
    t.doc_id = std::string(trim(fields[0]));
    t.triple.subject_text = std::string(trim(fields[1]));
    t.triple.subject_type = type_field(fields[2]);
    const auto predicate = parse_predicate(trim(fields[3]));
    if (!predicate) fail("unknown predicate '" + std::string(fields[3]) + "'");
    t.triple.predicate = *predicate;
    t.triple.object_text = std::string(trim(fields[4]));
    t.triple.object_type = type_field(fields[5]);
    if (t.doc_id.empty() || t.triple.subject_text.empty() || t.triple.object_text.empty())
      fail("doc_id and entity texts must be non-empty");
    out.push_back(std::move(t));
  }
  return out;
}

void write_triples(std::ostream& out, const std::vector<LabeledTriple>& triples) {
  auto type = [](const std::optional<EntityType>& t) { return t ? name(*t) : std::string_view(); };
  for (const auto& t : triples) {
    out << t.doc_id << '\t' << t.triple.subject_text << '\t' << type(t.triple.subject_type) << '\t'
        << name(t.triple.predicate) << '\t' << t.triple.object_text << '\t' << type(t.triple.object_type) << '\n';
  }
}

}  // namespace rarerel
