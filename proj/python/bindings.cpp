#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rarerel/cli.hpp"
#include "rarerel/corpus.hpp"
#include "rarerel/eval.hpp"
#include "rarerel/flatten.hpp"
#include "rarerel/repair.hpp"
#include "rarerel/schema.hpp"
#include "rarerel/standoff.hpp"

namespace py = pybind11;
using namespace rarerel;

namespace {

py::dict stats_dict(const CorpusStats& s) {
  py::dict entity_types, relation_types, shapes;
  for (const auto& [k, v] : s.entity_types) entity_types[py::str(std::string(name(k)))] = v;
  for (const auto& [k, v] : s.relation_types) relation_types[py::str(std::string(name(k)))] = v;
  for (const auto& [k, v] : s.shapes) shapes[py::str(std::string(name(k)))] = v;
  py::dict out;
  out["documents"] = s.documents;
  out["entity_types"] = entity_types;
  out["relation_types"] = relation_types;
  out["shapes"] = shapes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Standoff parsing, repair, flattening, schema encoding and strict scoring for relation extraction.";

  py::enum_<EntityType>(m, "EntityType")
      .value("disease", EntityType::kDisease)
      .value("rare_disease", EntityType::kRareDisease)
      .value("symptom", EntityType::kSymptom)
      .value("sign", EntityType::kSign)
      .value("anaphor", EntityType::kAnaphor)
      .value("rare_skin_disease", EntityType::kRareSkinDisease);

  py::enum_<Predicate>(m, "Predicate")
      .value("produces", Predicate::kProduces)
      .value("increases_risk_of", Predicate::kIncreasesRiskOf)
      .value("is_a", Predicate::kIsA)
      .value("is_acron", Predicate::kIsAcron)
      .value("is_synon", Predicate::kIsSynon)
      .value("anaphora", Predicate::kAnaphora);

  py::enum_<SchemaKind>(m, "SchemaKind")
      .value("seq2rel", SchemaKind::kSeq2Rel)
      .value("rel_is", SchemaKind::kRelIs)
      .value("natural_lang", SchemaKind::kNaturalLang);

  py::class_<Fragment>(m, "Fragment")
      .def(py::init<std::size_t, std::size_t>(), py::arg("start"), py::arg("end"))
      .def_readwrite("start", &Fragment::start)
      .def_readwrite("end", &Fragment::end)
      .def(py::self == py::self)
      .def("__repr__", [](const Fragment& f) {
        return "Fragment(" + std::to_string(f.start) + ", " + std::to_string(f.end) + ")";
      });

  py::class_<EntityMention>(m, "EntityMention")
      .def_readonly("id", &EntityMention::id)
      .def_readonly("type", &EntityMention::type)
      .def_readonly("fragments", &EntityMention::fragments)
      .def_readonly("surface_text", &EntityMention::surface_text);

  py::class_<RelationInstance>(m, "RelationInstance")
      .def_readonly("id", &RelationInstance::id)
      .def_readonly("predicate", &RelationInstance::predicate)
      .def_readonly("subject_ref", &RelationInstance::subject_ref)
      .def_readonly("object_ref", &RelationInstance::object_ref);

  py::class_<AnnotatedDocument>(m, "AnnotatedDocument")
      .def_property_readonly("doc_id", &AnnotatedDocument::doc_id)
      .def_property_readonly("text", [](const AnnotatedDocument& d) { return d.document.text(); })
      .def_readonly("entities", &AnnotatedDocument::entities)
      .def_readonly("relations", &AnnotatedDocument::relations)
      .def_property_readonly("unresolved_refs",
                             [](const AnnotatedDocument& d) {
                               py::list out;
                               for (const auto& r : d.unresolved_refs)
                                 out.append(py::make_tuple(r.relation_id, std::string(name(r.slot)), r.entity_id));
                               return out;
                             })
      .def(py::self == py::self);

  py::class_<Triple>(m, "Triple")
      .def(py::init<std::string, std::optional<EntityType>, Predicate, std::string, std::optional<EntityType>>(),
           py::arg("subject_text"), py::arg("subject_type"), py::arg("predicate"), py::arg("object_text"),
           py::arg("object_type"))
      .def_readwrite("subject_text", &Triple::subject_text)
      .def_readwrite("subject_type", &Triple::subject_type)
      .def_readwrite("predicate", &Triple::predicate)
      .def_readwrite("object_text", &Triple::object_text)
      .def_readwrite("object_type", &Triple::object_type)
      .def(py::self == py::self)
      .def("__repr__", [](const Triple& t) { return "Triple(" + describe(t) + ")"; });

  py::class_<Counts>(m, "Counts")
      .def_readonly("tp", &Counts::tp)
      .def_readonly("fp", &Counts::fp)
      .def_readonly("fn", &Counts::fn)
      .def_property_readonly("precision", &Counts::precision)
      .def_property_readonly("recall", &Counts::recall)
      .def_property_readonly("f1", &Counts::f1);

  py::class_<ScoreReport>(m, "ScoreReport")
      .def_readonly("micro", &ScoreReport::micro)
      .def_readonly("per_predicate", &ScoreReport::per_predicate)
      .def("table", &ScoreReport::table)
      .def("json", &ScoreReport::json);

  m.def("parse_document", &parse_document, py::arg("text_content"), py::arg("ann_content"), py::arg("doc_id"));
  m.def("serialize_document", &serialize_document, py::arg("doc"));
  m.def(
      "repair_all",
      [](const AnnotatedDocument& doc) {
        auto [fixed, log] = repair_all(doc);
        return py::make_tuple(fixed, log.to_string());
      },
      py::arg("doc"), "Returns (repaired document, log text).");
  m.def(
      "classify_shape",
      [](const AnnotatedDocument& doc, const std::string& entity_id) {
        const EntityMention* e = doc.find_entity(entity_id);
        if (!e) throw py::key_error(entity_id);
        return std::string(name(classify_shape(*e, doc)));
      },
      py::arg("doc"), py::arg("entity_id"));
  m.def(
      "corpus_statistics", [](const std::vector<AnnotatedDocument>& docs) { return stats_dict(corpus_statistics(docs)); },
      py::arg("documents"));
  m.def(
      "flatten_document",
      [](const AnnotatedDocument& doc) {
        auto [flat, map] = flatten_document(doc);
        py::list entries;
        for (const auto& e : map.entries) {
          py::object original = py::none();
          if (e.original) original = py::make_tuple(e.original->start, e.original->end);
          entries.append(py::make_tuple(py::make_tuple(e.rewritten.start, e.rewritten.end), original));
        }
        return py::make_tuple(flat, entries);
      },
      py::arg("doc"), "Returns (flattened document, [(rewritten, original or None)]).");
  m.def("document_triples", &document_triples, py::arg("doc"));
  m.def(
      "encode_target",
      [](const AnnotatedDocument& doc, SchemaKind kind) { return encode_target(doc, kind); }, py::arg("doc"),
      py::arg("kind"));
  m.def(
      "encode_triples",
      [](const std::vector<Triple>& triples, SchemaKind kind) { return encode_triples(triples, kind); },
      py::arg("triples"), py::arg("kind"));
  m.def(
      "decode_target",
      [](const std::string& generation, SchemaKind kind) {
        auto decoded = decode_target(generation, kind);
        py::list skipped;
        for (const auto& s : decoded.skipped) skipped.append(py::make_tuple(s.text, s.reason));
        return py::make_tuple(decoded.triples, skipped);
      },
      py::arg("generation"), py::arg("kind"), "Returns (triples, [(segment, reason)]).");
  m.def("build_prompt", &build_prompt, py::arg("doc_text"), py::arg("copy_instruct"));
  m.def("normalize_generation", &normalize_generation, py::arg("generation"));
  m.def(
      "score",
      [](const std::vector<Triple>& gold, const std::vector<Triple>& predicted, bool strict_case, bool type_agnostic) {
        return score(gold, predicted, ScoreOptions{strict_case, type_agnostic});
      },
      py::arg("gold"), py::arg("predicted"), py::arg("strict_case") = false, py::arg("type_agnostic") = false);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Returns (exit code, stdout, stderr).");
}
