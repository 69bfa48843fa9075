#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bizmeta/codec.hpp"
#include "bizmeta/demo_fixture.hpp"
#include "bizmeta/error.hpp"
#include "bizmeta/navql.hpp"
#include "bizmeta/ndjson.hpp"
#include "bizmeta/service.hpp"

namespace py = pybind11;
using namespace bizmeta;
using codec::Json;

namespace {

// Values cross the boundary as JSON text; the Python package decodes them.
std::string dump(const Json& j) { return j.dump(); }

std::string dump_ids(const std::set<std::string>& ids) { return Json(std::vector<std::string>(ids.begin(), ids.end())).dump(); }

Attributes attrs_from(const std::string& json_text) {
    if (json_text.empty()) return {};
    return codec::attributes_from_json(Json::parse(json_text), "attrs");
}

ConceptKind concept_kind(const std::string& name) {
    auto k = parse_concept_kind(name);
    if (!k) throw BadRequest("unknown concept kind '" + name + "'");
    return *k;
}

AssociationKind association_kind(const std::string& name) {
    auto k = parse_association_kind(name);
    if (!k) throw BadRequest("unknown association kind '" + name + "'");
    return *k;
}

ValidInterval window(const std::string& from, const std::string& to) {
    ValidInterval iv = ValidInterval::between(Date::parse(from), Date::parse(to));
    if (!iv.well_formed()) throw BadRequest("window requires from < to");
    return iv;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Temporal business-metadata repository";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<NotFound>(m, "NotFound", base.ptr());
    py::register_exception<Conflict>(m, "Conflict", base.ptr());
    py::register_exception<BadRequest>(m, "BadRequest", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ImportError>(m, "NdjsonError", base.ptr());

    py::class_<Repository>(m, "Repository")
        .def(py::init<>())
        .def_static("demo", &demo_repository)
        .def_static("from_ndjson", [](const std::string& text) { return ndjson::import_repository(text); })
        .def("to_ndjson", [](const Repository& r) { return ndjson::export_repository(r); })
        .def("import_ndjson", [](Repository& r, const std::string& text) { ndjson::import_into(r, text); })
        .def("seed_demo", [](Repository& r) { seed_demo(r); })
        .def("copy", [](const Repository& r) { return Repository(r); })
        .def("__eq__", [](const Repository& a, const Repository& b) { return a == b; })
        .def("max_known_date", [](const Repository& r) { return r.max_known_date().to_string(); })

        .def("create_concept",
             [](Repository& r, const std::string& kind, const std::string& name, const std::string& description,
                const std::string& attrs, const std::string& from, std::optional<std::string> id) {
                 return r.store().create_concept(concept_kind(kind), name, description, attrs_from(attrs),
                                                 Date::parse(from), std::move(id));
             },
             py::arg("kind"), py::arg("name"), py::arg("description"), py::arg("attrs"), py::arg("start"),
             py::arg("id") = py::none())
        .def("update_concept",
             [](Repository& r, const std::string& id, std::optional<std::string> name,
                std::optional<std::string> description, std::optional<std::string> attrs, const std::string& at) {
                 ConceptChanges c{std::move(name), std::move(description), std::nullopt};
                 if (attrs) c.attributes = attrs_from(*attrs);
                 return r.store().update_concept(id, c, Date::parse(at));
             },
             py::arg("id"), py::arg("name"), py::arg("description"), py::arg("attrs"), py::arg("effective_from"))
        .def("retire_concept", [](Repository& r, const std::string& id, const std::string& at) {
            r.store().retire_concept(id, Date::parse(at));
        })
        .def("get_as_of",
             [](const Repository& r, const std::string& id, const std::string& t) -> std::optional<std::string> {
                 r.store().get_history(id);
                 auto v = r.store().get_as_of(id, Date::parse(t));
                 if (!v) return std::nullopt;
                 return dump(codec::to_json(*v));
             })
        .def("history", [](const Repository& r, const std::string& id) { return dump(codec::versions(r.store().get_history(id))); })
        .def("ids_of_kind", [](const Repository& r, const std::string& kind) {
            return dump_ids(r.store().ids_of_kind(concept_kind(kind)));
        })

        .def("create_association",
             [](Repository& r, const std::string& kind, const std::string& src, const std::string& dst,
                const std::string& from, std::optional<std::string> id) {
                 return r.store().create_association(association_kind(kind), src, dst, Date::parse(from), std::move(id));
             },
             py::arg("kind"), py::arg("src"), py::arg("dst"), py::arg("start"), py::arg("id") = py::none())
        .def("end_association", [](Repository& r, const std::string& id, const std::string& at) {
            r.store().end_association(id, Date::parse(at));
        })

        .def("navigate", [](const Repository& r, const std::string& id, const std::string& method,
                            const std::string& t) { return dump_ids(r.navigate(id, method, Date::parse(t))); })
        .def("navigate_during", [](const Repository& r, const std::string& id, const std::string& method,
                                   const std::string& from, const std::string& to) {
            return dump_ids(r.navigate_during(id, method, window(from, to)));
        })
        .def("get_dimension", [](const Repository& r, const std::string& id, const std::string& t) {
            return dump(codec::to_json(r.get_dimension(id, Date::parse(t))));
        })
        .def("get_facts", [](const Repository& r, const std::string& id, const std::string& t) {
            return dump(codec::to_json(r.get_facts(id, Date::parse(t))));
        })
        .def("row_to_concepts", [](const Repository& r, const std::string& dim, const std::string& key,
                                   const std::string& t) { return dump_ids(r.row_to_concepts(dim, key, Date::parse(t))); })
        .def("fact_to_measures", [](const Repository& r, const std::string& fact, const std::string& t) {
            return dump_ids(r.fact_to_measures(fact, Date::parse(t)));
        })
        .def("query_facts", [](const Repository& r, const std::string& query_json) {
            return dump(codec::to_json(r.warehouse().query_facts(codec::fact_query_from_json(Json::parse(query_json)))));
        })
        .def("record_evaluation",
             [](Repository& r, std::optional<std::string> goal, std::optional<std::string> measure,
                const std::string& text, const std::string& at, std::optional<std::string> provenance) {
                 return dump(codec::to_json(
                     r.record_evaluation({std::move(goal), std::move(measure), text, Date::parse(at), std::move(provenance)})));
             },
             py::arg("goal"), py::arg("measure"), py::arg("text"), py::arg("at"), py::arg("provenance") = py::none())
        .def("query",
             [](const Repository& r, const std::string& text, std::optional<std::string> now) {
                 const Date t = now ? Date::parse(*now) : r.max_known_date();
                 return dump(codec::to_json(navql::evaluate(navql::parse(text), r, t)));
             },
             py::arg("text"), py::arg("now") = py::none());

    m.def("parse_query", [](const std::string& text) { return navql::print(navql::parse(text)); },
          "Canonical form of a NavQL query.");

    py::class_<Service>(m, "Service")
        .def(py::init([](const Repository& r) { return std::make_unique<Service>(r); }))
        .def("handle",
             [](Service& s, const std::string& method, const std::string& path,
                const std::map<std::string, std::string>& query, const std::string& body) {
                 HttpResponse res = s.handle(HttpRequest{method, path, query, body});
                 return py::make_tuple(res.status, res.body);
             },
             py::arg("method"), py::arg("path"), py::arg("query") = std::map<std::string, std::string>{},
             py::arg("body") = "")
        .def("snapshot", [](const Service& s) { return Repository(*s.snapshot()); });
}
