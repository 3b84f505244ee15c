#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "finitopos/dsl.hpp"
#include "finitopos/fixtures.hpp"
#include "finitopos/report.hpp"

namespace py = pybind11;
using namespace finitopos;

namespace {

// Reports and options cross the boundary as JSON text; the Python package
// decodes them into dicts.

std::string run(const std::string& invocation) {
    auto inv = invocation_from_json(json::parse(invocation));
    if (!inv.budget) inv.budget = default_budget();
    return make_report(inv, execute(inv)).dump();
}

std::string replay(const std::string& report) {
    auto r = replay_report(json::parse(report));
    json out{{"ok", r.ok()},
             {"digest_matches", r.digest_matches},
             {"verdict_matches", r.verdict_matches},
             {"report_matches", r.report_matches},
             {"independent_agrees", r.independent_agrees},
             {"recomputed", r.recomputed}};
    if (r.independent) out["independent"] = to_json(*r.independent);
    return out.dump();
}

std::string diagnostics_json(const std::vector<Diagnostic>& ds) {
    json a = json::array();
    for (const auto& d : ds)
        a.push_back({{"kind", to_string(d.kind)},
                     {"line", d.span.line},
                     {"column", d.span.column},
                     {"end_column", d.span.end_column},
                     {"message", d.message}});
    return a.dump();
}

std::string parse_text(const std::string& text) {
    auto r = parse(text);
    json out{{"ok", r.ok()}, {"diagnostics", json::parse(diagnostics_json(r.diagnostics))}};
    if (r.ok()) {
        json decls = json::array();
        for (const auto& e : r.document->order) {
            static const char* kinds[] = {"category", "functor", "presheaf", "map", "reflection"};
            decls.push_back({{"kind", kinds[static_cast<int>(e.kind)]}, {"name", e.name}, {"line", e.span.line}});
        }
        out["declarations"] = decls;
        out["canonical"] = serialize(*r.document);
    }
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finitopos native core";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidData& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ShapeMismatch& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    // registered last so it is tried first
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.attr("SCHEMA_VERSION") = kSchemaVersion;
    m.def("run", &run, py::arg("invocation"), "Execute an invocation (JSON text); returns the report as JSON text.");
    m.def("replay", &replay, py::arg("report"), "Replay a report (JSON text).");
    m.def("parse", &parse_text, py::arg("text"), "Parse DSL text; returns diagnostics and declarations as JSON text.");
    m.def("report_digest", [](const std::string& report) { return report_digest(json::parse(report)); },
          py::arg("report"));
    m.def("fixture_names", &fixture_names);
    m.def("fixture_text", [](const std::string& name) { return write_reflection(fixture(name).reflection); },
          py::arg("name"), "The fixture reflection in DSL form.");
}
