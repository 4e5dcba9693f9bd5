#include "tmcalc/dsl.hpp"
#include "tmcalc/error.hpp"
#include "tmcalc/render.hpp"
#include "tmcalc/suite.hpp"
#include "tmcalc/transitions.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

namespace py = pybind11;
using namespace tmcalc;

namespace {

std::vector<ScalarExpr> components(const std::vector<std::string>& texts, int m) {
    std::vector<ScalarExpr> out;
    for (const auto& t : texts) {
        const Value v = evaluate(t, m);
        const auto* f = std::get_if<Form<ScalarExpr>>(&v);
        if (!f || f->degree() != 0) throw Error(ErrorKind::TypeMismatch, "map components must be scalars: " + t);
        out.push_back(f->value());
    }
    return out;
}

// Opaque handle; std::variant would otherwise be unpacked by the stl casters.
struct Obj {
    Value v;
};

py::object json_to_py(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

} // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Exact symbolic calculus on tangent bundles";

    py::register_exception<Error>(mod, "TmcalcError", PyExc_ValueError);

    py::class_<Obj>(mod, "Value")
        .def_property_readonly("kind", [](const Obj& o) { return value_kind(o.v); })
        .def_property_readonly("m", [](const Obj& o) { return std::visit([](const auto& x) { return x.dim(); }, o.v); })
        .def("render", [](const Obj& o, const std::string& format) { return render(o.v, parse_format(format)); },
             py::arg("format") = "text")
        .def("json", [](const Obj& o) { return json_to_py(render(o.v, Format::Json)); })
        .def("is_zero", [](const Obj& o) { return std::visit([](const auto& x) { return x.is_zero(); }, o.v); })
        .def("__str__", [](const Obj& o) { return render(o.v, Format::Text); })
        .def("__repr__", [](const Obj& o) { return "<tmcalc " + value_kind(o.v) + ": " + render(o.v, Format::Text) + ">"; })
        .def("__eq__", [](const Obj& a, const Obj& b) { return a.v == b.v; });

    mod.def("evaluate", [](const std::string& text, std::optional<int> m) { return Obj{evaluate(text, m)}; },
            py::arg("text"), py::arg("m") = py::none(), "Evaluate a DSL document and return its last expression.");
    mod.def("d", [](const Obj& o) { return Obj{apply_d(o.v)}; }, py::arg("form"));
    mod.def("db", [](const Obj& o) { return Obj{apply_db(o.v)}; }, py::arg("form"));
    mod.def("lie", [](const Obj& a, const Obj& b) { return Obj{apply_lie(a.v, b.v)}; }, py::arg("along"), py::arg("target"));
    mod.def(
        "lift",
        [](const std::string& kind, const Obj* value, std::optional<int> m) {
            return Obj{apply_lift(kind, value ? std::optional<Value>(value->v) : std::nullopt, m)};
        },
        py::arg("kind"), py::arg("value") = py::none(), py::arg("m") = py::none());

    mod.def("suite_registry", [] {
        py::list out;
        for (const auto& i : suite_registry())
            out.append(py::dict(py::arg("id") = i.id, py::arg("module") = i.module, py::arg("anchor") = i.anchor));
        return out;
    });
    mod.def(
        "run_suite",
        [](std::uint64_t seed, int cases, int m_min, int m_max, const std::string& filter, bool numeric) {
            SuiteConfig c;
            c.seed = seed;
            c.cases = cases;
            c.m_min = m_min;
            c.m_max = m_max;
            c.filter = filter;
            c.numeric = numeric;
            SuiteReport r;
            {
                py::gil_scoped_release release;
                r = run_suite(c);
            }
            return json_to_py(r.to_json());
        },
        py::arg("seed") = 0, py::arg("cases") = 25, py::arg("m_min") = 1, py::arg("m_max") = 3, py::arg("filter") = "",
        py::arg("numeric") = false, "Run the identity suite; returns the JSON report as a dict.");

    mod.def(
        "check_naturality",
        [](const std::vector<std::string>& forward, const std::vector<std::string>& inverse, const std::string& lift,
           std::optional<std::string> object) {
            const int m = static_cast<int>(forward.size());
            const ChartTransition T(components(forward, m), components(inverse, m));
            BaseObject obj;
            if (object) {
                const Value v = evaluate(*object, m);
                if (std::holds_alternative<VectorField<ScalarExpr>>(v)) obj = as_base_field(v);
                else obj = as_base_form(v);
            }
            return check_naturality(lift, obj, T);
        },
        py::arg("forward"), py::arg("inverse"), py::arg("lift"), py::arg("object") = py::none(),
        "Lift-then-transform equals transform-then-lift for the chart change x' = forward(x).");
    mod.def(
        "volume_factor",
        [](const std::vector<std::string>& forward, const std::vector<std::string>& inverse) {
            const int m = static_cast<int>(forward.size());
            return render(volume_factor(ChartTransition(components(forward, m), components(inverse, m))), Format::Text);
        },
        py::arg("forward"), py::arg("inverse"));
}
