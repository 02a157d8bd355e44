#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lambang/harness.hpp"
#include "lambang/rewriting.hpp"
#include "lambang/tight.hpp"
#include "lambang/translate.hpp"

namespace py = pybind11;
using namespace lambang;

namespace {

Calculus calculus_arg(const std::string& c) {
    if (c == "lambda-es") return Calculus::LambdaES;
    if (c == "bang") return Calculus::Bang;
    throw py::value_error("calculus must be 'lambda-es' or 'bang'");
}

System system_arg(const std::string& s) {
    if (s == "N") return System::N;
    if (s == "V") return System::V;
    if (s == "B") return System::B;
    throw py::value_error("system must be N, V or B");
}

Calculus calculus_of(System s) { return s == System::B ? Calculus::Bang : Calculus::LambdaES; }

Strategy strategy_arg(const std::string& s) {
    if (s == "dn") return Strategy::dn;
    if (s == "dv") return Strategy::dv;
    if (s == "fdet") return Strategy::fdet;
    throw py::value_error("strategy must be dn, dv or fdet");
}

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
    if (py::isinstance<py::str>(o)) return nlohmann::json::parse(o.cast<std::string>());
    return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::tuple counters(const Derivation& d) { return py::make_tuple(d.m, d.e, d.s); }

py::dict normalize_py(const std::string& src, const std::string& strategy, int fuel) {
    Strategy st = strategy_arg(strategy);
    Term t = parse(src, st == Strategy::fdet ? Calculus::Bang : Calculus::LambdaES);
    NormResult r = normalize(t, st, fuel);
    Flavor fl = st == Strategy::dn ? Flavor::n : st == Strategy::dv ? Flavor::v : Flavor::f;
    py::list steps;
    for (auto& s : r.trace.steps)
        steps.append(py::dict(py::arg("pos") = to_string(s.pos), py::arg("rule") = to_string(s.rule),
                              py::arg("after") = print(s.after)));
    py::dict out(py::arg("normal") = r.normal, py::arg("nf") = print(r.nf()), py::arg("m") = r.trace.m,
                 py::arg("e") = r.trace.e, py::arg("steps") = steps);
    out["size"] = r.normal ? py::object(py::int_(size(r.nf(), fl))) : py::object(py::none());
    return out;
}

py::dict synthesize_py(const std::string& src, const std::string& system, int fuel) {
    System s = system_arg(system);
    auto r = synthesize_tight(parse(src, calculus_of(s)), s, fuel);
    return py::dict(py::arg("counters") = counters(r.derivation), py::arg("nf") = print(r.nf),
                    py::arg("tight") = tight(r.derivation, s), py::arg("derivation") = to_py(to_json(r.derivation)));
}

py::dict check_py(const py::object& deriv, const std::string& system) {
    System s = system_arg(system);
    Derivation d = from_json(from_py(deriv), calculus_of(s));
    auto r = check_derivation(d, s);
    return py::dict(py::arg("ok") = r.ok, py::arg("path") = r.path, py::arg("reason") = r.reason,
                    py::arg("counters") = counters(d), py::arg("tight") = r.ok && tight(d, s));
}

std::string translate_py(const std::string& src, const std::string& mode) {
    Term t = parse(src, Calculus::LambdaES);
    if (mode == "cbn") return print(cbn_term(t));
    if (mode == "cbv") return print(cbv_term(t));
    throw py::value_error("mode must be cbn or cbv");
}

py::object translate_derivation_py(const py::object& deriv, const std::string& mode) {
    Derivation d = from_json(from_py(deriv), Calculus::LambdaES);
    if (mode == "cbn") return to_py(to_json(translate_derivation_n(d)));
    if (mode == "cbv") return to_py(to_json(translate_derivation_v(d)));
    throw py::value_error("mode must be cbn or cbv");
}

py::object verify_py(const std::string& theorem, int max_size, int bang_max_size, int fuel) {
    if (!known_theorem(theorem)) throw py::value_error("unknown theorem " + theorem);
    VerifyOptions opt;
    opt.max_size = max_size;
    opt.bang_max_size = bang_max_size;
    opt.fuel = fuel;
    TheoremReport r;
    {
        py::gil_scoped_release nogil;
        r = verify(theorem, opt);
    }
    return to_py(report_json(r));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tight typing and step-counted reduction for CBN, CBV and the bang calculus";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<CalculusMismatch>(m, "CalculusMismatch", PyExc_ValueError);
    py::register_exception<TightError>(m, "TightError", PyExc_RuntimeError);
    py::register_exception<TranslateError>(m, "TranslateError", PyExc_RuntimeError);

    m.def("parse", [](const std::string& src, const std::string& calculus) {
        return print(parse(src, calculus_arg(calculus)));
    }, py::arg("src"), py::arg("calculus") = "lambda-es", "Parse and pretty-print a term.");
    m.def("alpha_eq", [](const std::string& a, const std::string& b, const std::string& calculus) {
        Calculus c = calculus_arg(calculus);
        return alpha_eq(parse(a, c), parse(b, c));
    }, py::arg("a"), py::arg("b"), py::arg("calculus") = "lambda-es");
    m.def("free_vars", [](const std::string& src, const std::string& calculus) {
        return free_vars(parse(src, calculus_arg(calculus)));
    }, py::arg("src"), py::arg("calculus") = "lambda-es");

    m.def("normalize", &normalize_py, py::arg("term"), py::arg("strategy") = "dn", py::arg("fuel") = 1000,
          "Normalize with dn, dv (lambda-es) or fdet (bang).");
    m.def("synthesize", &synthesize_py, py::arg("term"), py::arg("system") = "N", py::arg("fuel") = 1000,
          "Tight derivation for a normalizing term, with its counters.");
    m.def("check", &check_py, py::arg("derivation"), py::arg("system"),
          "Check a derivation given as a dict or a JSON string.");
    m.def("translate", &translate_py, py::arg("term"), py::arg("mode") = "cbn");
    m.def("translate_derivation", &translate_derivation_py, py::arg("derivation"), py::arg("mode"));
    m.def("countvr", [](const py::object& d) { return countvr(from_json(from_py(d), Calculus::LambdaES)); });
    m.def("inversevr", [](const py::object& d) { return inversevr(from_json(from_py(d), Calculus::Bang)); });

    m.def("theorem_ids", &theorem_ids);
    m.def("verify", &verify_py, py::arg("theorem"), py::arg("max_size") = 6, py::arg("bang_max_size") = 6,
          py::arg("fuel") = 50);
}
