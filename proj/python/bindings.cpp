// Pybind11 bindings for the main operations. Quadratic integers cross the
// boundary as "a+b*w" strings so arbitrary precision survives the trip;
// structured results come back as plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kiss3/geom.hpp"
#include "kiss3/report.hpp"

namespace py = pybind11;
using namespace kiss3;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

QuadInt parse(int d, const std::string& text) {
    return QuadInt::parse(Ring(d), text);
}

Discriminant require_discriminant(int d, const std::string& text) {
    auto D = make_discriminant(parse(d, text));
    if (!D) throw usage_error("not a discriminant: " + text);
    return *D;
}

Budgets budgets_from(const std::string& pell_bound, const std::string& a_bound,
                     int equiv_depth, int m_cap, int conj_depth,
                     const std::string& scan_bound, int workers) {
    Budgets b;
    b.pell_bound = mpz_class(pell_bound);
    b.a_bound = mpz_class(a_bound);
    b.equiv_depth = equiv_depth;
    b.m_cap = m_cap;
    b.conj_depth = conj_depth;
    b.scan_bound = mpz_class(scan_bound);
    b.workers = workers;
    return b;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact arithmetic, Pell solutions, quadratic forms and "
              "congruence-level certificates over imaginary quadratic rings";

    py::register_exception<usage_error>(m, "UsageError", PyExc_ValueError);
    py::register_exception<unsupported_error>(m, "UnsupportedError",
                                              PyExc_NotImplementedError);
    py::register_exception<budget_error>(m, "BudgetError", PyExc_RuntimeError);

    m.def("class_number_one_ds", [] {
        return std::vector<int>(kClassNumberOne.begin(), kClassNumberOne.end());
    });

    m.def(
        "norm",
        [](int d, const std::string& x) { return parse(d, x).norm().get_str(); },
        py::arg("d"), py::arg("x"));
    m.def(
        "mul",
        [](int d, const std::string& x, const std::string& y) {
            return (parse(d, x) * parse(d, y)).str();
        },
        py::arg("d"), py::arg("x"), py::arg("y"));
    m.def(
        "sqrt_exact",
        [](int d, const std::string& x) -> py::object {
            auto w = sqrt_exact(parse(d, x));
            if (!w) return py::none();
            return py::str(w->str());
        },
        py::arg("d"), py::arg("x"));
    m.def(
        "is_discriminant",
        [](int d, const std::string& x) -> py::object {
            auto D = make_discriminant(parse(d, x));
            if (!D) return py::none();
            return json_to_py(nlohmann::json{{"D", to_json(D->value)},
                                             {"witness", to_json(D->witness)}});
        },
        py::arg("d"), py::arg("x"));

    m.def(
        "pell_fundamental",
        [](int d, const std::string& D, const std::string& bound) -> py::object {
            auto f = pell_fundamental(require_discriminant(d, D), mpz_class(bound));
            if (!f) return py::none();
            return json_to_py(to_json(*f));
        },
        py::arg("d"), py::arg("D"), py::arg("bound") = "10000");
    m.def(
        "power_sequence",
        [](int d, const std::string& D, const std::string& bound, int n_max) {
            auto f = pell_fundamental(require_discriminant(d, D), mpz_class(bound));
            if (!f) throw budget_error("no fundamental solution within the bound");
            py::list out;
            for (const PowerEntry& e : power_sequence(*f, n_max).entries) {
                py::dict row;
                row["n"] = e.n;
                row["t"] = e.t.str();
                row["u"] = e.u.str();
                out.append(row);
            }
            return out;
        },
        py::arg("d"), py::arg("D"), py::arg("bound") = "10000", py::arg("n_max") = 6);
    m.def(
        "m_index",
        [](int d, const std::string& D, const std::string& bound, int cap) -> py::object {
            auto f = pell_fundamental(require_discriminant(d, D), mpz_class(bound));
            if (!f) throw budget_error("no fundamental solution within the bound");
            MIndex mi = m_index(*f, cap);
            if (!mi.m) return py::none();
            return py::int_(*mi.m);
        },
        py::arg("d"), py::arg("D"), py::arg("bound") = "10000", py::arg("cap") = 12);
    m.def(
        "pell_bounds_csv",
        [](int d, const std::string& D, const std::string& bound, int n_max) {
            auto f = pell_fundamental(require_discriminant(d, D), mpz_class(bound));
            if (!f) throw budget_error("no fundamental solution within the bound");
            return to_csv(verify_pell_bounds(*f, n_max));
        },
        py::arg("d"), py::arg("D"), py::arg("bound") = "10000", py::arg("n_max") = 6);

    m.def(
        "classify",
        [](double re, double im) { return std::string(to_string(classify(Cplx(re, im)))); },
        py::arg("re"), py::arg("im") = 0.0);
    m.def(
        "complex_length",
        [](double re, double im) {
            auto cl = complex_length(Cplx(re, im));
            return py::make_tuple(cl.ell, cl.theta);
        },
        py::arg("re"), py::arg("im") = 0.0);
    m.def(
        "displacement",
        [](double re, double im) { return displacement(Cplx(re, im)); },
        py::arg("re"), py::arg("im") = 0.0);

    m.def(
        "class_number_estimate",
        [](int d, const std::string& D, const std::string& a_bound, int depth) {
            return json_to_py(to_json(
                class_number_estimate(require_discriminant(d, D), mpz_class(a_bound), depth)));
        },
        py::arg("d"), py::arg("D"), py::arg("a_bound") = "2", py::arg("depth") = 4);

    m.def(
        "sl2_order",
        [](int d, const std::string& u) {
            return sl2_order(factor_modulus(parse(d, u))).get_str();
        },
        py::arg("d"), py::arg("u"));
    m.def(
        "make_level",
        [](int d, const std::string& t, const std::string& u, const std::string& D) {
            CongruenceLevel level =
                make_level(parse(d, t), parse(d, u), require_discriminant(d, D));
            nlohmann::json out = to_json(level);
            out["index"] = level_index(level).index.get_str();
            out["torsion"] = to_json(torsion_scan(level));
            return json_to_py(out);
        },
        py::arg("d"), py::arg("t"), py::arg("u"), py::arg("D"));
    m.def(
        "systole_certificate",
        [](int d, const std::string& t, const std::string& u, const std::string& D,
           const std::string& height, int workers) {
            CongruenceLevel level =
                make_level(parse(d, t), parse(d, u), require_discriminant(d, D));
            return json_to_py(to_json(
                systole_certificate(level, parse(d, t), mpz_class(height), workers)));
        },
        py::arg("d"), py::arg("t"), py::arg("u"), py::arg("D"),
        py::arg("height") = "100", py::arg("workers") = 1);

    m.def(
        "orbifold_volume",
        [](int d) { return json_to_py(to_json(orbifold_volume(d))); }, py::arg("d"));
    m.def(
        "kiss_lower_bound",
        [](int d, const std::string& D, const std::string& pell_bound,
           const std::string& a_bound, int equiv_depth, int m_cap, int conj_depth,
           int workers) {
            Budgets b = budgets_from(pell_bound, a_bound, equiv_depth, m_cap,
                                     conj_depth, "60", workers);
            return json_to_py(to_json(kiss_lower_bound(d, parse(d, D), b)));
        },
        py::arg("d"), py::arg("D"), py::arg("pell_bound") = "10000",
        py::arg("a_bound") = "2", py::arg("equiv_depth") = 4, py::arg("m_cap") = 12,
        py::arg("conj_depth") = 4, py::arg("workers") = 1);
    m.def(
        "sarnak_average",
        [](int d, double x, const std::string& pell_bound, const std::string& a_bound,
           int equiv_depth, const std::string& scan_bound) {
            Budgets b = budgets_from(pell_bound, a_bound, equiv_depth, 12, 4,
                                     scan_bound, 1);
            return json_to_py(to_json(sarnak_average(d, x, b)));
        },
        py::arg("d"), py::arg("x"), py::arg("pell_bound") = "400",
        py::arg("a_bound") = "1", py::arg("equiv_depth") = 2,
        py::arg("scan_bound") = "40");
}
