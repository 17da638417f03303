// Command-line interface: every operation of the library behind one binary.
// Exit codes: 0 success, 2 bad usage or unmet precondition, 3 exhausted
// budget / partial result.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <random>

#include "kiss3/errors.hpp"
#include "kiss3/geom.hpp"
#include "kiss3/report.hpp"

using namespace kiss3;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
                    rows);
    } else if (j.is_null()) {
        rows.emplace_back(prefix, "");
    } else if (j.is_string()) {
        rows.emplace_back(prefix, j.get<std::string>());
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

void emit(const json& j, const std::string& out_format) {
    if (out_format == "csv") {
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(j, "", rows);
        std::cout << "key,value\n";
        for (auto& [k, v] : rows) {
            std::string value = v;
            for (char& ch : value)
                if (ch == ',') ch = ';';
            std::cout << k << "," << value << "\n";
        }
    } else {
        std::cout << j.dump(2) << "\n";
    }
}

mpz_class parse_mpz(const std::string& s) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw usage_error("not an integer: " + s);
    }
}

Cplx parse_trace(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        return Cplx(Real(s), Real(0));
    return Cplx(Real(s.substr(0, comma)), Real(s.substr(comma + 1)));
}

// ---------------------------------------------------------------------------
// randomized property suites behind `verify --suite ...`

struct SuiteRunner {
    int failures = 0;
    void check(bool ok, const std::string& name, const std::string& detail = "") {
        if (ok) {
            std::cout << "ok   " << name << (detail.empty() ? "" : " (" + detail + ")")
                      << "\n";
        } else {
            ++failures;
            std::cout << "FAIL " << name << (detail.empty() ? "" : " (" + detail + ")")
                      << "\n";
        }
    }
};

QuadInt random_elt(const Ring& rg, std::mt19937_64& rng, long range) {
    std::uniform_int_distribution<long> dist(-range, range);
    return QuadInt(rg, dist(rng), dist(rng));
}

Mat2 random_word(const std::vector<Mat2>& gens, std::mt19937_64& rng, int len) {
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    Mat2 w = Mat2::identity(gens.front().ring());
    for (int i = 0; i < len; ++i) w = w * gens[pick(rng)];
    return w;
}

int verify_ring(uint64_t seed) {
    SuiteRunner run;
    std::mt19937_64 rng(seed);
    for (int d : kClassNumberOne) {
        Ring rg(d);
        bool mult = true, conj_inv = true, div_ok = true, sqrt_ok = true;
        for (int i = 0; i < 1000; ++i) {
            QuadInt x = random_elt(rg, rng, 60), y = random_elt(rg, rng, 60);
            mult &= (x * y).norm() == x.norm() * y.norm();
            conj_inv &= x.conj().conj() == x;
            if (!x.is_zero()) {
                auto q = divide_exact(x, x * y);
                div_ok &= q && *q == y;
            }
            auto w = sqrt_exact(x * x);
            sqrt_ok &= w && *w * *w == x * x;
        }
        run.check(mult, "norm multiplicative d=" + std::to_string(d));
        run.check(conj_inv, "conjugation involutive d=" + std::to_string(d));
        run.check(div_ok, "exact division sound d=" + std::to_string(d));
        run.check(sqrt_ok, "square root of squares d=" + std::to_string(d));
    }
    for (int d : {1, 2, 3, 7, 11}) {
        Ring rg(d);
        bool content_ok = true;
        for (int i = 0; i < 200; ++i) {
            std::vector<QuadInt> xs{random_elt(rg, rng, 25), random_elt(rg, rng, 25),
                                    random_elt(rg, rng, 25)};
            if (xs[0].is_zero() && xs[1].is_zero() && xs[2].is_zero()) continue;
            QuadInt g = content(xs);
            for (const QuadInt& x : xs) content_ok &= divide_exact(g, x).has_value();
        }
        run.check(content_ok, "content divides inputs d=" + std::to_string(d));
    }
    return run.failures == 0 ? kExitOk : 1;
}

int verify_pell(uint64_t seed) {
    SuiteRunner run;
    (void)seed;
    for (int d : {1, 2, 3}) {
        Ring rg(d);
        auto ball = lattice_ball(rg, 10000);
        bool window = true;
        int found = 0;
        for (const QuadInt& Dv : lattice_ball(rg, 200)) {
            auto D = make_discriminant(Dv);
            if (!D) continue;
            auto f = pell_fundamental(*D, 10000, ball);
            if (!f) continue;
            ++found;
            BoundReport rep = verify_pell_bounds(*f, 6);
            window &= rep.failures == 0;
        }
        run.check(window, "norm window and power bounds d=" + std::to_string(d),
                  std::to_string(found) + " fundamental units");
    }
    {
        // |D| > 51 forces m <= 2
        Ring rg(1);
        auto ball = lattice_ball(rg, 10000);
        bool small_m = true;
        int found = 0;
        for (const QuadInt& Dv : lattice_ball(rg, 3600)) {
            if (Dv.norm() <= 2601) continue;
            auto D = make_discriminant(Dv);
            if (!D) continue;
            auto f = pell_fundamental(*D, 10000, ball);
            if (!f) continue;
            ++found;
            MIndex mi = m_index(*f, 12);
            small_m &= mi.m.has_value() && *mi.m <= 2;
        }
        run.check(small_m, "m index stays within {0,1,2} for |D| > 51, d=1",
                  std::to_string(found) + " fundamental units");
    }
    return run.failures == 0 ? kExitOk : 1;
}

int verify_geom(uint64_t seed) {
    SuiteRunner run;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.0, 100.0);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    auto random_lox = [&] {
        while (true) {
            double r = mag(rng), th = ang(rng);
            Cplx tr(r * std::cos(th), r * std::sin(th));
            if (classify(tr) == IsometryClass::Loxodromic &&
                abs(tr - Cplx(2.0, 0.0)).convert_to<double>() > 1e-3 &&
                abs(tr + Cplx(2.0, 0.0)).convert_to<double>() > 1e-3)
                return tr;
        }
    };
    bool consistent = true, ellipse = true, squares = true;
    for (int i = 0; i < 10000; ++i) {
        Cplx tr = random_lox();
        auto cl = complex_length(tr);
        consistent &= std::abs(displacement(tr) - cl.ell) <= 1e-9;
        Real lhs = abs(tr - Cplx(2.0, 0.0)) + abs(tr + Cplx(2.0, 0.0));
        ellipse &= std::abs((lhs - 4 * cosh(Real(cl.ell) / 2)).convert_to<double>()) <=
                   1e-9;
        if (i % 10 == 0) {
            Cplx sq = tr * tr - Cplx(2.0, 0.0);
            if (classify(sq) == IsometryClass::Loxodromic)
                squares &= std::abs(displacement(sq) - 2 * cl.ell) <= 1e-9;
        }
    }
    run.check(consistent, "displacement matches the complex translation length");
    run.check(ellipse, "trace lies on the cosh ellipse");
    run.check(squares, "squaring doubles the length");
    bool lemma = true;
    int tried = 0;
    while (tried < 100000) {
        double rz = mag(rng) / 2, rw = mag(rng) / 2, tz = ang(rng), tw = ang(rng);
        if (rz + rw < 8 || rz < rw + 1) continue;
        ++tried;
        lemma &= square_gap_dominates(Cplx(rz * std::cos(tz), rz * std::sin(tz)),
                                      Cplx(rw * std::cos(tw), rw * std::sin(tw)));
    }
    run.check(lemma, "square-gap domination under its hypotheses", "100000 samples");
    return run.failures == 0 ? kExitOk : 1;
}

int verify_forms(uint64_t seed) {
    SuiteRunner run;
    std::mt19937_64 rng(seed);
    Ring g1(1);
    auto gens = sl2_generators(g1);
    auto D = make_discriminant(QuadInt(g1, 5, 0));
    auto f = pell_fundamental(*D, 100);
    std::vector<QuadForm> forms = enumerate_forms(*D, 2);
    bool action = true, inv = true, stab = true, homo = true;
    std::uniform_int_distribution<long> coeff(-6, 6);
    for (int i = 0; i < 300; ++i) {
        QuadInt a(g1, coeff(rng), coeff(rng)), b(g1, coeff(rng), coeff(rng)),
            c(g1, coeff(rng), coeff(rng));
        if (a.is_zero() && b.is_zero() && c.is_zero()) continue;
        QuadForm Q(a, b, c);
        Mat2 M1 = random_word(gens, rng, 4), M2 = random_word(gens, rng, 4);
        action &= act(M1 * M2, Q) == act(M2, act(M1, Q));
        inv &= act(M1, Q).disc() == Q.disc();
    }
    for (const QuadForm& Q : forms) {
        stab &= act(automorph(Q, f->sol), Q) == Q;
        PellSolution sq = pell_compose(f->sol, f->sol);
        homo &= automorph(Q, sq) == automorph(Q, f->sol) * automorph(Q, f->sol);
    }
    run.check(action, "substitution is a right action");
    run.check(inv, "discriminant is invariant");
    run.check(stab, "automorph stabilizes its form");
    run.check(homo, "automorph is a homomorphism");
    CorrespondenceReport rep = correspondence_check(forms, f->sol, 3);
    run.check(rep.conjugation_mismatches == 0 && rep.traces_match,
              "equivalence witnesses conjugate the automorphs",
              std::to_string(rep.pairs_checked) + " pairs");
    return run.failures == 0 ? kExitOk : 1;
}

int verify_congruence(uint64_t seed) {
    SuiteRunner run;
    std::mt19937_64 rng(seed);
    for (int d : {1, 2, 3}) {
        Ring rg(d);
        bool orders = true;
        for (const QuadInt& u : lattice_ball(rg, 16)) {
            if (u.is_zero() || u.is_unit()) continue;
            ResidueSystem rs(u);
            // brute force |SL2| over the residue ring
            std::vector<QuadInt> elems = rs.all();
            long count = 0;
            for (const QuadInt& p : elems)
                for (const QuadInt& q : elems)
                    for (const QuadInt& r : elems)
                        for (const QuadInt& s : elems)
                            if (rs.reduce(p * s - q * r).is_one()) ++count;
            orders &= sl2_order(factor_modulus(u)) == count;
        }
        run.check(orders, "sl2 order matches brute force d=" + std::to_string(d),
                  "norm(u) <= 16");
    }
    Ring g1(1);
    bool lemma = true;
    for (const QuadInt& u : {QuadInt(g1, 1, 1), QuadInt(g1, 2, 0), QuadInt(g1, 0, 5)}) {
        std::vector<Mat2> gens;
        for (const QuadInt& lam : {u, u * omega(g1)}) {
            Mat2 upper(one(g1), lam, zero(g1), one(g1));
            Mat2 lower(one(g1), zero(g1), lam, one(g1));
            gens.push_back(upper);
            gens.push_back(upper.inverse());
            gens.push_back(lower);
            gens.push_back(lower.inverse());
        }
        std::uniform_int_distribution<int> len(1, 12);
        for (int i = 0; i < 500; ++i)
            lemma &= trace_congruence_check(random_word(gens, rng, len(rng)), u);
    }
    run.check(lemma, "principal traces are 2 mod u^2", "500 words per modulus");

    auto D = make_discriminant(QuadInt(g1, 5, 0));
    CongruenceLevel level = make_level(QuadInt(g1, 0, 11), QuadInt(g1, 0, 5), *D);
    Mat2 coset(QuadInt(g1, 0, 3), QuadInt(g1, 0, 5), QuadInt(g1, 0, 5), QuadInt(g1, 0, 8));
    auto gens = sl2_generators(g1);
    bool closure = true;
    std::vector<Mat2> pgens;
    for (const QuadInt& lam : {level.u, level.u * omega(g1)}) {
        Mat2 upper(one(g1), lam, zero(g1), one(g1));
        Mat2 lower(one(g1), zero(g1), lam, one(g1));
        pgens.push_back(upper);
        pgens.push_back(lower);
        pgens.push_back(upper.inverse());
        pgens.push_back(lower.inverse());
    }
    for (int i = 0; i < 200; ++i) {
        Mat2 a = random_word(pgens, rng, 5);
        closure &= member(a, level) == Membership::Principal;
        closure &= member(a * coset, level) == Membership::TauCoset;
        closure &= member(coset * a * coset, level) == Membership::Principal;
    }
    run.check(closure, "coset arithmetic under products");
    return run.failures == 0 ? kExitOk : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations around Pell equations, quadratic forms and "
                 "congruence levels over imaginary quadratic rings"};
    app.require_subcommand(1);

    int d = 1;
    std::string out_format = "json";
    int workers = 1;
    uint64_t seed = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--d", d, "squarefree d in {1,2,3,7,11,19,43,67,163}");
        sub->add_option("--out", out_format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--workers", workers, "worker threads for enumeration");
        sub->add_option("--seed", seed, "seed for randomized suites");
    };

    // pell
    std::string D_text, t_text, u_text, trace_text;
    mpz_class bound(100);
    int bounds_report_n = -1;
    auto* pell = app.add_subcommand("pell", "fundamental Pell solution for D");
    add_common(pell);
    pell->add_option("--D", D_text, "discriminant, e.g. \"5\" or \"-15+20*w\"")
        ->required();
    std::string bound_text = "100";
    pell->add_option("--bound", bound_text, "norm bound for the search over u");
    pell->add_option("--bounds-report", bounds_report_n,
                     "emit the inequality report up to this power as CSV");

    // discriminants
    std::string scan_text = "60";
    auto* discs = app.add_subcommand("discriminants", "scan discriminants by norm");
    add_common(discs);
    discs->add_option("--norm-bound", scan_text, "norm bound for the scan");

    // classnumber
    std::string a_bound_text = "2";
    int depth = 4;
    auto* classnum = app.add_subcommand("classnumber", "class-number estimate for D");
    add_common(classnum);
    classnum->add_option("--D", D_text)->required();
    classnum->add_option("--a-bound", a_bound_text, "norm bound on a");
    classnum->add_option("--depth", depth, "equivalence search depth");

    // length
    auto* length = app.add_subcommand("length", "trace classification and lengths");
    add_common(length);
    length->add_option("--trace", trace_text, "complex trace \"re,im\"")->required();

    // level
    auto* level_cmd = app.add_subcommand("level", "congruence level from a Pell triple");
    add_common(level_cmd);
    level_cmd->add_option("--t", t_text)->required();
    level_cmd->add_option("--u", u_text)->required();
    level_cmd->add_option("--D", D_text)->required();

    // systole
    std::string height_text = "100";
    auto* systole_cmd = app.add_subcommand("systole", "systole certificate by enumeration");
    add_common(systole_cmd);
    systole_cmd->add_option("--t", t_text)->required();
    systole_cmd->add_option("--u", u_text)->required();
    systole_cmd->add_option("--D", D_text)->required();
    systole_cmd->add_option("--height", height_text, "max entry norm");

    // kiss
    std::string pell_bound_text = "10000";
    int m_cap = 12, conj_depth = 4;
    double orbifold_override = -1;
    auto* kiss = app.add_subcommand("kiss", "kissing-number lower-bound pipeline");
    add_common(kiss);
    kiss->add_option("--D", D_text)->required();
    kiss->add_option("--pell-bound", pell_bound_text);
    kiss->add_option("--a-bound", a_bound_text);
    kiss->add_option("--depth", depth);
    kiss->add_option("--m-cap", m_cap);
    kiss->add_option("--conj-depth", conj_depth);
    kiss->add_option("--orbifold-volume", orbifold_override,
                     "override the Humbert constant");

    // average
    double x_value = 10.0;
    double c_d_value = -1;
    auto* average = app.add_subcommand("average", "empirical class-number average");
    add_common(average);
    average->add_option("--x", x_value, "bound on |eps_D|")->required();
    average->add_option("--pell-bound", pell_bound_text);
    average->add_option("--a-bound", a_bound_text);
    average->add_option("--depth", depth);
    average->add_option("--scan-bound", scan_text);
    average->add_option("--c-d", c_d_value, "use this c_d instead of fitting");

    // verify
    std::string suite;
    auto* verify = app.add_subcommand("verify", "randomized property suites");
    add_common(verify);
    verify->add_option("--suite", suite, "ring|pell|forms|geom|congruence")
        ->required()
        ->check(CLI::IsMember({"ring", "pell", "forms", "geom", "congruence"}));

    CLI11_PARSE(app, argc, argv);

    try {
        Ring rg(d);

        if (pell->parsed()) {
            QuadInt D = QuadInt::parse(rg, D_text);
            auto disc = make_discriminant(D);
            if (!disc) throw usage_error("D = " + D.str() + " is not a discriminant");
            auto f = pell_fundamental(*disc, parse_mpz(bound_text));
            if (!f) {
                emit(json{{"status", "not-found"},
                          {"D", to_json(D)},
                          {"search_norm_bound", bound_text}},
                     out_format);
                return kExitBudget;
            }
            if (bounds_report_n >= 0) {
                std::cout << to_csv(verify_pell_bounds(*f, bounds_report_n));
                return kExitOk;
            }
            emit(to_json(*f), out_format);
            return kExitOk;
        }

        if (discs->parsed()) {
            json list = json::array();
            for (const QuadInt& Dv : lattice_ball(rg, parse_mpz(scan_text))) {
                if (Dv.is_zero()) continue;
                auto disc = make_discriminant(Dv);
                if (!disc) continue;
                list.push_back(json{{"D", to_json(disc->value)},
                                    {"witness", to_json(disc->witness)},
                                    {"norm", disc->value.norm().get_str()}});
            }
            emit(json{{"d", d}, {"discriminants", list}}, out_format);
            return kExitOk;
        }

        if (classnum->parsed()) {
            QuadInt D = QuadInt::parse(rg, D_text);
            auto disc = make_discriminant(D);
            if (!disc) throw usage_error("D = " + D.str() + " is not a discriminant");
            emit(to_json(class_number_estimate(*disc, parse_mpz(a_bound_text), depth)),
                 out_format);
            return kExitOk;
        }

        if (length->parsed()) {
            Cplx tr = parse_trace(trace_text);
            json out{{"class", to_string(classify(tr))}};
            if (classify(tr) == IsometryClass::Loxodromic) {
                auto cl = complex_length(tr);
                out["ell"] = cl.ell;
                out["theta"] = cl.theta;
                out["displacement"] = displacement(tr);
            }
            emit(out, out_format);
            return kExitOk;
        }

        if (level_cmd->parsed() || systole_cmd->parsed()) {
            QuadInt D = QuadInt::parse(rg, D_text);
            auto disc = make_discriminant(D);
            if (!disc) throw usage_error("D = " + D.str() + " is not a discriminant");
            QuadInt t = QuadInt::parse(rg, t_text), u = QuadInt::parse(rg, u_text);
            CongruenceLevel level = make_level(t, u, *disc);
            if (level_cmd->parsed()) {
                LevelIndex idx = level_index(level);
                json out = to_json(level);
                out["index"] = idx.index.get_str();
                out["torsion"] = to_json(torsion_scan(level));
                emit(out, out_format);
                return kExitOk;
            }
            SystoleCertificate cert =
                systole_certificate(level, t, parse_mpz(height_text), workers);
            emit(to_json(cert), out_format);
            return kExitOk;
        }

        if (kiss->parsed()) {
            QuadInt D = QuadInt::parse(rg, D_text);
            Budgets budgets;
            budgets.pell_bound = parse_mpz(pell_bound_text);
            budgets.a_bound = parse_mpz(a_bound_text);
            budgets.equiv_depth = depth;
            budgets.m_cap = m_cap;
            budgets.conj_depth = conj_depth;
            budgets.workers = workers;
            KissReport r = kiss_lower_bound(d, D, budgets);
            if (orbifold_override > 0) {
                r.orbifold_volume = orbifold_override;
                if (r.group_order)
                    r.manifold_volume = orbifold_override * r.group_order->get_d();
                if (auto diag = growth_diagnostic(r)) r.diagnostic_exponent = diag->ratio;
                r.notes.push_back("orbifold volume overridden on the command line");
            }
            emit(to_json(r), out_format);
            return r.kiss_lower ? kExitOk : kExitBudget;
        }

        if (average->parsed()) {
            Budgets budgets;
            budgets.pell_bound = parse_mpz(pell_bound_text);
            budgets.a_bound = parse_mpz(a_bound_text);
            budgets.equiv_depth = depth;
            budgets.scan_bound = parse_mpz(scan_text);
            budgets.workers = workers;
            std::optional<double> cd;
            if (c_d_value > 0) cd = c_d_value;
            AverageTable table = sarnak_average(d, x_value, budgets, cd);
            if (out_format == "csv") {
                std::cout << "D,eps_abs,h_estimate\n";
                for (const AverageEntry& e : table.found)
                    std::cout << e.D.str() << "," << e.eps_abs << "," << e.h_estimate
                              << "\n";
            } else {
                emit(to_json(table), out_format);
            }
            return kExitOk;
        }

        if (verify->parsed()) {
            if (suite == "ring") return verify_ring(seed);
            if (suite == "pell") return verify_pell(seed);
            if (suite == "geom") return verify_geom(seed);
            if (suite == "forms") return verify_forms(seed);
            if (suite == "congruence") return verify_congruence(seed);
        }
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const unsupported_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    }
    return kExitOk;
}
