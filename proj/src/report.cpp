#include "kiss3/report.hpp"

#include <cmath>

#include "kiss3/errors.hpp"
#include "kiss3/geom.hpp"

namespace kiss3 {

KissReport kiss_lower_bound(int d, const QuadInt& Dvalue, const Budgets& budgets) {
    Ring rg(d);
    auto D = make_discriminant(Dvalue);
    if (!D) throw usage_error("kiss: D = " + Dvalue.str() + " is not a discriminant");

    KissReport r{d, Dvalue, budgets};

    VolumeConstant vol = orbifold_volume(d);
    r.orbifold_volume = vol.value;

    r.fundamental = pell_fundamental(*D, budgets.pell_bound);
    if (!r.fundamental) {
        r.notes.push_back("no Pell solution within the search bound");
        return r;
    }

    MIndex mi = m_index(*r.fundamental, budgets.m_cap);
    if (!mi.m) {
        r.notes.push_back("m index exceeded its cap");
        return r;
    }
    r.m = *mi.m;
    r.small_regime = mi.within_small_regime;
    r.stabilizer_order = 2L * (*mi.m + 1);

    PowerSeq seq = power_sequence(*r.fundamental, *mi.m);
    r.t_m = seq.entries.back().t;
    r.u_m = seq.entries.back().u;
    if (r.u_m->is_zero() || r.u_m->is_unit()) {
        r.notes.push_back("u_m is a unit; the congruence level is trivial");
        return r;
    }

    CongruenceLevel level = make_level(*r.t_m, *r.u_m, *D);
    r.tau = level.tau;
    if (level.degenerate) r.notes.push_back("degenerate level: tau = 1 mod u");
    LevelIndex idx = level_index(level);
    r.group_order = idx.index;
    r.manifold_volume = vol.value * idx.index.get_d();

    // 2 |G| <= N(u_m)^3, exact integers
    mpz_class nu = r.u_m->norm();
    r.eq_index_cube_ok = 2 * idx.index <= nu * nu * nu;

    // systole from the displacement of the selected trace
    r.systole = displacement(to_complex(*r.t_m));

    ClassNumberEstimate est =
        class_number_estimate(*D, budgets.a_bound, budgets.equiv_depth);
    r.h_estimate = est;
    if (est.classes_found == 0) {
        r.notes.push_back("no primitive forms within the a-bound");
        return r;
    }

    // verify each representative's power lands in the tau coset, and that
    // the powers are pairwise nonconjugate as far as the bounded search sees
    PellSolution power_sol(*r.t_m, *r.u_m, D->value);
    std::vector<Mat2> verified_powers;
    for (const QuadForm& Q : est.representatives) {
        Mat2 power = automorph(Q, power_sol);
        if (member(power, level) != Membership::TauCoset) {
            r.notes.push_back("representative " + Q.str() +
                              ": power is not in the tau coset");
            continue;
        }
        bool duplicate = false;
        for (const Mat2& seen : verified_powers) {
            if (conjugating_witness(seen, power, budgets.conj_depth)) {
                duplicate = true;
                r.notes.push_back("representative " + Q.str() +
                                  ": power conjugate to an earlier class");
                break;
            }
        }
        if (!duplicate) verified_powers.push_back(power);
    }
    r.verified_classes = static_cast<long>(verified_powers.size());

    auto bound_from_classes = [&](long classes) {
        mpz_class numerator = mpz_class(classes) * idx.index;
        mpz_class stab(*r.stabilizer_order);
        if (!mpz_divisible_p(numerator.get_mpz_t(), stab.get_mpz_t())) {
            r.divisibility_exact = false;
            r.notes.push_back("stabilizer does not divide h |G|; floor taken");
        }
        return mpz_class(numerator / stab);
    };
    r.kiss_lower = bound_from_classes(est.classes_found);
    r.kiss_lower_certified = bound_from_classes(r.verified_classes);

    if (auto diag = growth_diagnostic(r)) r.diagnostic_exponent = diag->ratio;
    return r;
}

namespace {

// L(2, chi) for the quadratic character of the given fundamental
// discriminant, by direct summation over one period table. The character
// is nonprincipal, so partial sums are bounded and the tail after N terms
// is below q/N^2.
double dirichlet_l2(long disc) {
    const long q = std::labs(disc);
    std::vector<int> chi(q);
    mpz_class D(disc);
    for (long r = 0; r < q; ++r)
        chi[r] = mpz_kronecker_ui(D.get_mpz_t(), static_cast<unsigned long>(r));
    const long N = 2000000;
    double sum = 0, comp = 0; // Kahan
    for (long n = N; n >= 1; --n) {
        double term = static_cast<double>(chi[n % q]) / (static_cast<double>(n) * n);
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

} // namespace

VolumeConstant orbifold_volume(int d) {
    Ring rg(d);
    const long disc = rg.field_discriminant();
    const double pi = 3.14159265358979323846;
    const double zeta2 = pi * pi / 6.0;
    const double l2 = dirichlet_l2(disc);
    const double q = static_cast<double>(-disc);
    double value = std::pow(q, 1.5) * zeta2 * l2 / (4 * pi * pi);
    return VolumeConstant{d, disc, value, zeta2, l2,
                          "|disc|^(3/2) * zeta(2) * L(2,chi) / (4 pi^2)"};
}

std::optional<GrowthDiagnostic> growth_diagnostic(const KissReport& r) {
    if (!r.kiss_lower || !r.manifold_volume || !r.u_m) return std::nullopt;
    double vol = *r.manifold_volume;
    if (!(vol > 1)) return std::nullopt;
    double kiss = r.kiss_lower->get_d();
    GrowthDiagnostic diag{};
    diag.ratio = kiss * std::log(vol) / std::pow(vol, 31.0 / 27.0);
    diag.u_norm_ratio = r.u_m->norm().get_d() / std::cbrt(vol);
    diag.index_cube_ok = r.eq_index_cube_ok;
    return diag;
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

double adaptive_simpson(double (*f)(double), double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = (a + b) / 2;
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double inv_log(double t) { return 1.0 / std::log(t); }

} // namespace

double logarithmic_integral(double x) {
    if (x <= 2) return 0.0;
    double fa = inv_log(2), fb = inv_log(x), fm = inv_log((2 + x) / 2);
    double whole = simpson(2, x, fa, fm, fb);
    return adaptive_simpson(inv_log, 2, x, fa, fm, fb, whole, 1e-11, 48);
}

AverageTable sarnak_average(int d, double x, const Budgets& budgets,
                            std::optional<double> c_d_supplied) {
    if (!(x > 1)) throw usage_error("average: x must be > 1");
    Ring rg(d);
    AverageTable table{d, x, budgets};

    auto ball_u = lattice_ball(rg, budgets.pell_bound);
    long h_sum = 0;
    for (const QuadInt& Dv : lattice_ball(rg, budgets.scan_bound)) {
        if (Dv.is_zero()) continue;
        auto D = make_discriminant(Dv);
        if (!D) continue;
        ++table.discriminants_scanned;
        auto f = pell_fundamental(*D, budgets.pell_bound, ball_u);
        if (!f) continue;
        if (!(f->eps <= Real(x))) continue;
        ClassNumberEstimate est =
            class_number_estimate(*D, budgets.a_bound, budgets.equiv_depth);
        table.found.push_back(AverageEntry{Dv, f->eps.convert_to<double>(),
                                           est.classes_found});
        h_sum += est.classes_found;
    }
    if (table.found.empty())
        throw budget_error("no discriminants within x at current budgets");
    table.empirical_mean = static_cast<double>(h_sum) /
                           static_cast<double>(table.found.size());

    const double li = logarithmic_integral(std::pow(x, 4.0));
    if (c_d_supplied) {
        table.c_d = *c_d_supplied;
        table.c_d_supplied = true;
    } else {
        // least-squares fit of the single-parameter model to this table
        table.c_d = li / (x * x * table.empirical_mean);
    }
    table.model_value = li / (table.c_d * x * x);
    table.caveats = {
        "h values are heuristic estimates bounded by the search budgets",
        "the discriminant set is truncated by the scan and Pell bounds",
        "c_d is fitted to this table unless supplied; the model is qualitative",
    };
    return table;
}

// ---------------------------------------------------------------------------
// JSON encodings

using nlohmann::json;

json to_json(const QuadInt& x) {
    return json{{"a", x.a().get_str()}, {"b", x.b().get_str()}, {"d", x.d()}};
}

json to_json(const Mat2& m) {
    return json{{"p", to_json(m.p())},
                {"q", to_json(m.q())},
                {"r", to_json(m.r())},
                {"s", to_json(m.s())}};
}

json to_json(const FundamentalUnit& f) {
    return json{{"t", to_json(f.sol.t)},
                {"u", to_json(f.sol.u)},
                {"D", to_json(f.sol.D)},
                {"eps_abs", f.eps.convert_to<double>()},
                {"status", to_string(f.status)},
                {"search_norm_bound", f.search_norm_bound.get_str()},
                {"small_disc_warning", f.small_disc_warning}};
}

json to_json(const ClassNumberEstimate& est) {
    json reps = json::array();
    for (const QuadForm& f : est.representatives)
        reps.push_back(json{{"a", to_json(f.a())},
                            {"b", to_json(f.b())},
                            {"c", to_json(f.c())}});
    return json{{"D", to_json(est.D.value)},
                {"classes_found", est.classes_found},
                {"merged_by_depth", est.merged_by_depth},
                {"a_norm_bound", est.a_norm_bound.get_str()},
                {"equiv_depth", est.equiv_depth},
                {"status", to_string(est.status)},
                {"certified_minimum", est.certified_minimum},
                {"representatives", reps}};
}

json to_json(const SystoleCertificate& cert) {
    json mins = json::array(), viols = json::array();
    for (const Mat2& m : cert.min_witnesses) mins.push_back(to_json(m));
    for (const Mat2& m : cert.violation_witnesses) viols.push_back(to_json(m));
    json out{{"height", cert.height.get_str()},
             {"reference_t", to_json(cert.reference_t)},
             {"members_checked", cert.members_checked},
             {"loxodromic", cert.loxodromic},
             {"parabolic", cert.parabolic},
             {"elliptic", cert.elliptic},
             {"violations", cert.violations},
             {"vacuous", cert.vacuous},
             {"min_witness_count", cert.min_witness_count},
             {"witnesses", mins},
             {"violation_witnesses", viols}};
    if (cert.min_ell) out["min_ell"] = *cert.min_ell;
    return out;
}

json to_json(const TorsionReport& rep) {
    json prin = json::array(), coset = json::array();
    for (const QuadInt& x : rep.principal_candidates) prin.push_back(to_json(x));
    for (const QuadInt& x : rep.coset_candidates) coset.push_back(to_json(x));
    return json{{"certified", rep.certified},
                {"strong_coset_constraint", rep.strong_coset_constraint},
                {"principal_candidates", prin},
                {"coset_candidates", coset}};
}

json to_json(const CongruenceLevel& level) {
    return json{{"u", to_json(level.u)},
                {"tau", to_json(level.tau)},
                {"source_t", to_json(level.source_t)},
                {"source_u", to_json(level.source_u)},
                {"source_D", to_json(level.source_D.value)},
                {"degenerate", level.degenerate}};
}

json to_json(const VolumeConstant& vol) {
    return json{{"d", vol.d},
                {"disc", vol.disc},
                {"value", vol.value},
                {"zeta2", vol.zeta2},
                {"L2_chi", vol.lvalue},
                {"formula", vol.formula}};
}

json to_json(const KissReport& r) {
    json out{{"d", r.d}, {"D", to_json(r.D)}};
    out["budgets"] = json{{"pell_bound", r.budgets.pell_bound.get_str()},
                          {"a_bound", r.budgets.a_bound.get_str()},
                          {"equiv_depth", r.budgets.equiv_depth},
                          {"m_cap", r.budgets.m_cap},
                          {"conj_depth", r.budgets.conj_depth},
                          {"scan_bound", r.budgets.scan_bound.get_str()},
                          {"workers", r.budgets.workers}};
    out["fundamental"] = r.fundamental ? to_json(*r.fundamental) : json(nullptr);
    out["m"] = r.m ? json(*r.m) : json(nullptr);
    out["small_regime"] = r.small_regime;
    out["t_m"] = r.t_m ? to_json(*r.t_m) : json(nullptr);
    out["u_m"] = r.u_m ? to_json(*r.u_m) : json(nullptr);
    out["tau"] = r.tau ? to_json(*r.tau) : json(nullptr);
    out["group_order"] = r.group_order ? json(r.group_order->get_str()) : json(nullptr);
    out["stabilizer_order"] = r.stabilizer_order ? json(*r.stabilizer_order) : json(nullptr);
    out["h_estimate"] = r.h_estimate ? to_json(*r.h_estimate) : json(nullptr);
    out["kiss_lower"] = r.kiss_lower ? json(r.kiss_lower->get_str()) : json(nullptr);
    out["kiss_lower_certified"] =
        r.kiss_lower_certified ? json(r.kiss_lower_certified->get_str()) : json(nullptr);
    out["verified_classes"] = r.verified_classes;
    out["divisibility_exact"] = r.divisibility_exact;
    out["systole"] = r.systole ? json(*r.systole) : json(nullptr);
    out["orbifold_volume"] = r.orbifold_volume ? json(*r.orbifold_volume) : json(nullptr);
    out["manifold_volume"] = r.manifold_volume ? json(*r.manifold_volume) : json(nullptr);
    out["diagnostic_exponent"] =
        r.diagnostic_exponent ? json(*r.diagnostic_exponent) : json(nullptr);
    out["eq_index_cube_ok"] = r.eq_index_cube_ok;
    out["notes"] = r.notes;
    return out;
}

json to_json(const AverageTable& table) {
    json entries = json::array();
    for (const AverageEntry& e : table.found)
        entries.push_back(json{{"D", to_json(e.D)},
                               {"eps_abs", e.eps_abs},
                               {"h_estimate", e.h_estimate}});
    return json{{"d", table.d},
                {"x", table.x},
                {"discriminants_scanned", table.discriminants_scanned},
                {"found", entries},
                {"empirical_mean", table.empirical_mean},
                {"c_d", table.c_d},
                {"c_d_supplied", table.c_d_supplied},
                {"model_value", table.model_value},
                {"caveats", table.caveats}};
}

} // namespace kiss3
