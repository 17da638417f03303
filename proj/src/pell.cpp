#include "kiss3/pell.hpp"

#include <sstream>

#include "kiss3/errors.hpp"

namespace kiss3 {

std::optional<Discriminant> make_discriminant(const QuadInt& D) {
    const Ring rg = D.ring();
    const QuadInt four(rg, 4, 0);
    // x^2 mod 4 depends only on x mod 2, so four residue classes suffice.
    const QuadInt reps[4] = {QuadInt(rg, 0, 0), QuadInt(rg, 1, 0),
                             QuadInt(rg, 0, 1), QuadInt(rg, 1, 1)};
    std::optional<QuadInt> witness;
    for (const QuadInt& x : reps) {
        if (divide_exact(four, D - x * x)) {
            witness = x;
            break;
        }
    }
    if (!witness) return std::nullopt;
    if (sqrt_exact(D)) return std::nullopt;
    return Discriminant{D, *witness};
}

Cplx sqrt_branch(const QuadInt& D) {
    Cplx s = sqrt_principal(to_complex(D));
    if (s.im < 0 || (s.im == 0 && s.re < 0)) return -s;
    return s;
}

PellSolution::PellSolution(QuadInt t_, QuadInt u_, QuadInt D_)
    : t(std::move(t_)), u(std::move(u_)), D(std::move(D_)) {
    const Ring rg = t.ring();
    if (u.d() != t.d() || D.d() != t.d())
        throw usage_error("PellSolution: ring mismatch");
    if (!(t * t - D * u * u == QuadInt(rg, 4, 0)))
        throw invariant_error("PellSolution: t^2 - D u^2 != 4");
}

Cplx PellSolution::eps_value() const {
    Cplx sd = sqrt_branch(D);
    Cplx tc = to_complex(t), uc = to_complex(u);
    Cplx sum = tc + uc * sd;
    return {sum.re / 2, sum.im / 2};
}

Real PellSolution::eps_abs() const { return abs(eps_value()); }

const char* to_string(SearchStatus s) {
    return s == SearchStatus::CertifiedWithinBound ? "certified-within-bound"
                                                   : "unknown";
}

namespace {

// Tie-break for equal |eps|: lexicographic maximum of (t, u) coordinates.
bool solution_lex_less(const PellSolution& x, const PellSolution& y) {
    if (x.t != y.t) return x.t.lex_less(y.t);
    return x.u.lex_less(y.u);
}

} // namespace

std::optional<FundamentalUnit> pell_fundamental(const Discriminant& D,
                                                const mpz_class& norm_bound) {
    return pell_fundamental(D, norm_bound,
                            lattice_ball(D.value.ring(), norm_bound));
}

std::optional<FundamentalUnit> pell_fundamental(const Discriminant& D,
                                                const mpz_class& norm_bound,
                                                const std::vector<QuadInt>& ball) {
    const Ring rg = D.value.ring();
    const QuadInt four(rg, 4, 0);
    const mpz_class normD = D.value.norm();

    std::optional<PellSolution> best;
    Real best_eps(0);

    for (const QuadInt& u : ball) {
        if (u.is_zero()) continue;
        if (u.norm() > norm_bound) break;
        if (best) {
            // Any solution satisfies |eps|^2 >= norm(u)|D| - 7, so once a
            // candidate is known the scan over larger u can stop. The ball
            // is sorted by norm, so this is a clean break.
            Real floor_sq = to_real(u.norm()) * sqrt(to_real(normD)) - 7;
            if (floor_sq > best_eps * best_eps * (1 + Real("1e-30"))) break;
        }
        QuadInt z = four + D.value * u * u;
        if (mpz_perfect_square_p(z.norm().get_mpz_t()) == 0) continue;
        auto w = sqrt_exact(z);
        if (!w) continue;
        for (const QuadInt& t : {*w, -*w}) {
            PellSolution cand(t, u, D.value);
            Real e = cand.eps_abs();
            if (!(e > 1 + Real("1e-30"))) continue;
            if (!best) {
                best = cand;
                best_eps = e;
                continue;
            }
            Real diff = e - best_eps;
            Real tol = best_eps * Real("1e-40");
            if (diff < -tol) {
                best = cand;
                best_eps = e;
            } else if (diff <= tol && solution_lex_less(*best, cand)) {
                best = cand; // tie: canonical representative
            }
        }
    }
    if (!best) return std::nullopt;
    bool small_disc = normD <= 16; // |D| <= 4
    return FundamentalUnit{*best, norm_bound, SearchStatus::CertifiedWithinBound,
                           best_eps, small_disc};
}

PellSolution pell_compose(const PellSolution& s1, const PellSolution& s2) {
    if (!(s1.D == s2.D)) throw usage_error("pell_compose: different discriminants");
    const Ring rg = s1.t.ring();
    const QuadInt two(rg, 2, 0);
    QuadInt tnum = s1.t * s2.t + s1.D * s1.u * s2.u;
    QuadInt unum = s1.t * s2.u + s2.t * s1.u;
    auto t = divide_exact(two, tnum);
    auto u = divide_exact(two, unum);
    if (!t || !u)
        throw invariant_error("pell_compose: halving failed; inputs are not solutions");
    return PellSolution(*t, *u, s1.D);
}

PellSolution pell_identity(const Discriminant& D) {
    const Ring rg = D.value.ring();
    return PellSolution(QuadInt(rg, 2, 0), zero(rg), D.value);
}

PellSolution pell_inverse(const PellSolution& s) {
    return PellSolution(s.t, -s.u, s.D);
}

PowerSeq power_sequence(const FundamentalUnit& f, int n_max) {
    if (n_max < 0) throw usage_error("power_sequence: n_max must be >= 0");
    const Ring rg = f.sol.t.ring();
    PowerSeq seq{f, {}};
    QuadInt t_prev(rg, 2, 0), u_prev = zero(rg); // eps^0
    QuadInt t_cur = f.sol.t, u_cur = f.sol.u;
    const QuadInt t0 = f.sol.t, u0 = f.sol.u;
    for (int n = 0; n <= n_max; ++n) {
        // construction through PellSolution asserts the Pell equation
        PellSolution check(t_cur, u_cur, f.sol.D);
        if (n == 1) {
            if (!(u_cur == u0 * t0) || !(t_cur == t0 * t0 - QuadInt(rg, 2, 0)))
                throw invariant_error("power_sequence: closed form for n=1 violated");
        }
        seq.entries.push_back(PowerEntry{n, t_cur, u_cur});
        QuadInt t_next = t0 * t_cur - t_prev;
        QuadInt u_next = t0 * u_cur - u_prev;
        t_prev = t_cur;
        u_prev = u_cur;
        t_cur = t_next;
        u_cur = u_next;
    }
    return seq;
}

namespace {

// |t| < (4/9)|u|^2 decided exactly on squared norms.
bool below_u_square_threshold(const QuadInt& t, const QuadInt& u) {
    return 81 * t.norm() < 16 * u.norm() * u.norm();
}

} // namespace

MIndex m_index(const FundamentalUnit& f, int cap) {
    if (cap < 0) throw usage_error("m_index: cap must be >= 0");
    PowerSeq seq = power_sequence(f, cap);
    for (const PowerEntry& e : seq.entries) {
        if (below_u_square_threshold(e.t, e.u))
            return MIndex{e.n, e.n <= 2};
    }
    return MIndex{std::nullopt, false};
}

namespace {

const double kGuard = 1e-9;

std::string real_str(const Real& x) {
    std::ostringstream os;
    os.precision(15);
    os << x;
    return os.str();
}

// verdict of "a < b" with a guard band around equality
std::string guarded_less(const Real& a, const Real& b) {
    Real diff = b - a;
    if (diff > kGuard) return "pass";
    if (diff < -kGuard) return "fail";
    return "inconclusive";
}

void tally(BoundReport& report, BoundCheck check) {
    if (check.verdict == "fail") ++report.failures;
    if (check.verdict == "inconclusive") ++report.inconclusive;
    report.checks.push_back(std::move(check));
}

} // namespace

BoundReport verify_pell_bounds(const FundamentalUnit& f, int n_max) {
    if (n_max < 0) throw usage_error("verify_pell_bounds: n_max must be >= 0");
    BoundReport report;
    const mpz_class normD = f.sol.D.norm();
    PowerSeq seq = power_sequence(f, n_max);
    const Real eps_sq = f.eps * f.eps;

    Real eps_pow = eps_sq; // |eps|^{2(n+1)}
    for (const PowerEntry& e : seq.entries) {
        const mpz_class nt = e.t.norm(), nu = e.u.norm();

        // |t_n|^2 - 3 < |eps|^{2(n+1)} < |t_n|^2 + 3
        {
            Real lo = to_real(nt) - 3, hi = to_real(nt) + 3;
            std::string v1 = guarded_less(lo, eps_pow);
            std::string v2 = guarded_less(eps_pow, hi);
            std::string verdict = (v1 == "fail" || v2 == "fail") ? "fail"
                                  : (v1 == "pass" && v2 == "pass")
                                      ? "pass"
                                      : "inconclusive";
            tally(report, {"unit_norm_window", e.n,
                           real_str(lo) + " < " + real_str(eps_pow),
                           real_str(eps_pow) + " < " + real_str(hi), verdict});
        }

        // |u|^2 |D| <= |t|^2 + 4, exactly: nu^2 normD <= (nt + 4)^2
        {
            mpz_class lhs = nu * nu * normD, rhs = (nt + 4) * (nt + 4);
            tally(report, {"u_sq_upper", e.n, lhs.get_str(), rhs.get_str(),
                           lhs <= rhs ? "pass" : "fail"});
        }

        // |u|^2 |D| >= |t|^2 - 4
        {
            std::string verdict;
            if (nt <= 4) {
                verdict = "pass"; // right-hand side is nonpositive
            } else {
                mpz_class lhs = nu * nu * normD, rhs = (nt - 4) * (nt - 4);
                verdict = lhs >= rhs ? "pass" : "fail";
            }
            tally(report, {"u_sq_lower", e.n, mpz_class(nu * nu * normD).get_str(),
                           nt <= 4 ? "trivial" : mpz_class((nt - 4) * (nt - 4)).get_str(),
                           verdict});
        }

        // u != 0 implies |t|^2 >= |D| - 4, exactly: (nt + 4)^2 >= normD
        {
            if (e.u.is_zero()) {
                tally(report, {"t_floor", e.n, "-", "-", "skipped"});
            } else {
                mpz_class lhs = (nt + 4) * (nt + 4);
                tally(report, {"t_floor", e.n, lhs.get_str(), normD.get_str(),
                               lhs >= normD ? "pass" : "fail"});
            }
        }

        // |t| >= (4/9)|u|^2 and u != 0 imply |t| <= (9/2)|D|: 4 nt <= 81 normD
        {
            bool hyp = !e.u.is_zero() && 81 * nt >= 16 * nu * nu;
            if (!hyp) {
                tally(report, {"t_cap", e.n, "-", "-", "skipped"});
            } else {
                mpz_class lhs = 4 * nt, rhs = 81 * normD;
                tally(report, {"t_cap", e.n, lhs.get_str(), rhs.get_str(),
                               lhs <= rhs ? "pass" : "fail"});
            }
        }

        eps_pow *= eps_sq;
    }

    // |u_m| <= 30 |D|^{3/2} when m in {1,2} and |D| > 51 (norm > 2601)
    {
        MIndex mi = m_index(f, n_max);
        bool hyp = mi.m && (*mi.m == 1 || *mi.m == 2) && normD > 2601;
        if (!hyp) {
            tally(report, {"u_at_m_bound", mi.m ? *mi.m : -1, "-", "-", "skipped"});
        } else {
            const mpz_class num = seq.entries[*mi.m].u.norm();
            mpz_class lhs = num * num, rhs = 810000 * normD * normD * normD;
            tally(report, {"u_at_m_bound", *mi.m, lhs.get_str(), rhs.get_str(),
                           lhs <= rhs ? "pass" : "fail"});
        }
    }

    return report;
}

std::string to_csv(const BoundReport& report) {
    std::ostringstream os;
    os << "lemma,n,lhs,rhs,verdict\n";
    for (const BoundCheck& c : report.checks) {
        std::string lhs = c.lhs, rhs = c.rhs;
        for (std::string* s : {&lhs, &rhs})
            for (char& ch : *s)
                if (ch == ',') ch = ';';
        os << c.lemma << "," << c.n << "," << lhs << "," << rhs << ","
           << c.verdict << "\n";
    }
    return os.str();
}

} // namespace kiss3
