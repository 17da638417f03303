#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kiss3/numeric.hpp"
#include "kiss3/ring.hpp"

namespace kiss3 {

/**
 * D in O_d congruent to a square mod 4 and not a perfect square.
 * Construction via make_discriminant certifies both properties.
 */
struct Discriminant {
    QuadInt value;
    QuadInt witness; // D - witness^2 lies in 4 O_d
};

std::optional<Discriminant> make_discriminant(const QuadInt& D);

// sqrt(D) with the branch fixed so arg lies in [0, pi). Normative for the
// signs of the power-sequence entries.
Cplx sqrt_branch(const QuadInt& D);

/**
 * Exact solution of t^2 - D u^2 = 4; the Pell equation is asserted on
 * construction.
 */
struct PellSolution {
    QuadInt t, u, D;

    PellSolution(QuadInt t_, QuadInt u_, QuadInt D_);

    // eps = (t + u sqrt(D))/2 with the fixed branch
    Cplx eps_value() const;
    Real eps_abs() const;
};

enum class SearchStatus { CertifiedWithinBound, Unknown };

const char* to_string(SearchStatus s);

struct FundamentalUnit {
    PellSolution sol;
    mpz_class search_norm_bound;
    SearchStatus status;
    Real eps; // |eps| > 1, cached
    // |D| <= 4: the solution group need not be generated by eps alone
    bool small_disc_warning;
};

// Exhaustive minimization of |eps| > 1 over u with norm(u) <= norm_bound.
// The scan is pruned with |eps|^2 >= norm(u)|D| - 7, which cannot skip a
// smaller solution. nullopt when the region holds no solution.
std::optional<FundamentalUnit> pell_fundamental(const Discriminant& D,
                                                const mpz_class& norm_bound);
// Same, reusing a precomputed lattice ball sorted by (norm, a, b).
std::optional<FundamentalUnit> pell_fundamental(const Discriminant& D,
                                                const mpz_class& norm_bound,
                                                const std::vector<QuadInt>& ball);

// Group law pulled back from multiplication of eps values.
PellSolution pell_compose(const PellSolution& s1, const PellSolution& s2);
PellSolution pell_identity(const Discriminant& D);
PellSolution pell_inverse(const PellSolution& s);

struct PowerEntry {
    int n;
    QuadInt t, u; // eps^(n+1) = (t + u sqrt(D))/2
};

struct PowerSeq {
    FundamentalUnit base;
    std::vector<PowerEntry> entries; // n = 0 .. n_max
};

// Chebyshev-style recurrence t_{n+1} = t0 t_n - t_{n-1} (same for u), seeded
// with (t_{-1}, u_{-1}) = (2, 0); entry n = 1 is cross-checked against the
// closed forms u1 = u0 t0 and t1 = t0^2 - 2.
PowerSeq power_sequence(const FundamentalUnit& f, int n_max);

struct MIndex {
    std::optional<int> m;     // least n with |t_n| < (4/9)|u_n|^2; nullopt = cap exceeded
    bool within_small_regime; // m <= 2, the regime guaranteed for |D| > 51
};

// Decided exactly via 81 norm(t_n) < 16 norm(u_n)^2.
MIndex m_index(const FundamentalUnit& f, int cap);

struct BoundCheck {
    std::string lemma;
    int n;
    std::string lhs, rhs;
    std::string verdict; // pass | fail | skipped | inconclusive
};

struct BoundReport {
    std::vector<BoundCheck> checks;
    int failures = 0;
    int inconclusive = 0;
};

// Evaluates, for n = 0..n_max and with each check gated on its hypotheses:
//   unit_norm_window: |t_n|^2 - 3 < |eps|^{2(n+1)} < |t_n|^2 + 3
//   u_sq_upper:       |u|^2 <= (|t|^2 + 4)/|D|
//   u_sq_lower:       |u|^2 >= (|t|^2 - 4)/|D|
//   t_floor:          |t|^2 >= |D| - 4            (u != 0)
//   t_cap:            |t| <= (9/2)|D|             (|t| >= (4/9)|u|^2, u != 0)
//   u_at_m_bound:     |u_m| <= 30 |D|^{3/2}       (m in {1,2}, |D| > 51)
// All but the window are decided exactly on squared norms.
BoundReport verify_pell_bounds(const FundamentalUnit& f, int n_max);

std::string to_csv(const BoundReport& report);

} // namespace kiss3
