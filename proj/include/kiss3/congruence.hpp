#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kiss3/numeric.hpp"
#include "kiss3/pell.hpp"
#include "kiss3/ring.hpp"

namespace kiss3 {

/**
 * Matrix [[p, q], [r, s]] over O_d with determinant 1, asserted at
 * construction. Group elements only; there is no general 2x2 type.
 */
class Mat2 {
public:
    Mat2(QuadInt p, QuadInt q, QuadInt r, QuadInt s);

    const QuadInt& p() const { return p_; }
    const QuadInt& q() const { return q_; }
    const QuadInt& r() const { return r_; }
    const QuadInt& s() const { return s_; }
    Ring ring() const { return p_.ring(); }

    Mat2 operator*(const Mat2& o) const;
    Mat2 inverse() const;
    Mat2 operator-() const;
    QuadInt trace() const { return p_ + s_; }
    Mat2 pow(long n) const; // n >= 0

    bool operator==(const Mat2& o) const;
    bool operator!=(const Mat2& o) const { return !(*this == o); }
    bool lex_less(const Mat2& o) const;
    std::string str() const;

    static Mat2 identity(const Ring& rg);

private:
    QuadInt p_, q_, r_, s_;
};

// S = [[0,-1],[1,0]], T_1, T_w and the three inverses.
std::vector<Mat2> sl2_generators(const Ring& rg);

/**
 * Canonical residue representatives for O_d / mu O_d, computed from a
 * Hermite normal form of the ideal lattice. size() = norm(mu).
 */
class ResidueSystem {
public:
    explicit ResidueSystem(const QuadInt& mu);

    const QuadInt& modulus() const { return mu_; }
    mpz_class size() const;
    QuadInt reduce(const QuadInt& x) const;
    std::vector<QuadInt> all() const;

private:
    QuadInt mu_;
    mpz_class xper_, yper_, xoff_; // basis (xper_, 0), (xoff_, yper_)
};

struct PrimePower {
    QuadInt prime;          // canonical associate
    int exponent;
    mpz_class residue_norm; // norm of the prime = size of its residue field
};

// Factorization of the level modulus into prime elements of the PID O_d.
struct ResidueRing {
    QuadInt modulus;
    QuadInt unit; // modulus = unit * prod(prime^exponent)
    std::vector<PrimePower> factors;
};

// x with norm(x) = p, found by bounded search on the norm equation; exists
// for every non-inert rational prime p because O_d is a PID.
std::optional<QuadInt> solve_norm_equation(const Ring& rg, const mpz_class& p);

ResidueRing factor_element(const QuadInt& x);
ResidueRing factor_modulus(const QuadInt& u); // rejects zero and units

// All divisors of x up to associates, canonical representatives.
std::vector<QuadInt> divisors(const QuadInt& x);

// |SL2(O_d / u O_d)| = prod N(P)^{3e} (1 - N(P)^{-2}), exact.
mpz_class sl2_order(const ResidueRing& ring_data);

struct ResidueMat {
    QuadInt p, q, r, s;
    bool operator==(const ResidueMat& o) const {
        return p == o.p && q == o.q && r == o.r && s == o.s;
    }
};

ResidueMat reduce_mat(const Mat2& M, const QuadInt& u);
ResidueMat reduce_mat(const Mat2& M, const ResidueSystem& rs);

/**
 * Level data (u, tau) for the index-two extension of the principal
 * congruence group of level u: matrices reducing to Id or tau*Id mod u.
 * tau satisfies 2 tau = t and tau^2 = 1 in O_d/uO_d and comes from a Pell
 * solution (t, u) for D.
 */
struct CongruenceLevel {
    QuadInt u;
    QuadInt tau;      // canonical representative mod u
    QuadInt source_t; // the Pell triple that induced tau
    QuadInt source_u;
    Discriminant source_D;
    bool degenerate; // tau = 1 mod u: the two cosets coincide
};

CongruenceLevel make_level(const QuadInt& t, const QuadInt& u, const Discriminant& D);

enum class Membership { Principal, TauCoset, No };
const char* to_string(Membership m);

Membership member(const Mat2& M, const CongruenceLevel& level);

// Whether u^2 divides tr(M) - 2; requires M = Id mod u. A theorem for
// principal-congruence elements, so false flags a bug.
bool trace_congruence_check(const Mat2& M, const QuadInt& u);

struct LevelIndex {
    mpz_class index; // [SL2(O_d) : level group]
    bool degenerate;
};

LevelIndex level_index(const CongruenceLevel& level);

struct SystoleCertificate {
    mpz_class height;            // max entry norm enumerated
    QuadInt reference_t;         // trace whose displacement is certified minimal
    unsigned long members_checked = 0;
    unsigned long loxodromic = 0;
    unsigned long parabolic = 0;
    unsigned long elliptic = 0;
    unsigned long violations = 0;
    bool vacuous = false; // no loxodromic member within the height
    std::optional<double> min_ell;
    unsigned long min_witness_count = 0;   // before truncation
    std::vector<Mat2> min_witnesses;       // lex-sorted, truncated at 256
    std::vector<Mat2> violation_witnesses;
};

// Enumerates every group member with max entry norm <= height via coset
// pruning and divisor splitting of the determinant equation, then checks
// 4 cosh(ell) >= |t|^2 + |t^2 - 4| exactly for each loxodromic member.
// Requires 4 < |t| < (4/9)|u|^2 (checked exactly).
SystoleCertificate systole_certificate(const CongruenceLevel& level, const QuadInt& t,
                                       const mpz_class& height, int workers = 1);

struct TorsionReport {
    bool certified; // no real trace in (-2, 2) is possible at this level
    bool strong_coset_constraint; // coset traces constrained mod u^2
    std::vector<QuadInt> principal_candidates;
    std::vector<QuadInt> coset_candidates;
};

// Intersects the trace-residue constraints with the real interval (-2, 2).
TorsionReport torsion_scan(const CongruenceLevel& level);

// Bounded BFS over generator words: W with W A W^-1 = B. nullopt means
// "not found within depth", not "nonconjugate".
std::optional<Mat2> conjugating_witness(const Mat2& A, const Mat2& B, int depth);

} // namespace kiss3
