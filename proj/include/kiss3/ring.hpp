#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kiss3/errors.hpp"
#include "kiss3/numeric.hpp"

namespace kiss3 {

// The nine squarefree d for which Q(sqrt(-d)) has class number one.
inline constexpr std::array<int, 9> kClassNumberOne = {1, 2, 3, 7, 11, 19, 43, 67, 163};

/**
 * Ring of integers O_d of Q(sqrt(-d)), d in the class-number-one list.
 * Integral basis {1, w} with w = sqrt(-d) for d = 1, 2 (mod 4) and
 * w = (1 + sqrt(-d))/2 for d = 3 (mod 4).
 */
class Ring {
public:
    explicit Ring(int d);

    int d() const { return d_; }
    // true when w = (1 + sqrt(-d))/2
    bool half_basis() const { return half_; }
    bool euclidean() const { return euclidean_; }
    long field_discriminant() const { return disc_; }
    int unit_count() const { return units_; }

    bool operator==(const Ring& o) const { return d_ == o.d_; }
    bool operator!=(const Ring& o) const { return d_ != o.d_; }

private:
    int d_;
    bool half_;
    bool euclidean_;
    long disc_;
    int units_;
};

/**
 * Element a + b*w of O_d in exact coordinates. Arithmetic is exact; the
 * only rounding happens in the complex embedding.
 */
class QuadInt {
public:
    QuadInt(const Ring& ring, mpz_class a, mpz_class b);
    QuadInt(const Ring& ring, long a, long b = 0);

    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    int d() const { return d_; }
    Ring ring() const { return Ring(d_); }

    QuadInt operator+(const QuadInt& o) const;
    QuadInt operator-(const QuadInt& o) const;
    QuadInt operator*(const QuadInt& o) const;
    QuadInt operator-() const;
    QuadInt operator*(const mpz_class& k) const;

    QuadInt conj() const;
    // a^2 + d b^2, resp. a^2 + ab + b^2 (1+d)/4; always a nonnegative integer.
    mpz_class norm() const;
    // x + conj(x) as a rational integer.
    mpz_class trace() const;

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_unit() const { return norm() == 1; }
    bool is_one() const { return a_ == 1 && b_ == 0; }

    bool operator==(const QuadInt& o) const;
    bool operator!=(const QuadInt& o) const { return !(*this == o); }
    // Lexicographic on (a, b); used only for deterministic ordering.
    bool lex_less(const QuadInt& o) const;

    std::string str() const;
    static QuadInt parse(const Ring& ring, const std::string& text);

private:
    void check_same_ring(const QuadInt& o) const;

    int d_;
    mpz_class a_, b_;
};

QuadInt zero(const Ring& ring);
QuadInt one(const Ring& ring);
QuadInt omega(const Ring& ring);
const std::vector<QuadInt>& units(const Ring& ring);

// Representative of the associate class of x maximizing (a, b)
// lexicographically among unit multiples.
QuadInt canonical_associate(const QuadInt& x);

// Exact square root in O_d, or nullopt. The returned root is the
// lexicographically larger of the two.
std::optional<QuadInt> sqrt_exact(const QuadInt& z);

// Exact quotient q with q*x = y, or nullopt when x does not divide y.
// x must be nonzero.
std::optional<QuadInt> divide_exact(const QuadInt& x, const QuadInt& y);

// gcd of the inputs, canonical up to units. Euclidean rings only
// (d in {1,2,3,7,11}); throws unsupported_error otherwise.
QuadInt content(const std::vector<QuadInt>& xs);

// Euclidean gcd of two elements (same restriction as content).
QuadInt gcd_euclidean(QuadInt x, QuadInt y);

// All x in O_d with norm(x) <= bound, ordered by (norm, a, b).
std::vector<QuadInt> lattice_ball(const Ring& ring, const mpz_class& bound);

// Complex embedding with Im(w) > 0.
Cplx to_complex(const QuadInt& x);

} // namespace kiss3
