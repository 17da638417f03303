#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <optional>

namespace kiss3 {

// All transcendental evaluation runs at 50 significant digits and is only
// rounded to double at API boundaries.
using Real = boost::multiprecision::mpfr_float_50;

Real to_real(const mpz_class& z);
const Real& pi_hp();

// Complex number over Real. Only the handful of operations the length
// formulas need.
struct Cplx {
    Real re, im;

    Cplx() : re(0), im(0) {}
    Cplx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Cplx(double r, double i = 0.0) : re(r), im(i) {}

    Cplx operator+(const Cplx& o) const { return {re + o.re, im + o.im}; }
    Cplx operator-(const Cplx& o) const { return {re - o.re, im - o.im}; }
    Cplx operator*(const Cplx& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    Cplx operator-() const { return {-re, -im}; }
};

Real abs(const Cplx& z);
Cplx sqrt_principal(const Cplx& z);
Cplx log_principal(const Cplx& z);
// Principal branch: Re >= 0, Im in [-pi, pi].
Cplx acosh_principal(const Cplx& z);

// Normalize an angle into (-pi, pi].
Real wrap_angle(Real theta);

// Floor of the integer square root.
mpz_class isqrt_floor(const mpz_class& n);
// Exact integer square root, or nullopt when n is not a perfect square.
std::optional<mpz_class> isqrt_exact(const mpz_class& n);
// Nearest-integer division, halves rounded up. den must be nonzero.
mpz_class round_div(const mpz_class& num, const mpz_class& den);

// Sign of (n1 + sqrt(k1)) - (n2 + sqrt(k2)), decided exactly. k1, k2 >= 0.
int cmp_int_plus_sqrt(const mpz_class& n1, const mpz_class& k1,
                      const mpz_class& n2, const mpz_class& k2);

} // namespace kiss3
