#include "kiss3/numeric.hpp"

#include <boost/math/constants/constants.hpp>

#include "kiss3/errors.hpp"

namespace kiss3 {

Real to_real(const mpz_class& z) {
    Real r;
    mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
    return r;
}

const Real& pi_hp() {
    static const Real pi = boost::math::constants::pi<Real>();
    return pi;
}

Real abs(const Cplx& z) { return hypot(z.re, z.im); }

Cplx sqrt_principal(const Cplx& z) {
    if (z.re == 0 && z.im == 0) return Cplx(Real(0), Real(0));
    Real r = hypot(z.re, z.im);
    if (z.re >= 0) {
        Real x = sqrt((r + z.re) / 2);
        return {x, z.im / (2 * x)};
    }
    // Branch cut along the negative real axis maps onto the positive
    // imaginary axis.
    Real y = sqrt((r - z.re) / 2);
    if (z.im < 0) y = -y;
    return {z.im / (2 * y), y};
}

Cplx log_principal(const Cplx& z) {
    return {log(hypot(z.re, z.im)), atan2(z.im, z.re)};
}

Cplx acosh_principal(const Cplx& z) {
    Cplx a = sqrt_principal(z - Cplx(Real(1), Real(0)));
    Cplx b = sqrt_principal(z + Cplx(Real(1), Real(0)));
    return log_principal(z + a * b);
}

Real wrap_angle(Real theta) {
    const Real& pi = pi_hp();
    const Real two_pi = 2 * pi;
    while (theta > pi) theta -= two_pi;
    while (theta <= -pi) theta += two_pi;
    return theta;
}

mpz_class isqrt_floor(const mpz_class& n) {
    if (n < 0) throw usage_error("isqrt_floor: negative argument");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::optional<mpz_class> isqrt_exact(const mpz_class& n) {
    if (n < 0) return std::nullopt;
    mpz_class r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) return std::nullopt;
    return r;
}

mpz_class round_div(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw usage_error("round_div: zero denominator");
    mpz_class n = num, d = den;
    if (d < 0) { n = -n; d = -d; }
    mpz_class q;
    mpz_class t = 2 * n + d;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), mpz_class(2 * d).get_mpz_t());
    return q;
}

namespace {

// Sign of (a + sqrt(k)), a any integer, k >= 0.
int sign_int_plus_sqrt(const mpz_class& a, const mpz_class& k) {
    if (a >= 0) return (a > 0 || k > 0) ? 1 : 0;
    // a < 0: compare sqrt(k) with |a|.
    mpz_class a2 = a * a;
    if (k > a2) return 1;
    if (k < a2) return -1;
    return 0;
}

} // namespace

int cmp_int_plus_sqrt(const mpz_class& n1, const mpz_class& k1,
                      const mpz_class& n2, const mpz_class& k2) {
    if (k1 < 0 || k2 < 0) throw usage_error("cmp_int_plus_sqrt: negative radicand");
    if (k1 == k2) return cmp(n1, n2) > 0 ? 1 : (cmp(n1, n2) < 0 ? -1 : 0);
    mpz_class a = n1 - n2;
    if (a == 0) return k1 > k2 ? 1 : -1;
    // sign of (a + sqrt(k1) - sqrt(k2)).
    // Compare sqrt(k1) - sqrt(k2) against -a by isolating one radical:
    // sign(a + s1 - s2) where s_i = sqrt(k_i). Work with sign of
    // (a + s1) vs s2; (a + s1) may be negative.
    int lhs_sign = sign_int_plus_sqrt(a, k1);
    if (lhs_sign < 0) return k2 >= 0 ? -1 : 1;
    if (lhs_sign == 0) return k2 > 0 ? -1 : 0;
    // Both sides nonnegative: compare squares.
    // (a + s1)^2 = a^2 + k1 + 2a*s1, so compare (a^2 + k1 - k2) vs -2a*s1.
    mpz_class c = a * a + k1 - k2;
    mpz_class lin = 2 * a; // coefficient of s1 on the left
    // sign of (c + lin*sqrt(k1)):
    if (lin >= 0) {
        if (c >= 0) return (c > 0 || lin * lin * k1 > 0) ? 1 : 0;
        // c < 0 <= lin*s1: compare lin^2*k1 vs c^2.
        mpz_class l2k = lin * lin * k1, c2 = c * c;
        return l2k > c2 ? 1 : (l2k < c2 ? -1 : 0);
    }
    if (c <= 0) return (c < 0 || lin * lin * k1 > 0) ? -1 : 0;
    mpz_class l2k = lin * lin * k1, c2 = c * c;
    return c2 > l2k ? 1 : (c2 < l2k ? -1 : 0);
}

} // namespace kiss3
