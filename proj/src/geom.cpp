#include "kiss3/geom.hpp"

#include "kiss3/errors.hpp"

namespace kiss3 {

namespace {

const double kParabolicGuard = 1e-12;

Cplx square_minus_four(const Cplx& tr) {
    return tr * tr - Cplx(Real(4), Real(0));
}

} // namespace

const char* to_string(IsometryClass k) {
    switch (k) {
        case IsometryClass::Elliptic: return "elliptic";
        case IsometryClass::Parabolic: return "parabolic";
        case IsometryClass::Loxodromic: return "loxodromic";
    }
    return "?";
}

IsometryClass classify(const Cplx& tr) {
    if (abs(tr - Cplx(Real(2), Real(0))) <= kParabolicGuard ||
        abs(tr + Cplx(Real(2), Real(0))) <= kParabolicGuard)
        return IsometryClass::Parabolic;
    if (tr.im == 0 && tr.re > -2 && tr.re < 2) return IsometryClass::Elliptic;
    return IsometryClass::Loxodromic;
}

ComplexLength complex_length(const Cplx& tr) {
    if (classify(tr) != IsometryClass::Loxodromic)
        throw usage_error("complex_length: trace is not loxodromic");
    Cplx half{tr.re / 2, tr.im / 2};
    Cplx zeta = acosh_principal(half); // Re >= 0
    Real ell = 2 * zeta.re;
    Real theta = wrap_angle(2 * zeta.im);
    return {ell.convert_to<double>(), theta.convert_to<double>()};
}

Real displacement_hp(const Cplx& tr) {
    if (classify(tr) != IsometryClass::Loxodromic)
        throw usage_error("displacement: trace is not loxodromic");
    Real t2 = tr.re * tr.re + tr.im * tr.im; // |tr|^2 = |tr^2|
    Real gap = abs(square_minus_four(tr));
    return acosh((t2 + gap) / 4);
}

double displacement(const Cplx& tr) {
    return displacement_hp(tr).convert_to<double>();
}

bool square_gap_dominates(const Cplx& z, const Cplx& w) {
    Real az = abs(z), aw = abs(w);
    if (!(az + aw >= 8))
        throw usage_error("square_gap_dominates: |z| + |w| >= 8 required");
    if (!(az >= aw + 1))
        throw usage_error("square_gap_dominates: |z| >= |w| + 1 required");
    return abs(square_minus_four(z)) >= abs(square_minus_four(w));
}

} // namespace kiss3
