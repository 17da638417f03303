#pragma once

#include "kiss3/numeric.hpp"

namespace kiss3 {

enum class IsometryClass { Elliptic, Parabolic, Loxodromic };

const char* to_string(IsometryClass k);

// Translation length and rotation angle of a loxodromic element, from
// cosh((ell + i theta)/2) = tr/2, with ell >= 0 and theta in (-pi, pi].
struct ComplexLength {
    double ell;
    double theta;
};

// Traces within 1e-12 of +-2 are treated as parabolic; lengths there are
// numerically meaningless.
IsometryClass classify(const Cplx& tr);

ComplexLength complex_length(const Cplx& tr);

// Real translation length from 4 cosh(ell) = |tr^2| + |tr^2 - 4|.
double displacement(const Cplx& tr);
Real displacement_hp(const Cplx& tr);

// For |z| + |w| >= 8 and |z| >= |w| + 1 (checked), whether
// |z^2 - 4| >= |w^2 - 4|. This is a theorem; false flags a bug.
bool square_gap_dominates(const Cplx& z, const Cplx& w);

} // namespace kiss3
