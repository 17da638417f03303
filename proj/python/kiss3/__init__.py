"""Exact arithmetic, Pell equations, quadratic forms and congruence-level
systole certificates over the class-number-one imaginary quadratic rings.

Quadratic integers are written as strings over the integral basis {1, w},
for example "5", "11*w", "-3+2*w".
"""

from ._core import (
    BudgetError,
    UnsupportedError,
    UsageError,
    class_number_estimate,
    class_number_one_ds,
    classify,
    complex_length,
    displacement,
    is_discriminant,
    kiss_lower_bound,
    m_index,
    make_level,
    mul,
    norm,
    orbifold_volume,
    pell_bounds_csv,
    pell_fundamental,
    power_sequence,
    sarnak_average,
    sl2_order,
    sqrt_exact,
    systole_certificate,
)

__all__ = [
    "BudgetError",
    "UnsupportedError",
    "UsageError",
    "class_number_estimate",
    "class_number_one_ds",
    "classify",
    "complex_length",
    "displacement",
    "is_discriminant",
    "kiss_lower_bound",
    "m_index",
    "make_level",
    "mul",
    "norm",
    "orbifold_volume",
    "pell_bounds_csv",
    "pell_fundamental",
    "power_sequence",
    "sarnak_average",
    "sl2_order",
    "sqrt_exact",
    "systole_certificate",
]
