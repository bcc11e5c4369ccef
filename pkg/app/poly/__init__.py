from .cyclotomic import (
    CyclotomicCoset,
    PolyOverFp,
    build_parity_check,
    cyclotomic_coset,
    cyclotomic_cosets,
    generator_poly,
    minimal_poly,
    poly_divrem,
    poly_eval,
    poly_mul,
    x_power_minus_one,
)

__all__ = [
    'CyclotomicCoset',
    'PolyOverFp',
    'build_parity_check',
    'cyclotomic_coset',
    'cyclotomic_cosets',
    'generator_poly',
    'minimal_poly',
    'poly_divrem',
    'poly_eval',
    'poly_mul',
    'x_power_minus_one',
]
