import logging

import pytest

from app.errors import FieldArithmeticError, InvalidParameterError
from app.poly import (
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

logger = logging.getLogger(__name__)


def test_coset_of_one(fd35):
    coset = cyclotomic_coset(1, fd35)
    assert coset.members == (1, 3, 9, 27, 81)
    assert coset.representative == 1


def test_coset_of_zero(fd35):
    assert cyclotomic_coset(0, fd35).members == (0,)


def test_coset_index_out_of_range(fd35):
    with pytest.raises(InvalidParameterError):
        cyclotomic_coset(242, fd35)


def test_cosets_partition_exponents(fd35):
    cosets = cyclotomic_cosets(fd35)
    members = [j for c in cosets for j in c.members]
    assert sorted(members) == list(range(fd35.order))
    assert all(len(c) in (1, 5) for c in cosets)


def test_poly_mul_and_divrem():
    p = 3
    x_minus_one = PolyOverFp.from_coeffs([2, 1], p)
    x_plus_one = PolyOverFp.from_coeffs([1, 1], p)
    product = poly_mul(x_minus_one, x_plus_one)
    assert product.coeffs == (2, 0, 1)
    quotient, remainder = poly_divrem(product, x_minus_one)
    assert quotient == x_plus_one
    assert remainder.is_zero


def test_divide_by_zero_polynomial():
    with pytest.raises(FieldArithmeticError):
        poly_divrem(x_power_minus_one(4, 3), PolyOverFp.from_coeffs([0], 3))


def test_minimal_poly_of_zero_coset(fd35):
    assert minimal_poly(0, fd35).coeffs == (2, 1)


def test_minimal_poly_properties(fd35):
    h1 = minimal_poly(1, fd35)
    assert h1.degree == 5
    assert h1.is_monic
    assert poly_eval(h1, fd35.power_of_pi(-1), fd35) == 0
    assert minimal_poly(3, fd35) == h1
    assert minimal_poly(5, fd35) != h1


def test_parity_check_polynomial(spec351, fd35):
    h = build_parity_check(spec351, fd35)
    assert h.degree == 15
    assert h.is_monic
    _, remainder = poly_divrem(x_power_minus_one(242, 3), h)
    assert remainder.is_zero
    for exponent in (1, spec351.d1, spec351.d2):
        assert poly_eval(h, fd35.power_of_pi(-exponent), fd35) == 0
    logger.info(f"h(x) for {spec351}: {h.to_json()}")


def test_generator_polynomial(spec351, fd35):
    h = build_parity_check(spec351, fd35)
    g = generator_poly(h, fd35)
    assert g.degree == 242 - 15
    assert g.is_monic
    assert poly_mul(g, h) == x_power_minus_one(242, 3)
    assert poly_eval(g, fd35.power_of_pi(-1), fd35) != 0


def test_parity_check_for_k2(spec352, fd35):
    assert build_parity_check(spec352, fd35).degree == 15


def test_parity_check_p5(spec551, fd55):
    h = build_parity_check(spec551, fd55)
    assert h.degree == 15
    _, remainder = poly_divrem(x_power_minus_one(fd55.order, 5), h)
    assert remainder.is_zero


@pytest.mark.parametrize("spec_name,fd_name", [("spec351", "fd35"), ("spec352", "fd35"), ("spec551", "fd55")])
def test_parity_check_ignores_coset_representative(spec_name, fd_name, request):
    spec = request.getfixturevalue(spec_name)
    fd = request.getfixturevalue(fd_name)
    expected = build_parity_check(spec, fd)
    exponents = [1, spec.d1 % fd.order, spec.d2 % fd.order]

    for shift in range(1, fd.m):
        h = PolyOverFp.from_coeffs([1], fd.p)
        for slot, e in enumerate(exponents):
            h = poly_mul(h, minimal_poly(e * fd.p ** (shift * (slot + 1)) % fd.order, fd))
        assert h == expected

    h = PolyOverFp.from_coeffs([1], fd.p)
    for e in exponents:
        h = poly_mul(h, minimal_poly(cyclotomic_coset(e, fd).representative, fd))
    assert h == expected
