import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_div, gf_mul

from app.errors import ConsistencyError, FieldArithmeticError, InvalidParameterError
from app.field import FieldDescriptor

if TYPE_CHECKING:
    from app.code import CodeSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PolyOverFp:
    """
    Polynomial over F_p, coefficients lowest degree first, no trailing zeros.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    coeffs: Tuple[int, ...]
    p: int

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], p: int) -> "PolyOverFp":
        c = [int(v) % p for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c), p)

    @classmethod
    def from_sympy(cls, desc: Sequence[int], p: int) -> "PolyOverFp":
        return cls.from_coeffs(list(reversed([int(v) for v in desc])), p)

    def to_sympy(self) -> List[int]:
        return list(reversed(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def to_json(self) -> List[int]:
        return list(self.coeffs)


@dataclass(frozen=True)
class CyclotomicCoset:
    representative: int
    members: Tuple[int, ...]
    modulus: int

    def __len__(self) -> int:
        return len(self.members)


def x_power_minus_one(n: int, p: int) -> PolyOverFp:
    """x^n - 1 over F_p."""
    return PolyOverFp.from_coeffs([p - 1] + [0] * (n - 1) + [1], p)


def poly_mul(a: PolyOverFp, b: PolyOverFp) -> PolyOverFp:
    return PolyOverFp.from_sympy(gf_mul(a.to_sympy(), b.to_sympy(), a.p, ZZ), a.p)


def poly_divrem(a: PolyOverFp, b: PolyOverFp) -> Tuple[PolyOverFp, PolyOverFp]:
    """
    Euclidean division over F_p.

    Returns:
        Tuple[PolyOverFp, PolyOverFp]: quotient and remainder
    """
    if b.is_zero:
        raise FieldArithmeticError("division by the zero polynomial")
    quotient, remainder = gf_div(a.to_sympy(), b.to_sympy(), a.p, ZZ)
    return PolyOverFp.from_sympy(quotient, a.p), PolyOverFp.from_sympy(remainder, a.p)


def poly_eval(f: PolyOverFp, x, fd: FieldDescriptor):
    """Evaluate f at an extension-field point (or array of points) by Horner's rule."""
    acc = fd.mul(x, 0)
    for c in reversed(f.coeffs):
        acc = fd.add(fd.mul(acc, x), c)
    return acc


def cyclotomic_coset(i: int, fd: FieldDescriptor) -> CyclotomicCoset:
    """
    p-cyclotomic coset of i modulo q-1.

    Args:
        i: Exponent, 0 <= i < q-1
        fd: Field descriptor supplying p and q

    Returns:
        CyclotomicCoset: Sorted members with the smallest as representative
    """
    n = fd.order
    if not 0 <= i < n:
        raise InvalidParameterError(f"coset index {i} outside [0, {n})")
    members = []
    j = i
    while j not in members:
        members.append(j)
        j = (j * fd.p) % n
    members.sort()
    return CyclotomicCoset(representative=members[0], members=tuple(members), modulus=n)


def cyclotomic_cosets(fd: FieldDescriptor) -> List[CyclotomicCoset]:
    """A full transversal of the cosets modulo q-1, ordered by representative."""
    seen = set()
    cosets = []
    for i in range(fd.order):
        if i not in seen:
            coset = cyclotomic_coset(i, fd)
            seen.update(coset.members)
            cosets.append(coset)
    return cosets


def minimal_poly(i: int, fd: FieldDescriptor) -> PolyOverFp:
    """
    Minimal polynomial of pi^{-i} over F_p.

    Computed as the product of (x - pi^{-j}) over the coset of i in extension-field
    arithmetic; every coefficient must collapse into F_p.
    """
    coset = cyclotomic_coset(i, fd)
    coeffs = [1]
    for j in coset.members:
        root = fd.power_of_pi(-j)
        nxt = [0] * (len(coeffs) + 1)
        for t, c in enumerate(coeffs):
            nxt[t + 1] = fd.add(nxt[t + 1], c)
            nxt[t] = fd.sub(nxt[t], fd.mul(root, c))
        coeffs = nxt
    if any(c >= fd.p for c in coeffs):
        raise ConsistencyError(f"minimal polynomial of pi^-{i} has a coefficient outside F_{fd.p}")
    return PolyOverFp.from_coeffs(coeffs, fd.p)


def build_parity_check(spec: "CodeSpec", fd: FieldDescriptor) -> PolyOverFp:
    """
    h(x) = h_1(x) h_{d1}(x) h_{d2}(x), the parity-check polynomial of the code.

    Raises:
        InvalidParameterError: The three minimal polynomials are not pairwise distinct of degree m
    """
    exponents = [1, spec.d1 % fd.order, spec.d2 % fd.order]
    cosets = [cyclotomic_coset(e, fd) for e in exponents]
    if any(len(c) != fd.m for c in cosets):
        sizes = [len(c) for c in cosets]
        raise InvalidParameterError(f"minimal polynomials must all have degree {fd.m}, got {sizes}")
    if len({c.representative for c in cosets}) != 3:
        raise InvalidParameterError("minimal polynomials h_1, h_d1, h_d2 are not pairwise distinct")

    h = PolyOverFp.from_coeffs([1], fd.p)
    for e in exponents:
        h = poly_mul(h, minimal_poly(e, fd))

    _, remainder = poly_divrem(x_power_minus_one(fd.order, fd.p), h)
    if not remainder.is_zero:
        raise ConsistencyError("parity-check polynomial does not divide x^(q-1) - 1")
    logger.debug(f"Parity-check polynomial of degree {h.degree} for {spec}")
    return h


def generator_poly(h: PolyOverFp, fd: FieldDescriptor) -> PolyOverFp:
    """g(x) = (x^(q-1) - 1) / h(x)."""
    quotient, remainder = poly_divrem(x_power_minus_one(fd.order, fd.p), h)
    if not remainder.is_zero:
        raise InvalidParameterError("h(x) does not divide x^(q-1) - 1")
    return quotient
