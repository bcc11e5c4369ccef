import logging
import os
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_pow_mod

from app.errors import ConsistencyError, FieldArithmeticError, InvalidParameterError

logger = logging.getLogger(__name__)

# Largest q for which log/antilog and trace tables are precomputed
TABLE_LIMIT = int(os.getenv("CWDW_TABLE_LIMIT", str(2 ** 24)))

# Batches are numpy int64 arrays, so q must stay below this bound
NATIVE_LIMIT = 2 ** 63


class ResidueClass(str, Enum):
    ZERO = "zero"
    SQUARE = "square"
    NONSQUARE = "nonsquare"


# Integer codes used by the vectorized residue classification
RESIDUE_CODES = {0: ResidueClass.ZERO, 1: ResidueClass.SQUARE, 2: ResidueClass.NONSQUARE}


def _is_scalar(x: Any) -> bool:
    return np.ndim(x) == 0


def _wrap(result: np.ndarray, scalar: bool):
    return int(result) if scalar else result


def is_primitive_modulus(modulus: Sequence[int], p: int) -> bool:
    """
    Check that a monic polynomial over F_p is irreducible and that x is primitive modulo it.

    Args:
        modulus: Coefficients, lowest degree first, leading coefficient 1
        p: Characteristic

    Returns:
        bool: True if the residue class of x generates the multiplicative group
    """
    m = len(modulus) - 1
    desc = [int(c) % p for c in reversed(modulus)]
    if not gf_irreducible_p(desc, p, ZZ):
        return False

    order = p ** m - 1
    x = [1, 0]
    if gf_pow_mod(x, order, desc, p, ZZ) != [1]:
        return False
    for r in factorint(order):
        if gf_pow_mod(x, order // r, desc, p, ZZ) == [1]:
            return False
    return True


def primitive_moduli(p: int, m: int) -> Iterator[Tuple[int, ...]]:
    """
    Yield monic degree-m primitive polynomials over F_p in lexicographic order.

    The low coefficients (c_0, ..., c_{m-1}) are enumerated as the base-p digits of
    0, 1, 2, ... so the first hit is reproducible on every run.
    """
    for c in range(p ** m):
        low = [(c // p ** j) % p for j in range(m)]
        modulus = tuple(low + [1])
        if is_primitive_modulus(modulus, p):
            yield modulus


class FieldDescriptor:
    """
    A concrete realization of GF(p^m) in the polynomial basis 1, x, ..., x^{m-1}.

    Elements are packed integers: the coefficient vector (c_0, ..., c_{m-1}) is stored
    as sum(c_j * p**j), so F_p sits inside as the integers below p. Every operation
    accepts a Python int or a numpy integer array and answers in kind.
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int], use_tables: Optional[bool] = None):
        """
        Initialize the field from an already validated primitive modulus.

        Args:
            p: Odd prime characteristic
            m: Extension degree
            modulus: Monic degree-m polynomial, lowest degree first
            use_tables: Force table use on or off (default: q <= TABLE_LIMIT)
        """
        self.p = p
        self.m = m
        self.q = p ** m
        self.order = self.q - 1
        self.modulus = tuple(int(c) for c in modulus)
        self._powers = [p ** j for j in range(m)]
        self._powers_array = np.array(self._powers, dtype=np.int64)
        self.pi = self._mul_x(1)

        self.tables = self.q <= TABLE_LIMIT if use_tables is None else use_tables
        self._exp = None
        self._log = None
        self._trace_table = None
        if self.tables:
            self._build_tables()

        self._trace_basis = np.array(
            [self._trace_poly(pj) for pj in self._powers], dtype=np.int64
        )
        if self.tables:
            elements = np.arange(self.q, dtype=np.int64)
            table = np.zeros(self.q, dtype=np.int64)
            for j, pj in enumerate(self._powers):
                table += ((elements // pj) % p) * int(self._trace_basis[j])
            self._trace_table = table % p

    def __repr__(self) -> str:
        return f"FieldDescriptor(p={self.p}, m={self.m}, modulus={list(self.modulus)})"

    # Polynomial-basis arithmetic (table free)

    def coeffs(self, x: int) -> List[int]:
        """Coefficient vector of x, lowest degree first, length exactly m."""
        x = int(x)
        return [(x // pj) % self.p for pj in self._powers]

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.m:
            raise InvalidParameterError(f"expected {self.m} coefficients, got {len(coeffs)}")
        return sum((int(c) % self.p) * pj for c, pj in zip(coeffs, self._powers))

    def _reduce(self, coeffs: List[int]) -> int:
        # Reduce a coefficient list of any length modulo the monic modulus
        c = [v % self.p for v in coeffs]
        for deg in range(len(c) - 1, self.m - 1, -1):
            top = c[deg]
            if top:
                shift = deg - self.m
                for j in range(self.m):
                    c[shift + j] = (c[shift + j] - top * self.modulus[j]) % self.p
                c[deg] = 0
        c = (c + [0] * self.m)[: self.m]
        return self.from_coeffs(c)

    def _mul_x(self, a: int) -> int:
        return self._reduce([0] + self.coeffs(a))

    def mul_polynomial_basis(self, a: int, b: int) -> int:
        """Schoolbook product of two elements reduced modulo the field modulus."""
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.m - 1)
        for i, u in enumerate(ca):
            if u:
                for j, v in enumerate(cb):
                    prod[i + j] += u * v
        return self._reduce(prod)

    def pow_polynomial_basis(self, a: int, e: int) -> int:
        if e < 0:
            raise InvalidParameterError("negative exponents need field_inv first")
        result, base = 1, int(a)
        while e:
            if e & 1:
                result = self.mul_polynomial_basis(result, base)
            base = self.mul_polynomial_basis(base, base)
            e >>= 1
        return result

    def inv_polynomial_basis(self, a: int) -> int:
        if int(a) == 0:
            raise FieldArithmeticError("inversion of zero")
        return self.pow_polynomial_basis(a, self.order - 1)

    def _add_scalar(self, a: int, b: int) -> int:
        return self.from_coeffs([u + v for u, v in zip(self.coeffs(a), self.coeffs(b))])

    def _trace_poly(self, x: int) -> int:
        total = 0
        for j in range(self.m):
            total = self._add_scalar(total, self.pow_polynomial_basis(x, self.p ** j))
        if total >= self.p:
            raise ConsistencyError(f"trace of {x} did not land in F_{self.p}")
        return total

    def _build_tables(self) -> None:
        exp = np.empty(self.order, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        v = 1
        for i in range(self.order):
            if i and v == 1:
                raise ConsistencyError(f"pi has order {i}, expected {self.order}")
            exp[i] = v
            log[v] = i
            v = self._mul_x(v)
        if v != 1:
            raise ConsistencyError("pi^(q-1) != 1")
        self._exp = exp
        self._log = log

    # Vectorized arithmetic

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def digits(self, a) -> np.ndarray:
        """Coefficient arrays with a trailing axis of length m."""
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._powers_array) % self.p

    def from_digits(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.int64) % self.p
        return (d * self._powers_array).sum(axis=-1)

    def add(self, a, b):
        scalar = _is_scalar(a) and _is_scalar(b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pj in self._powers:
            out += ((a // pj + b // pj) % self.p) * pj
        return _wrap(out, scalar)

    def neg(self, a):
        scalar = _is_scalar(a)
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        for pj in self._powers:
            out += ((-(a // pj)) % self.p) * pj
        return _wrap(out, scalar)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        scalar = _is_scalar(a) and _is_scalar(b)
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.tables:
            out = self._exp[(self._log[a] + self._log[b]) % self.order]
            out = np.where((a == 0) | (b == 0), 0, out)
        else:
            out = np.frompyfunc(self.mul_polynomial_basis, 2, 1)(a, b).astype(np.int64)
        return _wrap(out, scalar)

    def inv(self, a):
        scalar = _is_scalar(a)
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldArithmeticError("inversion of zero")
        if self.tables:
            out = self._exp[(-self._log[a]) % self.order]
        else:
            out = np.frompyfunc(self.inv_polynomial_basis, 1, 1)(a).astype(np.int64)
        return _wrap(out, scalar)

    def pow(self, a, e: int):
        scalar = _is_scalar(a)
        a = np.asarray(a, dtype=np.int64)
        e = int(e)
        if e < 0:
            return _wrap(np.asarray(self.pow(self.inv(a), -e)), scalar)
        if e == 0:
            return _wrap(np.ones(a.shape, dtype=np.int64), scalar)
        if self.tables:
            out = self._exp[(self._log[a] * (e % self.order)) % self.order]
            out = np.where(a == 0, 0, out)
        else:
            out = np.frompyfunc(lambda v: self.pow_polynomial_basis(v, e), 1, 1)(a).astype(np.int64)
        return _wrap(out, scalar)

    def power_of_pi(self, i):
        """pi**i for an integer or integer array of exponents."""
        scalar = _is_scalar(i)
        i = np.asarray(i, dtype=np.int64) % self.order
        if self.tables:
            out = self._exp[i]
        else:
            out = np.frompyfunc(lambda v: self.pow_polynomial_basis(self.pi, v), 1, 1)(i).astype(np.int64)
        return _wrap(out, scalar)

    def frobenius(self, a, j: int):
        return self.pow(a, self.p ** (int(j) % self.m))

    def trace(self, a):
        scalar = _is_scalar(a)
        a = np.asarray(a, dtype=np.int64)
        if self.tables:
            out = self._trace_table[a]
        else:
            out = (self.digits(a) * self._trace_basis).sum(axis=-1) % self.p
        return _wrap(out, scalar)

    def trace_basis(self) -> np.ndarray:
        """Tr(x^j) for the polynomial basis, j = 0..m-1."""
        return self._trace_basis.copy()

    def residue_codes(self, a) -> np.ndarray:
        """0 for zero, 1 for a nonzero square, 2 for a nonsquare (Euler criterion)."""
        a = np.asarray(a, dtype=np.int64)
        if self.tables:
            nonzero_class = np.where(self._log[a] % 2 == 0, 1, 2)
        else:
            euler = np.asarray(self.pow(a, self.order // 2))
            nonzero_class = np.where(euler == 1, 1, 2)
        return np.where(a == 0, 0, nonzero_class)

    def residue_class(self, a: int) -> ResidueClass:
        return RESIDUE_CODES[int(self.residue_codes(a))]

    def describe(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "m": self.m,
            "q": self.q,
            "modulus": list(self.modulus),
            "pi": self.coeffs(self.pi),
            "tables": self.tables,
        }


def _validate_field_parameters(p: int, m: int) -> None:
    if not isinstance(p, int) or p == 2 or not isprime(p):
        raise InvalidParameterError("p must be an odd prime")
    if not isinstance(m, int) or m < 1:
        raise InvalidParameterError("m must be a positive integer")
    if p ** m >= NATIVE_LIMIT:
        raise InvalidParameterError(f"q = {p}^{m} does not fit a native 64-bit integer")


@lru_cache(maxsize=16)
def _build_field(p: int, m: int, modulus: Optional[Tuple[int, ...]], use_tables: Optional[bool]) -> FieldDescriptor:
    if modulus is None:
        modulus = next(primitive_moduli(p, m))
    else:
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise InvalidParameterError(f"modulus must be monic of degree {m}")
        if any(not 0 <= c < p for c in modulus):
            raise InvalidParameterError(f"modulus coefficients must lie in [0, {p})")
        if not is_primitive_modulus(modulus, p):
            raise InvalidParameterError(f"modulus {list(modulus)} is not primitive over F_{p}")
    fd = FieldDescriptor(p, m, modulus, use_tables=use_tables)
    logger.info(f"Constructed GF({p}^{m}) with modulus {list(modulus)}, tables={fd.tables}")
    return fd


def construct_field(p: int, m: int, modulus: Optional[Sequence[int]] = None,
                    use_tables: Optional[bool] = None) -> FieldDescriptor:
    """
    Build GF(p^m) with a deterministic primitive modulus.

    Args:
        p: Odd prime
        m: Extension degree, m >= 1
        modulus: Optional explicit primitive modulus, lowest degree first
        use_tables: Force log/antilog tables on or off

    Returns:
        FieldDescriptor: Field whose generator pi is the residue class of x
    """
    _validate_field_parameters(p, m)
    key = tuple(int(c) for c in modulus) if modulus is not None else None
    return _build_field(p, m, key, use_tables)


def field_add(a, b, fd: FieldDescriptor):
    return fd.add(a, b)


def field_neg(a, fd: FieldDescriptor):
    return fd.neg(a)


def field_mul(a, b, fd: FieldDescriptor):
    return fd.mul(a, b)


def field_inv(a, fd: FieldDescriptor):
    return fd.inv(a)


def field_pow(a, e: int, fd: FieldDescriptor):
    return fd.pow(a, e)


def trace(x, fd: FieldDescriptor):
    return fd.trace(x)


def frobenius(x, j: int, fd: FieldDescriptor):
    return fd.frobenius(x, j)


def residue_class(x: int, fd: FieldDescriptor) -> ResidueClass:
    return fd.residue_class(x)
