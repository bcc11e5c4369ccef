import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

from sympy import Integer, Matrix, isprime

from app.errors import ConsistencyError, InvalidParameterError

logger = logging.getLogger(__name__)


class TableKind(str, Enum):
    VALUES = "values"
    WEIGHTS = "weights"
    WEIGHTS_GENERAL = "weights-general"


# Published weight enumerators, keyed by (p, m, k)
REFERENCE_ENUMERATORS: Dict[Tuple[int, int, int], Dict[int, int]] = {
    (3, 5, 1): {0: 1, 108: 14520, 144: 2548260, 162: 9740258, 180: 2038608, 216: 7260},
    (3, 7, 2): {0: 1, 1296: 8951670, 1404: 1732767876, 1458: 7102473578, 1512: 1608998742, 1620: 7161336},
    (5, 5, 1): {0: 1, 2000: 1218360, 2400: 3147430000, 2500: 24462797524, 2600: 2905320000, 3000: 812240},
}


@dataclass(frozen=True)
class FrequencyTable:
    """
    A closed-form distribution: rows of (label, frequency) in published row order.

    Labels are exponential-sum values for the value table and Hamming weights for the
    weight tables. Everything is a Python int.
    """

    kind: TableKind
    p: int
    m: int
    e: int
    rows: Tuple[Tuple[int, int], ...]

    def as_dict(self) -> Dict[int, int]:
        return {label: freq for label, freq in self.rows}

    def sorted_rows(self) -> List[Tuple[int, int]]:
        return sorted(self.rows)

    def total(self) -> int:
        return sum(freq for _, freq in self.rows)

    def nonzero_total(self) -> int:
        """Sum of frequencies without the zero-codeword row."""
        zero_label = self.p ** self.m if self.kind == TableKind.VALUES else 0
        return sum(freq for label, freq in self.rows if label != zero_label)

    def support(self) -> List[int]:
        return sorted(label for label, _ in self.rows)


def _exact_div(numerator: int, denominator: int, what: str) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise ConsistencyError(f"non-exact division in {what}: {numerator} / {denominator}")
    return quotient


def _check_regime(p: int, m: int, e: int) -> None:
    if p == 2 or not isprime(p):
        raise InvalidParameterError("p must be an odd prime")
    if e < 1 or m % e:
        raise InvalidParameterError(f"e = {e} must be a positive divisor of m = {m}")
    ratio = m // e
    if ratio % 2 == 0 or ratio < 5:
        raise InvalidParameterError(f"m/e = {ratio} must be odd and at least 5")


def _frequencies(p: int, m: int, e: int) -> Tuple[int, int, int, int, int]:
    # (zero, n_{1,0}, n_{1,1}, n_{2,0}, n_{2,1})
    _check_regime(p, m, e)
    denominator = 2 * (p ** (2 * e) - 1)
    zero = (p ** m - 1) * (
        p ** (2 * m) - p ** (2 * m - e) + p ** (2 * m - 4 * e) + p ** m - p ** (m - e) - p ** (m - 3 * e) + 1
    )
    common = (
        p ** (2 * m) - p ** (2 * m - 2 * e) - p ** (2 * m - 3 * e) + p ** (m - 2 * e) + p ** (m - 3 * e) - 1
    )
    small = p ** ((m + 3 * e) // 2)
    n10 = _exact_div((p ** (m + e) + small) * common, denominator, "n_{1,0}")
    n11 = _exact_div((p ** (m + e) - small) * common, denominator, "n_{1,1}")
    tail = (p ** (m - e) - 1) * (p ** m - 1)
    half = p ** ((m - 3 * e) // 2)
    n20 = _exact_div((p ** (m - 3 * e) + half) * tail, denominator, "n_{2,0}")
    n21 = _exact_div((p ** (m - 3 * e) - half) * tail, denominator, "n_{2,1}")
    for name, value in (("zero", zero), ("n10", n10), ("n11", n11), ("n20", n20), ("n21", n21)):
        if value < 0:
            raise ConsistencyError(f"negative frequency {name} = {value} for (p={p}, m={m}, e={e})")
    return zero, n10, n11, n20, n21


def weight_for_value(s: int, p: int, m: int) -> int:
    """
    Hamming weight of a codeword whose exponential sum is s.

    w = (p-1) p^(m-1) - (p-1) s / p
    """
    if s % p:
        raise InvalidParameterError(f"S = {s} is not divisible by p = {p}")
    w = (p - 1) * p ** (m - 1) - (p - 1) * (s // p)
    if not 0 <= w <= p ** m - 1:
        raise InvalidParameterError(f"S = {s} maps to weight {w} outside [0, {p ** m - 1}]")
    return w


def table1(p: int, m: int, e: int = 1) -> FrequencyTable:
    """Value distribution of the exponential sum over all Delta, published row order."""
    zero, n10, n11, n20, n21 = _frequencies(p, m, e)
    low = p ** ((m + e) // 2)
    high = p ** ((m + 3 * e) // 2)
    rows = ((p ** m, 1), (0, zero), (low, n10), (-low, n11), (high, n20), (-high, n21))
    table = FrequencyTable(TableKind.VALUES, p, m, e, rows)
    if table.total() != p ** (3 * m):
        raise ConsistencyError(f"value table for (p={p}, m={m}, e={e}) does not sum to p^3m")
    return table


def _weight_table(p: int, m: int, e: int, kind: TableKind) -> FrequencyTable:
    rows = tuple((weight_for_value(s, p, m), freq) for s, freq in table1(p, m, e).rows)
    return FrequencyTable(kind, p, m, e, rows)


def table2(p: int, m: int) -> FrequencyTable:
    """Weight distribution for gcd(m, k) = 1."""
    return _weight_table(p, m, 1, TableKind.WEIGHTS)


def table3(p: int, m: int, e: int) -> FrequencyTable:
    """Weight distribution for gcd(m, k) = e with m/e odd."""
    return _weight_table(p, m, e, TableKind.WEIGHTS_GENERAL)


def minimum_distance(p: int, m: int, e: int = 1) -> int:
    _check_regime(p, m, e)
    return (p - 1) * (p ** (m - 1) - p ** ((m + 3 * e - 2) // 2))


def expected_moments(p: int, m: int) -> Tuple[int, int, int, int]:
    """Power moments sum_Delta S^t for t = 1..4."""
    q = p ** m
    n3 = q * p + q - p
    return p ** (3 * m), p ** (4 * m), p ** (3 * m) * n3, p ** (4 * m) * n3


def moment_sums(table: FrequencyTable) -> Tuple[int, int, int, int]:
    if table.kind != TableKind.VALUES:
        raise InvalidParameterError("moments are defined on the value table")
    return tuple(sum(label ** t * freq for label, freq in table.rows) for t in range(1, 5))


def solve_frequency_system(p: int, m: int) -> Tuple[int, int, int, int]:
    """
    Solve the four moment equations for (n_{1,0}, n_{1,1}, n_{2,0}, n_{2,1}) exactly.

    Returns:
        Tuple[int, int, int, int]: The four frequencies as Python ints
    """
    _check_regime(p, m, 1)
    a = Integer(p) ** ((m + 1) // 2)
    b = Integer(p) ** ((m + 3) // 2)
    system = Matrix([
        [a, -a, b, -b],
        [a ** 2, a ** 2, b ** 2, b ** 2],
        [a ** 3, -a ** 3, b ** 3, -b ** 3],
        [a ** 4, a ** 4, b ** 4, b ** 4],
    ])
    if system.det() == 0:
        raise ConsistencyError(f"singular frequency system for (p={p}, m={m})")
    m1, m2, m3, m4 = expected_moments(p, m)
    rhs = Matrix([m1 - p ** m, m2 - p ** (2 * m), m3 - p ** (3 * m), m4 - p ** (4 * m)])
    solution = system.LUsolve(rhs)
    values = []
    for v in solution:
        if not v.is_integer or v < 0:
            raise ConsistencyError(f"frequency system gave a non-count solution {v}")
        values.append(int(v))
    return tuple(values)


def enumerator_string(table: FrequencyTable) -> str:
    """Weight enumerator in the form 1+14520z^108+..."""
    if table.kind == TableKind.VALUES:
        raise InvalidParameterError("enumerator strings are defined on weight tables")
    terms = []
    for weight, freq in table.sorted_rows():
        terms.append(str(freq) if weight == 0 else f"{freq}z^{weight}")
    return "+".join(terms)
