import logging
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np

from app.code import CodeSpec, DeltaTriple
from app.errors import ConsistencyError, InvalidParameterError
from app.field import FieldDescriptor

logger = logging.getLogger(__name__)

DeltaLike = Union[DeltaTriple, Sequence]


def _components(delta: DeltaLike) -> Tuple:
    if isinstance(delta, DeltaTriple):
        return delta.as_tuple()
    d0, d1, d2 = delta
    return d0, d1, d2


def f_delta(delta: DeltaLike, x, spec: CodeSpec, fd: FieldDescriptor):
    """f_Delta(x) = Tr(d0 x + d1 x^d1 + d2 x^d2), vectorized over x."""
    d0, d1, d2 = _components(delta)
    value = fd.mul(d0, x)
    value = fd.add(value, fd.mul(d1, fd.pow(x, spec.d1)))
    value = fd.add(value, fd.mul(d2, fd.pow(x, spec.d2)))
    return fd.trace(value)


def quadratic_form(delta: DeltaLike, x, spec: CodeSpec, fd: FieldDescriptor):
    """Q_Delta(x) = Tr(d0 x^2 + d1 x^(p^2k + 1) + d2 x^(p^4k + 1)) = f_Delta(x^2)."""
    return f_delta(delta, fd.mul(x, x), spec, fd)


def l_image(delta: DeltaLike, x, spec: CodeSpec, fd: FieldDescriptor):
    """L_Delta(x) = 2 d0 x + d1 x^(p^2k) + (d1 x)^(p^-2k) + d2 x^(p^4k) + (d2 x)^(p^-4k)."""
    d0, d1, d2 = _components(delta)
    k = spec.k
    value = fd.mul(fd.mul(2 % fd.p, d0), x)
    value = fd.add(value, fd.mul(d1, fd.frobenius(x, 2 * k)))
    value = fd.add(value, fd.frobenius(fd.mul(d1, x), -2 * k))
    value = fd.add(value, fd.mul(d2, fd.frobenius(x, 4 * k)))
    return fd.add(value, fd.frobenius(fd.mul(d2, x), -4 * k))


def h_image(delta: DeltaLike, x, spec: CodeSpec, fd: FieldDescriptor):
    """
    H_Delta(x) = L_Delta(x)^(p^4k), expanded so that no negative Frobenius power appears.

    H(x) = d2^(p^4k) x^(p^8k) + d1^(p^4k) x^(p^6k) + d1^(p^2k) x^(p^2k) + 2 d0^(p^4k) x^(p^4k) + d2 x
    """
    d0, d1, d2 = _components(delta)
    k = spec.k
    frob = fd.frobenius
    value = fd.mul(frob(d2, 4 * k), frob(x, 8 * k))
    value = fd.add(value, fd.mul(frob(d1, 4 * k), frob(x, 6 * k)))
    value = fd.add(value, fd.mul(frob(d1, 2 * k), frob(x, 2 * k)))
    value = fd.add(value, fd.mul(fd.mul(2 % fd.p, frob(d0, 4 * k)), frob(x, 4 * k)))
    return fd.add(value, fd.mul(d2, x))


def batch_rank(mats, p: int):
    """
    Ranks over F_p of a stack of matrices by vectorized Gaussian elimination.

    Args:
        mats: Array of shape (n, rows, cols), or a single (rows, cols) matrix
        p: Prime modulus

    Returns:
        np.ndarray of n ranks, or an int for a single matrix
    """
    a = np.array(mats, dtype=np.int64) % p
    if a.ndim == 2:
        return int(batch_rank(a[None], p)[0])
    n, rows, cols = a.shape
    inverse = np.zeros(p, dtype=np.int64)
    inverse[1:] = [pow(v, -1, p) for v in range(1, p)]
    rank = np.zeros(n, dtype=np.int64)
    row_ids = np.arange(rows)

    for c in range(cols):
        candidates = (a[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has_pivot = candidates.any(axis=1)
        if not has_pivot.any():
            continue
        sel = np.flatnonzero(has_pivot)
        pivot = candidates[sel].argmax(axis=1)
        target = rank[sel]

        pivot_rows = a[sel, pivot].copy()
        a[sel, pivot] = a[sel, target]
        pivot_rows = (pivot_rows * inverse[pivot_rows[:, c]][:, None]) % p
        a[sel, target] = pivot_rows

        factors = a[sel, :, c].copy()
        factors[np.arange(sel.size), target] = 0
        a[sel] = (a[sel] - factors[:, :, None] * pivot_rows[:, None, :]) % p
        rank[sel] += 1
    return rank


@dataclass(frozen=True)
class LinearizedMap:
    """The F_p-linear map x -> H_Delta(x) as an m x m matrix acting on coordinate columns."""

    matrix: np.ndarray
    p: int

    def apply(self, coords) -> np.ndarray:
        return (self.matrix @ np.asarray(coords, dtype=np.int64)) % self.p

    def rank(self) -> int:
        return batch_rank(self.matrix, self.p)

    def nullity(self) -> int:
        return self.matrix.shape[1] - self.rank()


def build_linearized(delta: DeltaLike, spec: CodeSpec, fd: FieldDescriptor) -> LinearizedMap:
    basis = np.array([fd.p ** j for j in range(fd.m)], dtype=np.int64)
    images = h_image(delta, basis, spec, fd)
    # Column j holds the coordinates of H(x^j)
    return LinearizedMap(matrix=fd.digits(images).T.copy(), p=fd.p)


class FormRank(NamedTuple):
    rank: int
    zero_form: bool


def rank_of_form(delta: DeltaLike, spec: CodeSpec, fd: FieldDescriptor) -> FormRank:
    """
    Rank of the quadratic form Q_Delta, i.e. m minus the nullity of H_Delta.

    The zero triple yields rank 0 with the zero_form flag set; it is outside the
    m-4 <= rank <= m guarantee.
    """
    zero = not any(int(v) for v in _components(delta))
    return FormRank(rank=build_linearized(delta, spec, fd).rank(), zero_form=zero)


def radical_size(delta: DeltaLike, spec: CodeSpec, fd: FieldDescriptor) -> int:
    """#{z : Q(x+z) - Q(x) - Q(z) = 0 for all x}, by brute force over the whole field."""
    if fd.q > 3 ** 7:
        raise InvalidParameterError(f"brute-force radical needs q <= 2187, got {fd.q}")
    x = fd.elements()
    qx = np.asarray(quadratic_form(delta, x, spec, fd))
    shifted = qx[fd.add(x[:, None], x[None, :])]
    polar = (shifted - qx[:, None] - qx[None, :]) % fd.p
    return int(np.count_nonzero(~polar.any(axis=0)))


def s_from_zero_count(n0, p: int, q: int):
    """s = (p n0 - q) / (p - 1), exact for scalars and arrays."""
    numerator = p * np.asarray(n0, dtype=np.int64) - q
    if np.any(numerator % (p - 1)):
        raise ConsistencyError(f"p * n0 - q is not divisible by p - 1 (p={p}, q={q})")
    s = numerator // (p - 1)
    return int(s) if np.ndim(s) == 0 else s


def rank_consistent(s, ranks, p: int, m: int, e: int = 1):
    """
    s = 0 when rank/e is odd and |s| = p^(m - rank/2) when rank/e is even.

    Q_Delta is F_{p^e}-linear, so its F_p-rank is e times its rank over F_{p^e}
    and the parity that decides s = 0 is that of rank/e.
    """
    s = np.asarray(s, dtype=np.int64)
    ranks = np.asarray(ranks, dtype=np.int64)
    magnitude = np.power(np.int64(p), m - ranks // 2)
    return np.where((ranks // e) % 2 == 1, s == 0, np.abs(s) == magnitude)


@dataclass(frozen=True)
class SValueReport:
    delta: DeltaTriple
    rank: int
    s: int
    n0: int
    provenance: str = "count"

    def check(self, p: int, m: int, e: int = 1) -> "SValueReport":
        q = p ** m
        if self.n0 >= 0 and p * self.n0 - q != (p - 1) * self.s:
            raise ConsistencyError(f"{self}: s does not match the zero count")
        if not bool(rank_consistent(self.s, self.rank, p, m, e)):
            raise ConsistencyError(f"{self}: s is inconsistent with rank {self.rank}")
        return self


def s_exact(delta: DeltaTriple, spec: CodeSpec, fd: FieldDescriptor, strategy: str = "count") -> SValueReport:
    """
    Exact value of the exponential sum of f_Delta without complex arithmetic.

    Homogeneity f(yx) = y f(x) makes every nonzero fiber of f_Delta equally large,
    so the sum collapses to (p n0 - q) / (p - 1) with n0 the number of zeros.

    Args:
        delta: The triple (d0, d1, d2)
        spec: Code parameters
        fd: Field
        strategy: "count" counts zeros for every Delta; "rank" classifies by rank
            first and counts zeros only when the sum is nonzero

    Returns:
        SValueReport: s, rank and zero count (n0 = -1 when it was not needed)
    """
    delta.check(fd)
    rank = rank_of_form(delta, spec, fd).rank
    if strategy == "rank" and (rank // spec.e) % 2 == 1:
        return SValueReport(delta, rank, 0, -1, provenance="rank").check(fd.p, fd.m, spec.e)
    if strategy not in ("count", "rank"):
        raise InvalidParameterError(f"unknown strategy {strategy!r}")
    n0 = int(np.count_nonzero(np.asarray(f_delta(delta, fd.elements(), spec, fd)) == 0))
    s = s_from_zero_count(n0, fd.p, fd.q)
    return SValueReport(delta, rank, s, n0, provenance=strategy).check(fd.p, fd.m, spec.e)
