import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.code import DEFAULT_BUDGET, CodeSpec
from app.errors import InvalidParameterError
from app.expsum import check_budget
from app.field import FieldDescriptor, ResidueClass
from app.reports import CountReport, histogram_entries

logger = logging.getLogger(__name__)

# Rows of the (x, y) grid handled per vectorized step
ROW_CHUNK = 256

CASE_LABELS = {
    1: "x square, y nonsquare or zero",
    2: "y square, x nonsquare or zero",
    3: "x and y squares or zero",
    4: "x and y nonsquares or zero",
}

_ZERO, _SQUARE, _NONSQUARE = 0, 1, 2


def _render(histogram: Dict[int, int]) -> str:
    return ",".join(f"{k}:{v}" for k, v in sorted(histogram.items()))


def _report(lemma: str, spec: CodeSpec, computed, predicted, hard: bool = True, message: str = "", holds: bool = True,
            histogram: Optional[Dict[int, int]] = None, predicted_histogram: Optional[Dict[int, int]] = None,
            **details) -> CountReport:
    match = computed == predicted and holds
    report = CountReport(
        lemma=lemma,
        spec=spec.summary(),
        computed=_render(computed) if isinstance(computed, dict) else str(computed),
        predicted=_render(predicted) if isinstance(predicted, dict) else str(predicted),
        match=match,
        hard=hard,
        message=message,
        histogram=histogram_entries(histogram) if histogram is not None else None,
        predicted_histogram=histogram_entries(predicted_histogram) if predicted_histogram is not None else None,
        details=details,
    )
    if match:
        logger.info(f"{lemma} for {spec}: {report.computed} as predicted")
    elif hard:
        logger.error(f"{lemma} for {spec}: computed {report.computed}, predicted {report.predicted}")
    else:
        logger.warning(f"{lemma} for {spec}: computed {report.computed}, predicted {report.predicted} (reported only)")
    return report


@lru_cache(maxsize=8)
def _power_tables(spec: CodeSpec, fd: FieldDescriptor) -> Tuple[np.ndarray, np.ndarray]:
    x = fd.elements()
    return np.asarray(fd.pow(x, spec.d1)), np.asarray(fd.pow(x, spec.d2))


def _pair_rows(fd: FieldDescriptor):
    """Chunks of the full (x, y) grid as broadcastable index arrays."""
    y = fd.elements()[None, :]
    for lo in range(0, fd.q, ROW_CHUNK):
        x = np.arange(lo, min(fd.q, lo + ROW_CHUNK), dtype=np.int64)[:, None]
        yield x, y


def count_n2(spec: CodeSpec, fd: FieldDescriptor) -> CountReport:
    """Solutions of x + y = 0, x^d1 + y^d1 = 0, x^d2 + y^d2 = 0."""
    p1, p2 = _power_tables(spec, fd)
    x = fd.elements()
    y = np.asarray(fd.neg(x))
    ok = (fd.add(p1[x], p1[y]) == 0) & (fd.add(p2[x], p2[y]) == 0)
    return _report("N2", spec, int(np.count_nonzero(ok)), fd.q)


def reduced_n3_solutions(spec: CodeSpec, fd: FieldDescriptor) -> List[int]:
    """The x with 1 + x^d = (1 + x)^d for both d1 and d2."""
    p1, p2 = _power_tables(spec, fd)
    x = fd.elements()
    shifted = np.asarray(fd.add(x, 1))
    ok = (fd.add(1, p1) == p1[shifted]) & (fd.add(1, p2) == p2[shifted])
    return [int(v) for v in x[ok]]


def count_n3(spec: CodeSpec, fd: FieldDescriptor, budget: int = DEFAULT_BUDGET) -> CountReport:
    """Solutions of x + y + u = 0 with the two power equations, brute force over (x, y)."""
    check_budget(fd.q ** 2, budget, f"N3 count for {spec}")
    p1, p2 = _power_tables(spec, fd)
    total = 0
    for x, y in _pair_rows(fd):
        u = fd.neg(fd.add(x, y))
        ok = (fd.add(fd.add(p1[x], p1[y]), p1[u]) == 0) & (fd.add(fd.add(p2[x], p2[y]), p2[u]) == 0)
        total += int(np.count_nonzero(ok))
    reduced = reduced_n3_solutions(spec, fd)
    return _report("N3", spec, total, fd.q * fd.p + fd.q - fd.p, holds=reduced == list(range(fd.p)),
                   reduced_solutions=reduced, reduced_in_prime_field=reduced == list(range(fd.p)))


def _n4_buckets(spec: CodeSpec, fd: FieldDescriptor) -> Tuple[np.ndarray, np.ndarray]:
    # Keys (a q + b) q + c for a = x + y, b = x^d1 + y^d1, c = x^d2 + y^d2
    p1, p2 = _power_tables(spec, fd)
    q = fd.q
    keys = []
    for x, y in _pair_rows(fd):
        a = fd.add(x, y)
        b = fd.add(p1[x], p1[y])
        c = fd.add(p2[x], p2[y])
        keys.append(((a * q + b) * q + c).ravel())
    return np.unique(np.concatenate(keys), return_counts=True)


def count_n4(spec: CodeSpec, fd: FieldDescriptor, budget: int = DEFAULT_BUDGET) -> CountReport:
    """
    Sum of squared bucket sizes of all (x, y) pairs keyed by their three power sums.

    Also splits the sum by the cases a = 0 and a != 0, and checks that no bucket
    with a != 0 has b = 0 or c = 0.
    """
    check_budget(fd.q ** 2, budget, f"N4 count for {spec}")
    q, p = fd.q, fd.p
    keys, sizes = _n4_buckets(spec, fd)
    sizes = sizes.astype(object)
    a, rest = np.divmod(keys, q * q)
    b, c = np.divmod(rest, q)
    squares = sizes * sizes
    zero_a = int(squares[a == 0].sum())
    nonzero_a = int(squares[a != 0].sum())
    degenerate = int(np.count_nonzero((a != 0) & ((b == 0) | (c == 0))))
    decomposed = zero_a == q * q and nonzero_a == q * (q * p - p) and degenerate == 0
    return _report("N4", spec, zero_a + nonzero_a, q * (q * p + q - p), holds=decomposed,
                   message="" if decomposed else "case decomposition does not reassemble",
                   pairs=int(sizes.sum()), zero_sum_part=str(zero_a), nonzero_sum_part=str(nonzero_a),
                   degenerate_buckets=degenerate, decomposition_holds=decomposed)


@dataclass
class UnitSystem:
    """Solutions (x, 1 - x) of the unit system keyed by (b, c)."""

    q: int
    x: np.ndarray
    y: np.ndarray
    keys: np.ndarray

    @classmethod
    def build(cls, spec: CodeSpec, fd: FieldDescriptor) -> "UnitSystem":
        p1, p2 = _power_tables(spec, fd)
        x = fd.elements()
        y = np.asarray(fd.sub(1, x))
        b = np.asarray(fd.add(p1[x], p1[y]))
        c = np.asarray(fd.add(p2[x], p2[y]))
        return cls(q=fd.q, x=x, y=y, keys=b * fd.q + c)

    @property
    def unit_key(self) -> int:
        return self.q + 1

    def sizes(self, mask: Optional[np.ndarray] = None) -> Dict[int, int]:
        keys = self.keys if mask is None else self.keys[mask]
        labels, counts = np.unique(keys, return_counts=True)
        return {int(k): int(n) for k, n in zip(labels, counts)}

    def histogram(self, sizes: Dict[int, int], include_unit: bool = True) -> Dict[int, int]:
        """Bucket-size histogram over (b, c) in (F_q^*)^2, empty buckets included."""
        q = self.q
        histogram = Counter()
        for key, n in sizes.items():
            b, c = divmod(key, q)
            if b and c and (include_unit or key != self.unit_key):
                histogram[n] += 1
        pairs = (q - 1) ** 2 - (0 if include_unit else 1)
        empty = pairs - sum(histogram.values())
        if empty:
            histogram[0] += empty
        return dict(histogram)


@lru_cache(maxsize=8)
def unit_system(spec: CodeSpec, fd: FieldDescriptor) -> UnitSystem:
    return UnitSystem.build(spec, fd)


def unit_system_histogram(spec: CodeSpec, fd: FieldDescriptor) -> CountReport:
    """Distribution of N(b, c) over (F_q^*)^2 against p, p+1 and p-1 multiplicities."""
    q, p = fd.q, fd.p
    system = unit_system(spec, fd)
    sizes = system.sizes()
    computed = system.histogram(sizes)
    plus, minus = (q - p) // (2 * (p + 1)), (q - p) // (2 * (p - 1))
    predicted = {p: 1, p + 1: plus, p - 1: minus, 0: (q - 1) ** 2 - 1 - plus - minus}

    keys = system.keys
    degenerate = int(np.count_nonzero((keys // q == 0) | (keys % q == 0)))
    unit_members = sorted(int(v) for v in system.x[keys == system.unit_key])
    hard = spec.e == 1
    ok = degenerate == 0 and unit_members == list(range(p)) and sizes.get(system.unit_key) == p
    return _report("unit-system", spec, computed, predicted, hard=hard, holds=ok,
                   message="" if ok else "degenerate buckets or (1,1) bucket outside F_p",
                   histogram=computed, predicted_histogram=predicted,
                   unit_count=sizes.get(system.unit_key, 0), unit_members=unit_members,
                   degenerate_solutions=degenerate)


def scaling_reduction_check(spec: CodeSpec, fd: FieldDescriptor, samples: int = 100,
                            seed: Optional[int] = 0) -> CountReport:
    """
    For a != 0 the bucket (a, b, c) holds as many pairs as the unit bucket (b / a^d1, c / a^d2).

    Half the samples are drawn from occupied buckets, half uniformly; one extra
    family checks that b = 0 or c = 0 never occurs for a != 0.
    """
    if samples < 1:
        raise InvalidParameterError(f"sample size must be positive, got {samples}")
    p1, p2 = _power_tables(spec, fd)
    rng = np.random.default_rng(seed)
    x = fd.elements()
    unit = unit_system(spec, fd).sizes()
    agree = 0
    degenerate = 0
    for i in range(samples):
        a = int(rng.integers(1, fd.q))
        y = np.asarray(fd.sub(a, x))
        b_all = np.asarray(fd.add(p1[x], p1[y]))
        c_all = np.asarray(fd.add(p2[x], p2[y]))
        degenerate += int(np.count_nonzero((b_all == 0) | (c_all == 0)))
        if i % 2 == 0:
            x0 = int(rng.integers(0, fd.q))
            b, c = int(b_all[x0]), int(c_all[x0])
        else:
            b, c = (int(v) for v in rng.integers(1, fd.q, size=2))
        bucket = int(np.count_nonzero((b_all == b) & (c_all == c)))
        rb = fd.mul(b, fd.inv(fd.pow(a, spec.d1)))
        rc = fd.mul(c, fd.inv(fd.pow(a, spec.d2)))
        agree += bucket == unit.get(rb * fd.q + rc, 0)
    return _report("scaling", spec, agree, samples, holds=degenerate == 0,
                   message=f"{degenerate} solutions with b = 0 or c = 0",
                   seed=seed, degenerate_solutions=degenerate)


def _case_mask(case: int, rx: np.ndarray, ry: np.ndarray) -> np.ndarray:
    if case == 1:
        return (rx == _SQUARE) & (ry != _SQUARE)
    if case == 2:
        return (ry == _SQUARE) & (rx != _SQUARE)
    if case == 3:
        return (rx != _NONSQUARE) & (ry != _NONSQUARE)
    if case == 4:
        return (rx != _SQUARE) & (ry != _SQUARE)
    raise InvalidParameterError(f"case must be 1, 2, 3 or 4, got {case}")


def _case_prediction(case: int, p: int, q: int) -> Tuple[Dict[int, int], str]:
    if case in (1, 2):
        value, pairs, at_unit = (p - 1) // 2, (q - p) // (2 * (p - 1)), f"{p + 1}/4"
    elif case == 3:
        value, pairs, at_unit = (p + 1) // 2, (q - p) // (2 * (p + 1)), f"{p + 5}/4"
    else:
        value, pairs, at_unit = (p + 1) // 2, (q - p) // (2 * (p + 1)), f"{p - 3}/4"
    return {value: pairs, 0: (q - 1) ** 2 - 1 - pairs}, at_unit


def residue_case_histogram(spec: CodeSpec, fd: FieldDescriptor, case: int) -> CountReport:
    """
    Histogram of the case-restricted unit-system counts away from (1, 1).

    The four case predicates overlap at zero coordinates, which only occur at
    (b, c) = (1, 1); the value there is reported next to its printed prediction
    but never asserted.
    """
    system = unit_system(spec, fd)
    mask = _case_mask(case, fd.residue_codes(system.x), fd.residue_codes(system.y))
    sizes = system.sizes(mask)
    computed = system.histogram(sizes, include_unit=False)
    predicted, at_unit = _case_prediction(case, fd.p, fd.q)
    hard = fd.p % 4 == 3 and spec.e == 1
    return _report(f"case-{case}", spec, computed, predicted, hard=hard, message=CASE_LABELS[case],
                   histogram=computed, predicted_histogram=predicted,
                   unit_count=sizes.get(system.unit_key, 0), unit_predicted=f"({at_unit})")


def residue_class_reconciliation(spec: CodeSpec, fd: FieldDescriptor) -> CountReport:
    """Disjoint {zero, square, nonsquare} class pairs partition every bucket; (1, 1) totals p."""
    system = unit_system(spec, fd)
    rx = fd.residue_codes(system.x)
    ry = fd.residue_codes(system.y)
    pair_codes = rx * 3 + ry
    merged: Counter = Counter()
    at_unit: Dict[str, int] = {}
    names = {_ZERO: ResidueClass.ZERO.value, _SQUARE: ResidueClass.SQUARE.value,
             _NONSQUARE: ResidueClass.NONSQUARE.value}
    for code in range(9):
        mask = pair_codes == code
        if not mask.any():
            continue
        sizes = system.sizes(mask)
        merged.update(sizes)
        if system.unit_key in sizes:
            at_unit[f"{names[code // 3]}/{names[code % 3]}"] = sizes[system.unit_key]
    mismatched = sum(1 for key, n in system.sizes().items() if merged.get(key) != n)
    total = sum(at_unit.values())
    return _report("case-reconciliation", spec, total, fd.p, holds=mismatched == 0,
                   message="disjoint residue classes at (1,1)", unit_classes=at_unit,
                   mismatched_buckets=mismatched)


def curve_system_histogram(spec: CodeSpec, fd: FieldDescriptor, sign: str = "difference",
                           budget: int = DEFAULT_BUDGET) -> CountReport:
    """
    Per-b solution counts of x^2 -/+ y^2 = 1 with b = x^(p^2k + 1) -/+ y^(p^2k + 1).

    Args:
        sign: "difference" or "sum"
    """
    if sign not in ("difference", "sum"):
        raise InvalidParameterError(f"sign must be difference or sum, got {sign!r}")
    check_budget(fd.q ** 2, budget, f"{sign} curve count for {spec}")
    q, p = fd.q, fd.p
    elements = fd.elements()
    squares = np.asarray(fd.mul(elements, elements))
    powered = np.asarray(fd.pow(elements, 2 * spec.d1))
    combine = fd.sub if sign == "difference" else fd.add

    per_b: Counter = Counter()
    solutions = 0
    for x, y in _pair_rows(fd):
        on_curve = np.asarray(combine(squares[x], squares[y])) == 1
        xs, ys = np.nonzero(on_curve)
        if xs.size:
            bs = np.asarray(combine(powered[x.ravel()[xs]], powered[ys]))
            labels, counts = np.unique(bs, return_counts=True)
            per_b.update({int(v): int(n) for v, n in zip(labels, counts)})
            solutions += int(xs.size)

    histogram = Counter(n for b, n in per_b.items() if b not in (0, 1))
    histogram[0] += (q - 2) - sum(histogram.values())
    base, expected_total = (p - 1, q - 1) if sign == "difference" else (p + 1, q + 1)
    pairs = (q - p) // (2 * base)
    predicted = {2 * base: pairs, 0: q - 2 - pairs}
    computed = {k: v for k, v in histogram.items() if v}
    ok = per_b.get(1, 0) == base and solutions == expected_total and per_b.get(0, 0) == 0
    hard = p % 4 == 3 and spec.e == 1
    return _report(f"curve-{sign}", spec, computed, predicted, hard=hard, holds=ok,
                   message="" if ok else f"b=1 count {per_b.get(1, 0)}, total {solutions}",
                   histogram=computed, predicted_histogram=predicted,
                   unit_count=per_b.get(1, 0), total_solutions=solutions)
