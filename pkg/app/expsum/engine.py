import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.code import DEFAULT_BUDGET, CodeSpec, validate_spec
from app.errors import BudgetExceededError, ConsistencyError, InvalidParameterError
from app.field import FieldDescriptor, construct_field
from app.reports import RankEntry, ValueDistributionReport, ValueEntry

from .quadform import batch_rank, h_image, rank_consistent, s_from_zero_count

logger = logging.getLogger(__name__)

# Upper bound on elements held by one intermediate array
CHUNK_ELEMENTS = 1 << 22


def default_jobs() -> int:
    """Worker count from CWDW_JOBS; 0 or unset means one per CPU."""
    raw = os.getenv("CWDW_JOBS", "0")
    try:
        jobs = int(raw)
    except ValueError:
        raise InvalidParameterError(f"CWDW_JOBS must be an integer, got {raw!r}") from None
    if jobs < 0:
        raise InvalidParameterError(f"CWDW_JOBS must be >= 0, got {jobs}")
    return jobs or os.cpu_count() or 1


def check_budget(operations: int, budget: int, what: str) -> None:
    if operations > budget:
        message = f"{what} needs {operations} operations, budget is {budget}; raise --budget to proceed"
        logger.error(message)
        raise BudgetExceededError(message)


def projective_points(fd: FieldDescriptor) -> np.ndarray:
    """
    One nonzero x from each F_p^* orbit: pi^i for 0 <= i < (q-1)/(p-1).

    f_Delta(yx) = y f_Delta(x) for y in F_p, so the zero count over F_q is
    1 + (p-1) times the zero count over these points.
    """
    return np.asarray(fd.power_of_pi(np.arange(fd.order // (fd.p - 1), dtype=np.int64)))


def _matmul_dtype(fd: FieldDescriptor):
    # Products are exact while every dot product stays below the mantissa limit
    return np.float32 if fd.m * (fd.p - 1) ** 2 < 2 ** 24 else np.float64


def trace_functional_basis(spec: CodeSpec, fd: FieldDescriptor, points: np.ndarray) -> np.ndarray:
    """
    basis[t, j, i] = Tr(x^j * points[i]^(d_t)) with d_0 = 1.

    The term Tr(delta * y) is F_p-linear in delta, so a row for any delta is the
    coordinate vector of delta times basis[t], reduced mod p.
    """
    dtype = _matmul_dtype(fd)
    exponents = (1, spec.d1, spec.d2)
    basis = np.empty((3, fd.m, points.size), dtype=dtype)
    for t, d in enumerate(exponents):
        powered = fd.pow(points, d)
        for j in range(fd.m):
            basis[t, j] = fd.trace(fd.mul(fd.p ** j, powered))
    return basis


def functional_rows(basis_t: np.ndarray, deltas, fd: FieldDescriptor) -> np.ndarray:
    coords = fd.digits(deltas).astype(basis_t.dtype)
    return ((coords @ basis_t).astype(np.int64) % fd.p).astype(np.int32)


def hmat_tables(spec: CodeSpec, fd: FieldDescriptor) -> np.ndarray:
    """
    mats[t, delta] is the matrix of H for the triple with delta in slot t and zeros elsewhere.

    H is additive in (d0, d1, d2), so the matrix of a full triple is the sum of its
    three slot matrices mod p.
    """
    elements = fd.elements()
    zeros = np.zeros_like(elements)
    mats = np.zeros((3, fd.q, fd.m, fd.m), dtype=np.int16)
    for t in range(3):
        slots = [zeros, zeros, zeros]
        slots[t] = elements
        for j in range(fd.m):
            mats[t, :, :, j] = fd.digits(h_image(slots, fd.p ** j, spec, fd))
    return mats


@dataclass
class ScanTally:
    """Private histogram of one worker; tallies merge by addition."""

    values: Counter = field(default_factory=Counter)
    ranks: Counter = field(default_factory=Counter)
    inconsistent: int = 0
    examined: int = 0

    def __add__(self, other: "ScanTally") -> "ScanTally":
        return ScanTally(
            values=self.values + other.values,
            ranks=self.ranks + other.ranks,
            inconsistent=self.inconsistent + other.inconsistent,
            examined=self.examined + other.examined,
        )

    def add_values(self, s: np.ndarray) -> None:
        labels, counts = np.unique(s, return_counts=True)
        self.values.update({int(v): int(c) for v, c in zip(labels, counts)})

    def add_ranks(self, ranks: np.ndarray, s: np.ndarray, nonzero: np.ndarray, p: int, m: int, e: int = 1) -> None:
        self.inconsistent += int(np.count_nonzero(~rank_consistent(s, ranks, p, m, e)))
        labels, counts = np.unique(ranks[nonzero], return_counts=True)
        self.ranks.update({int(v): int(c) for v, c in zip(labels, counts)})


class EnumerationContext:
    """
    Precomputed tables for evaluating many exponential sums of one code.

    Full tables (q x (q-1)/(p-1) per slot) serve exhaustive enumeration; without
    them rows are produced on demand for sampled triples.
    """

    def __init__(self, spec: CodeSpec, fd: FieldDescriptor, with_rank: bool = False, full_tables: bool = True):
        self.spec = spec
        self.fd = fd
        self.with_rank = with_rank
        self.points = projective_points(fd)
        self.basis = trace_functional_basis(spec, fd, self.points)
        self.zero_lut = np.arange(3 * fd.p) % fd.p == 0
        self.tables: Optional[List[np.ndarray]] = None
        if full_tables:
            elements = fd.elements()
            self.tables = [functional_rows(self.basis[t], elements, fd) for t in range(3)]
        self.hmats = hmat_tables(spec, fd) if with_rank else None

    def _s_values(self, zero_points: np.ndarray) -> np.ndarray:
        return s_from_zero_count(1 + (self.fd.p - 1) * zero_points, self.fd.p, self.fd.q)

    def _ranks(self, d0, d1, d2) -> np.ndarray:
        h0, h1, h2 = self.hmats
        mats = h0[d0].astype(np.int64) + h1[d1] + h2[d2]
        shape = mats.shape[:-2]
        return batch_rank(mats.reshape(-1, self.fd.m, self.fd.m), self.fd.p).reshape(shape)

    def tally_block(self, start: int, stop: int) -> ScanTally:
        """Every triple with d0 in [start, stop)."""
        fd = self.fd
        q = fd.q
        t0, t1, t2 = self.tables
        tally = ScanTally()
        step = max(1, CHUNK_ELEMENTS // (q * self.points.size))
        grid = np.arange(q)
        for d0 in range(start, stop):
            zero_points = np.empty((q, q), dtype=np.int64)
            for lo in range(0, q, step):
                hi = min(q, lo + step)
                sums = t1[lo:hi, None, :] + t2[None, :, :] + t0[d0]
                zero_points[lo:hi] = self.zero_lut[sums].sum(axis=2)
            s = self._s_values(zero_points)
            tally.add_values(s)
            if self.with_rank:
                ranks = self._ranks(d0, grid[:, None], grid[None, :])
                nonzero = np.ones((q, q), dtype=bool)
                if d0 == 0:
                    nonzero[0, 0] = False
                tally.add_ranks(ranks, s, nonzero, fd.p, fd.m, self.spec.e)
            tally.examined += q * q
        return tally

    def tally_samples(self, deltas: np.ndarray) -> ScanTally:
        """Triples given as an (n, 3) array of packed elements."""
        fd = self.fd
        tally = ScanTally()
        step = max(1, CHUNK_ELEMENTS // self.points.size)
        for lo in range(0, len(deltas), step):
            chunk = deltas[lo:lo + step]
            sums = sum(functional_rows(self.basis[t], chunk[:, t], fd) for t in range(3))
            s = self._s_values(self.zero_lut[sums].sum(axis=1))
            tally.add_values(s)
            if self.with_rank:
                ranks = self._ranks(chunk[:, 0], chunk[:, 1], chunk[:, 2])
                tally.add_ranks(ranks, s, chunk.any(axis=1), fd.p, fd.m, self.spec.e)
            tally.examined += len(chunk)
        return tally


@lru_cache(maxsize=4)
def _worker_context(p: int, m: int, k: int, mode: str, modulus: Tuple[int, ...], with_rank: bool) -> EnumerationContext:
    fd = construct_field(p, m, modulus=modulus)
    return EnumerationContext(validate_spec(p, m, k, mode), fd, with_rank=with_rank)


def _tally_block_worker(payload: Tuple) -> ScanTally:
    p, m, k, mode, modulus, with_rank, start, stop = payload
    return _worker_context(p, m, k, mode, modulus, with_rank).tally_block(start, stop)


def _blocks(q: int, jobs: int) -> List[Tuple[int, int]]:
    count = min(q, max(1, 4 * jobs))
    edges = np.linspace(0, q, count + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def enumerate_all(spec: CodeSpec, fd: FieldDescriptor, jobs: int = 1, with_rank: bool = False,
                  budget: int = DEFAULT_BUDGET) -> ScanTally:
    """
    Exponential sums of every triple in F_q^3, partitioned by d0 across worker processes.

    Args:
        spec: Code parameters
        fd: Field
        jobs: Worker processes; 1 runs in-process
        with_rank: Also classify every triple by the rank of its quadratic form
        budget: Largest admissible q^3

    Returns:
        ScanTally: Merged histograms; identical for every value of jobs
    """
    check_budget(fd.q ** 3, budget, f"exhaustive enumeration of {spec}")
    if not fd.tables:
        raise InvalidParameterError(f"exhaustive enumeration needs log tables (q = {fd.q})")
    jobs = max(1, int(jobs))
    blocks = _blocks(fd.q, jobs)
    started = time.perf_counter()
    logger.info(f"Enumerating {fd.q ** 3} triples of {spec} in {len(blocks)} blocks on {jobs} workers")

    tally = ScanTally()
    if jobs == 1:
        context = EnumerationContext(spec, fd, with_rank=with_rank)
        for start, stop in blocks:
            tally = tally + context.tally_block(start, stop)
    else:
        payloads = [(spec.p, spec.m, spec.k, spec.mode.value, fd.modulus, with_rank, a, b) for a, b in blocks]
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for part in executor.map(_tally_block_worker, payloads):
                tally = tally + part

    if tally.examined != fd.q ** 3:
        raise ConsistencyError(f"examined {tally.examined} triples, expected {fd.q ** 3}")
    logger.info(f"Enumeration of {spec} finished in {time.perf_counter() - started:.1f}s")
    return tally


def sample_deltas(fd: FieldDescriptor, samples: int, seed: Optional[int]) -> np.ndarray:
    if samples is None or samples < 1:
        raise InvalidParameterError(f"sample size must be a positive integer, got {samples}")
    rng = np.random.default_rng(seed)
    return rng.integers(0, fd.q, size=(samples, 3), dtype=np.int64)


def enumerate_samples(spec: CodeSpec, fd: FieldDescriptor, samples: int, seed: Optional[int],
                      with_rank: bool = True) -> ScanTally:
    deltas = sample_deltas(fd, samples, seed)
    logger.info(f"Sampling {samples} triples of {spec} with seed {seed}")
    return EnumerationContext(spec, fd, with_rank=with_rank, full_tables=False).tally_samples(deltas)


@dataclass
class ValueDistribution:
    spec: CodeSpec
    method: str
    values: Dict[int, int]
    ranks: Dict[int, int] = field(default_factory=dict)
    inconsistent: int = 0
    seed: Optional[int] = None
    samples: Optional[int] = None

    def to_report(self) -> ValueDistributionReport:
        return ValueDistributionReport(
            spec=self.spec.summary(),
            method=self.method,
            values=[ValueEntry(s=s, freq=str(f)) for s, f in sorted(self.values.items())],
            ranks=[RankEntry(rank=r, freq=str(f)) for r, f in sorted(self.ranks.items())] or None,
            seed=self.seed,
            samples=self.samples,
        )


def value_distribution(spec: CodeSpec, fd: FieldDescriptor, mode: str = "full", samples: Optional[int] = None,
                       seed: Optional[int] = None, budget: int = DEFAULT_BUDGET, jobs: int = 1,
                       with_rank: bool = False) -> ValueDistribution:
    """Histogram of exponential-sum values over all triples (full) or seeded random ones (sampled)."""
    if mode == "full":
        tally = enumerate_all(spec, fd, jobs=jobs, with_rank=with_rank, budget=budget)
        samples, seed = None, None
    elif mode == "sampled":
        tally = enumerate_samples(spec, fd, samples, seed, with_rank=with_rank)
    else:
        raise InvalidParameterError(f"mode must be full or sampled, got {mode!r}")
    if tally.inconsistent:
        logger.error(f"{tally.inconsistent} triples of {spec} violate the rank/value relation")
    return ValueDistribution(spec, "exact" if mode == "full" else "sampled", dict(tally.values),
                             ranks=dict(tally.ranks), inconsistent=tally.inconsistent, seed=seed, samples=samples)
