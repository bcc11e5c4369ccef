import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import gcd
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from sympy import isprime

from app.errors import ConsistencyError, InvalidParameterError
from app.field import FieldDescriptor
from app.poly import PolyOverFp, build_parity_check
from app.reports import SpecSummary, WeightDistributionReport, WeightEntry
from app.tables import minimum_distance, table2, table3, weight_for_value

logger = logging.getLogger(__name__)

# Operation budget for exhaustive runs (q^3 for full enumeration)
DEFAULT_BUDGET = int(os.getenv("CWDW_BUDGET", str(10 ** 8)))


class CodeMode(str, Enum):
    COPRIME = "t2"
    GENERAL = "t3"


class WeightMethod(str, Enum):
    EXACT = "exact"
    CLOSED_FORM = "closed"
    SAMPLED = "sampled"


class CodeSpec(BaseModel):
    """Parameters (p, m, k) of the cyclic code together with the derived exponents."""

    model_config = ConfigDict(frozen=True)

    p: int
    m: int
    k: int
    mode: CodeMode = CodeMode.COPRIME

    @property
    def q(self) -> int:
        return self.p ** self.m

    @property
    def d1(self) -> int:
        return (self.p ** (2 * self.k) + 1) // 2

    @property
    def d2(self) -> int:
        return (self.p ** (4 * self.k) + 1) // 2

    @property
    def e(self) -> int:
        return gcd(self.m, self.k)

    def summary(self) -> SpecSummary:
        return SpecSummary(p=self.p, m=self.m, k=self.k, q=self.q, d1=self.d1, d2=self.d2, e=self.e)

    def __str__(self) -> str:
        return f"C({self.p},{self.m},{self.k})[{self.mode.value}]"


def validate_spec(p: int, m: int, k: int, mode: str = CodeMode.COPRIME) -> CodeSpec:
    """
    Check (p, m, k) against the constraints of the chosen code regime.

    Args:
        p: Odd prime characteristic
        m: Extension degree
        k: Exponent parameter, k >= 1
        mode: "t2" (gcd(m, k) = 1) or "t3" (general e = gcd(m, k))

    Returns:
        CodeSpec: A validated, hashable specification

    Raises:
        InvalidParameterError: Naming the violated constraint
    """
    try:
        mode = CodeMode(mode)
    except ValueError:
        raise InvalidParameterError(f"mode must be one of t2, t3, got {mode!r}")
    if not isinstance(p, int) or p == 2 or not isprime(p):
        raise InvalidParameterError("p must be an odd prime")
    if not isinstance(m, int) or m < 1:
        raise InvalidParameterError("m must be a positive integer")
    if not isinstance(k, int) or k < 1:
        raise InvalidParameterError("k must be a positive integer")

    if mode == CodeMode.COPRIME:
        if m % 2 == 0:
            raise InvalidParameterError(f"m = {m} is even; mode t2 needs m odd")
        if m < 5:
            raise InvalidParameterError(f"m = {m} < 5; mode t2 needs m >= 5")
        if gcd(m, k) != 1:
            raise InvalidParameterError(f"gcd(m, k) = {gcd(m, k)} != 1; use mode t3")
    else:
        ratio = m // gcd(m, k)
        if ratio % 2 == 0:
            raise InvalidParameterError(f"m/e = {ratio} is even; mode t3 needs m/e odd")
        if ratio < 5:
            raise InvalidParameterError(f"m/e = {ratio} < 5; mode t3 needs m/e >= 5")

    spec = CodeSpec(p=p, m=m, k=k, mode=mode)
    if spec.d1 % 2 == 0 or spec.d2 % 2 == 0:
        raise ConsistencyError(f"d1 = {spec.d1}, d2 = {spec.d2} must both be odd")
    return spec


@dataclass(frozen=True)
class DeltaTriple:
    d0: int
    d1: int
    d2: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.d0, self.d1, self.d2

    def is_zero(self) -> bool:
        return not (self.d0 or self.d1 or self.d2)

    def check(self, fd: FieldDescriptor) -> "DeltaTriple":
        if any(not 0 <= v < fd.q for v in self.as_tuple()):
            raise InvalidParameterError(f"{self} does not lie in GF({fd.p}^{fd.m})")
        return self


def random_delta(rng: np.random.Generator, fd: FieldDescriptor) -> DeltaTriple:
    d0, d1, d2 = (int(v) for v in rng.integers(0, fd.q, size=3))
    return DeltaTriple(d0, d1, d2)


def codeword(delta: DeltaTriple, spec: CodeSpec, fd: FieldDescriptor) -> np.ndarray:
    """
    The trace codeword c_Delta, entry i = Tr(d0 pi^i + d1 pi^(i d1) + d2 pi^(i d2)).

    Returns:
        np.ndarray: int64 vector of length q-1 over F_p
    """
    delta.check(fd)
    i = np.arange(fd.order, dtype=np.int64)
    terms = fd.mul(delta.d0, fd.power_of_pi(i))
    terms = fd.add(terms, fd.mul(delta.d1, fd.power_of_pi(i * (spec.d1 % fd.order))))
    terms = fd.add(terms, fd.mul(delta.d2, fd.power_of_pi(i * (spec.d2 % fd.order))))
    return np.asarray(fd.trace(terms), dtype=np.int64)


def hamming_weight(cw: np.ndarray) -> int:
    return int(np.count_nonzero(cw))


def weight_from_s(s: int, spec: CodeSpec) -> int:
    """w = (p-1) p^(m-1) - (p-1) S / p."""
    return weight_for_value(int(s), spec.p, spec.m)


def code_parameters(spec: CodeSpec) -> Tuple[int, int, int]:
    """[n, dimension, minimum distance] of the code."""
    return spec.q - 1, 3 * spec.m, minimum_distance(spec.p, spec.m, spec.e)


@lru_cache(maxsize=8)
def parity_check(spec: CodeSpec, fd: FieldDescriptor) -> PolyOverFp:
    return build_parity_check(spec, fd)


def in_cyclic_code(word: np.ndarray, h: PolyOverFp, fd: FieldDescriptor) -> bool:
    """True iff word(x) h(x) = 0 modulo x^(q-1) - 1."""
    word = np.asarray(word, dtype=np.int64) % fd.p
    if word.shape != (fd.order,):
        raise InvalidParameterError(f"word must have length {fd.order}")
    acc = np.zeros(fd.order, dtype=np.int64)
    for j, hj in enumerate(h.coeffs):
        if hj:
            acc = (acc + hj * np.roll(word, j)) % fd.p
    return not acc.any()


def delsarte_check(delta: DeltaTriple, spec: CodeSpec, fd: FieldDescriptor) -> bool:
    return in_cyclic_code(codeword(delta, spec, fd), parity_check(spec, fd), fd)


@dataclass
class WeightDistribution:
    spec: CodeSpec
    method: WeightMethod
    weights: Dict[int, int]
    seed: Optional[int] = None
    samples: Optional[int] = None
    ranks: Dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.weights.values())

    def check_invariants(self) -> None:
        """Full distributions sum to p^3m with a single zero codeword."""
        if self.method == WeightMethod.SAMPLED:
            return
        if self.total() != self.spec.p ** (3 * self.spec.m):
            raise ConsistencyError(f"{self.method.value} distribution of {self.spec} sums to {self.total()}")
        if self.weights.get(0) != 1:
            raise ConsistencyError(f"weight 0 has frequency {self.weights.get(0)}, expected 1")
        if len(self.weights) > 6:
            raise ConsistencyError(f"{len(self.weights)} distinct weights, expected at most 6")

    def to_report(self) -> WeightDistributionReport:
        return WeightDistributionReport(
            spec=self.spec.summary(),
            method=self.method.value,
            weights=[WeightEntry(w=w, freq=str(f)) for w, f in sorted(self.weights.items())],
            seed=self.seed,
            samples=self.samples,
        )


def weights_from_values(values: Dict[int, int], spec: CodeSpec) -> Dict[int, int]:
    weights: Dict[int, int] = {}
    for s, freq in values.items():
        w = weight_from_s(s, spec)
        weights[w] = weights.get(w, 0) + freq
    return weights


def weight_distribution(spec: CodeSpec, fd: FieldDescriptor, method: str = WeightMethod.EXACT,
                        samples: Optional[int] = None, seed: Optional[int] = None,
                        budget: int = DEFAULT_BUDGET, jobs: int = 1) -> WeightDistribution:
    """
    Assemble the weight distribution of the code by the requested method.

    Args:
        spec: Validated code parameters
        fd: Field matching (spec.p, spec.m)
        method: exact (enumerate all Delta), closed (tables) or sampled
        samples: Number of random Delta for the sampled method
        seed: PRNG seed for the sampled method
        budget: Largest admissible q^3 for the exact method
        jobs: Worker processes for the exact method

    Returns:
        WeightDistribution: Weight -> frequency with method metadata
    """
    method = WeightMethod(method)
    if method == WeightMethod.CLOSED_FORM:
        table = table2(spec.p, spec.m) if spec.e == 1 else table3(spec.p, spec.m, spec.e)
        dist = WeightDistribution(spec, method, table.as_dict())
    else:
        # Imported here: the enumeration engine builds on CodeSpec
        from app.expsum import value_distribution

        values = value_distribution(spec, fd, mode="full" if method == WeightMethod.EXACT else "sampled",
                                    samples=samples, seed=seed, budget=budget, jobs=jobs)
        dist = WeightDistribution(spec, method, weights_from_values(values.values, spec),
                                  seed=values.seed, samples=values.samples, ranks=values.ranks)
    dist.check_invariants()
    logger.info(f"Weight distribution of {spec} by {method.value}: {len(dist.weights)} weights")
    return dist
