"""
Epsilon Abstraction
Translates point probabilities into kappa ranks and compares the two routes
from a probability network to a kappa answer:

- C1: probabilistic inference, then translate the posterior
- C2: translate the network, then kappa inference
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from config import TRANSLATION_GUARD
from models import (
    INF,
    Assignment,
    Calculus,
    ConditionalTable,
    ContractViolationError,
    Degree,
    Network,
)
from processors.inference import PosteriorVector, eliminate_posterior, normalize_vector
from processors.ordering import OrderingAgreement, ordering_agreement
from utils.logger import logger


# ============================================================================
# EPSILON
# ============================================================================

@dataclass(frozen=True)
class EpsilonParameter:
    """Abstraction base; must lie strictly between 0 and 1."""

    value: float

    def __post_init__(self):
        value = float(self.value)
        if not 0.0 < value < 1.0:
            raise ContractViolationError(f"epsilon must lie strictly between 0 and 1 (got {self.value})")
        object.__setattr__(self, "value", value)

    @classmethod
    def coerce(cls, eps: Union["EpsilonParameter", float]) -> "EpsilonParameter":
        return eps if isinstance(eps, cls) else cls(eps)

    def __str__(self) -> str:
        return f"{self.value:g}"


EpsilonLike = Union[EpsilonParameter, float]


# ============================================================================
# DEGREE TRANSLATION
# ============================================================================

def translate_degree(p: float, eps: EpsilonLike) -> Degree:
    """
    Order of magnitude of ``p`` in base epsilon.

    Returns the integer k >= 0 with eps^(k+1) < p <= eps^k, or INF for p = 0.
    Repeatedly divides by epsilon until the scaled value exceeds 1; a value
    within TRANSLATION_GUARD of 1 still counts as <= 1, so exact powers of
    epsilon land on the closed end of their interval.
    """
    eps = EpsilonParameter.coerce(eps)
    if p < 0 or math.isnan(p):
        raise ContractViolationError(f"{p!r} is not a probability")
    if p == 0:
        return INF
    if p > 1:
        logger.debug(f"clamping probability {p!r} to 1 before translation")
        p = 1.0

    k = 0
    scaled = p
    while True:
        scaled /= eps.value
        if scaled > 1.0 + TRANSLATION_GUARD:
            return k
        k += 1


def translate_degree_closed_form(p: float, eps: EpsilonLike) -> Degree:
    """
    Same relation as :func:`translate_degree`, evaluated with logarithms.

    The logarithm only proposes k; the interval
    eps^(k+1) * (1 + guard) < p <= eps^k * (1 + guard) decides it.
    """
    eps = EpsilonParameter.coerce(eps)
    if p < 0 or math.isnan(p):
        raise ContractViolationError(f"{p!r} is not a probability")
    if p == 0:
        return INF
    p = min(p, 1.0)

    bound = 1.0 + TRANSLATION_GUARD
    k = max(math.floor(math.log(p) / math.log(eps.value)), 0)
    while k > 0 and p > eps.value ** k * bound:
        k -= 1
    while p <= eps.value ** (k + 1) * bound:
        k += 1
    return k


def translate_vector(probabilities: Sequence[float], eps: EpsilonLike,
                     normalize: bool = True) -> Tuple[Degree, ...]:
    """Translate each entry; optionally shift so the minimum rank is 0."""
    ranks = tuple(translate_degree(p, eps) for p in probabilities)
    if normalize:
        return normalize_vector(Calculus.KAPPA, ranks)
    return ranks


def translate_network(net: Network, eps: EpsilonLike) -> Network:
    """
    Kappa network with the same graph, every entry translated.

    Rows whose minimum rank is positive after translation are shifted down
    so each row has minimum 0.
    """
    eps = EpsilonParameter.coerce(eps)
    if net.calculus is not Calculus.PROBABILITY:
        raise ContractViolationError("translate_network needs a probability network")

    tables = []
    shifted = 0
    for table in net.tables:
        rows = []
        for row in table.rows:
            raw = [translate_degree(p, eps) for p in row]
            lowest = min(raw)
            if lowest is INF:
                raise ContractViolationError(f"table '{table.child}' has a row of zeros")
            if lowest:
                shifted += 1
            rows.append(tuple(rank - lowest for rank in raw))
        tables.append(ConditionalTable(table.child, table.parents, tuple(rows)))

    logger.debug(f"translated {len(tables)} tables at epsilon={eps}; {shifted} rows shifted")
    return Network(Calculus.KAPPA, net.variables, tuple(tables), epsilon=eps.value)


# ============================================================================
# PIPELINES
# ============================================================================

def _require_probability(net: Network) -> None:
    if net.calculus is not Calculus.PROBABILITY:
        raise ContractViolationError("the comparison pipelines start from a probability network")


def c1_pipeline(net: Network, evidence: Assignment, target: str, eps: EpsilonLike,
                normalize: bool = True) -> PosteriorVector:
    """Probability posterior, translated entry by entry (then kappa-normalized)."""
    _require_probability(net)
    posterior = eliminate_posterior(net, evidence, target)
    ranks = translate_vector(posterior.degrees, eps, normalize=normalize)
    return PosteriorVector(target, posterior.values, ranks, Calculus.KAPPA)


def c2_pipeline(net: Network, evidence: Assignment, target: str, eps: EpsilonLike) -> PosteriorVector:
    """Translate the network, then answer the query with kappa calculus."""
    _require_probability(net)
    return eliminate_posterior(translate_network(net, eps), evidence, target)


# ============================================================================
# C1 / C2 DISCREPANCY
# ============================================================================

BOTH_IMPOSSIBLE = "both impossible"
C1_IMPOSSIBLE = "c1 impossible"
C2_IMPOSSIBLE = "c2 impossible"


@dataclass(frozen=True)
class ValueDiscrepancy:
    value: str
    c1: Degree
    c1_raw: Degree
    c2: Degree
    difference: Optional[int]
    note: str = ""


@dataclass(frozen=True)
class DiscrepancyReport:
    """Per-value C1 vs C2 ranks for one query at one epsilon."""

    variable: str
    epsilon: float
    records: Tuple[ValueDiscrepancy, ...]
    agreement: OrderingAgreement

    @property
    def orderings_agree(self) -> bool:
        return not self.agreement.inverted_pairs

    @property
    def max_abs_difference(self) -> int:
        return max((abs(r.difference) for r in self.records if r.difference is not None), default=0)


def _difference(c1: Degree, c2: Degree) -> Tuple[Optional[int], str]:
    if c1 is INF and c2 is INF:
        return None, BOTH_IMPOSSIBLE
    if c1 is INF:
        return None, C1_IMPOSSIBLE
    if c2 is INF:
        return None, C2_IMPOSSIBLE
    return c1 - c2, ""


def compare_c1_c2(net: Network, evidence: Assignment, target: str, eps: EpsilonLike) -> DiscrepancyReport:
    """
    Run both pipelines and report per-value differences (c1 - c2).

    Orderings agree when no pair of values is strictly ordered one way by C1
    and the other way by C2; ties are compatible with any order.
    """
    eps = EpsilonParameter.coerce(eps)
    _require_probability(net)

    posterior = eliminate_posterior(net, evidence, target)
    c1_raw = translate_vector(posterior.degrees, eps, normalize=False)
    c1 = normalize_vector(Calculus.KAPPA, c1_raw)
    c2 = eliminate_posterior(translate_network(net, eps), evidence, target).degrees

    records = []
    for value, rank1, raw1, rank2 in zip(posterior.values, c1, c1_raw, c2):
        difference, note = _difference(rank1, rank2)
        records.append(ValueDiscrepancy(value, rank1, raw1, rank2, difference, note))

    agreement = ordering_agreement(posterior.values, c1, c2)
    logger.debug(f"compare {target} at epsilon={eps}: c1={c1} c2={c2}")
    return DiscrepancyReport(target, eps.value, tuple(records), agreement)
