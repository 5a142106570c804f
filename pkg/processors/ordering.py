"""
Ordering agreement between two plausibility rankings of the same items.

Ties in either ranking make a pair non-comparable: a tied pair is
compatible with any strict order.
"""

import itertools
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

from scipy import stats

from models import INF, ContractViolationError


@dataclass(frozen=True)
class OrderingAgreement:
    comparable: int
    agreeing: int
    score: float
    inverted_pairs: Tuple[Tuple[str, str], ...] = field(default_factory=tuple)
    kendall_tau: Optional[float] = None

    @property
    def perfect(self) -> bool:
        return self.agreeing == self.comparable


def _sign(a: Any, b: Any) -> int:
    if a == b:
        return 0
    return -1 if a < b else 1


def _as_float(key: Any) -> float:
    return math.inf if key is INF else float(key)


def _kendall_tau(keys_a: Sequence[Any], keys_b: Sequence[Any]) -> Optional[float]:
    if len(keys_a) < 2:
        return None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        tau, _ = stats.kendalltau([_as_float(k) for k in keys_a], [_as_float(k) for k in keys_b])
    if tau is None or math.isnan(tau):
        return None
    return float(tau)


def ordering_agreement(labels: Sequence[str], keys_a: Sequence[Any],
                       keys_b: Sequence[Any]) -> OrderingAgreement:
    """
    Compare two rankings given as sort keys (lower = more plausible).

    Keys may be numbers or INF. A pair counts only when it is strictly
    ordered in both rankings.
    """
    if not len(labels) == len(keys_a) == len(keys_b):
        raise ContractViolationError("rankings must cover the same items")

    comparable = 0
    agreeing = 0
    inverted: List[Tuple[str, str]] = []
    for i, j in itertools.combinations(range(len(labels)), 2):
        sign_a = _sign(keys_a[i], keys_a[j])
        sign_b = _sign(keys_b[i], keys_b[j])
        if sign_a == 0 or sign_b == 0:
            continue
        comparable += 1
        if sign_a == sign_b:
            agreeing += 1
        else:
            inverted.append((labels[i], labels[j]) if sign_a < 0 else (labels[j], labels[i]))

    score = agreeing / comparable if comparable else 1.0
    return OrderingAgreement(
        comparable=comparable,
        agreeing=agreeing,
        score=score,
        inverted_pairs=tuple(inverted),
        kendall_tau=_kendall_tau(keys_a, keys_b),
    )
