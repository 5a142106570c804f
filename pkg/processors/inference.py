"""
Exact posterior inference under either calculus

Two engines answer the same query:
- enumerate_posterior: brute-force merge over every completion (the oracle)
- eliminate_posterior: variable elimination over dense factors

Both normalize once, on the final target vector.
"""

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import AbstractSet, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from models import (
    INF,
    Assignment,
    Calculus,
    ContractViolationError,
    Degree,
    ImpossibleEvidenceError,
    Network,
    check_assignment,
    combine,
    merge,
)
from processors.factors import Factor, product_all
from utils.logger import logger


# ============================================================================
# RESULT TYPES
# ============================================================================

@dataclass(frozen=True)
class PosteriorVector:
    """Normalized degrees of every value of one variable."""

    variable: str
    values: Tuple[str, ...]
    degrees: Tuple[Degree, ...]
    calculus: Calculus

    def degree_of(self, value: str) -> Degree:
        try:
            return self.degrees[self.values.index(value)]
        except ValueError:
            raise ContractViolationError(f"'{value}' is not a value of '{self.variable}'") from None

    def as_dict(self) -> Dict[str, Degree]:
        return dict(zip(self.values, self.degrees))


@dataclass(frozen=True)
class EliminationOrder:
    order: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))

    def __iter__(self):
        return iter(self.order)

    def __len__(self):
        return len(self.order)


@dataclass(frozen=True)
class Belief:
    """Plain-belief status of a proposition under a kappa ranking."""

    kind: str  # "believed" | "disbelieved" | "uncommitted"
    strength: Degree = 0

    def __str__(self) -> str:
        if self.kind == "uncommitted":
            return "uncommitted"
        return f"{self.kind}({self.strength})"


BELIEVED = "believed"
DISBELIEVED = "disbelieved"
UNCOMMITTED = "uncommitted"


# ============================================================================
# NORMALIZATION AND JOINT
# ============================================================================

def normalize_vector(calc: Calculus, raw: Sequence[Degree]) -> Tuple[Degree, ...]:
    """
    Divide by the sum (probability) or subtract the minimum (kappa).

    Raises:
        ImpossibleEvidenceError: all entries are zero / infinite
    """
    if not raw:
        raise ContractViolationError("cannot normalize an empty vector")

    if calc is Calculus.PROBABILITY:
        total = float(sum(raw))
        if total <= 0.0:
            raise ImpossibleEvidenceError("impossible evidence: every value has probability 0")
        return tuple(float(d) / total for d in raw)

    lowest = min(raw)
    if lowest is INF:
        raise ImpossibleEvidenceError("impossible evidence: every value has rank infinity")
    return tuple(d - lowest for d in raw)


def _value_indices(net: Network, assignment: Assignment) -> Dict[str, int]:
    return {name: net.value_index(name, value) for name, value in assignment.items()}


def _joint_from_indices(net: Network, indices: Dict[str, int]) -> Degree:
    calc = net.calculus
    degree = calc.unit
    for table in net.tables:
        row = 0
        for parent in table.parents:
            row = row * net.cardinality(parent) + indices[parent]
        degree = combine(calc, degree, table.rows[row][indices[table.child]])
    return degree


def joint_degree(net: Network, full: Assignment) -> Degree:
    """Combine, over all nodes, the table entry for (child value | parent values)."""
    check_assignment(net, full, full=True)
    return _joint_from_indices(net, _value_indices(net, full))


def _check_query(net: Network, evidence: Assignment, target: str) -> None:
    net.variable(target)
    check_assignment(net, evidence)
    if target in evidence:
        raise ContractViolationError(f"target '{target}' is observed")


# ============================================================================
# ENUMERATION ORACLE
# ============================================================================

def enumerate_posterior(net: Network, evidence: Assignment, target: str) -> PosteriorVector:
    """Merge the joint degree over every completion of evidence ∪ {target=v}, then normalize."""
    _check_query(net, evidence, target)
    calc = net.calculus
    fixed = _value_indices(net, evidence)
    free = [name for name in net.names if name != target and name not in evidence]
    domains = [range(net.cardinality(name)) for name in free]

    raw: List[Degree] = []
    for target_index in range(net.cardinality(target)):
        total = calc.zero
        for completion in itertools.product(*domains):
            indices = dict(fixed)
            indices[target] = target_index
            indices.update(zip(free, completion))
            total = merge(calc, total, _joint_from_indices(net, indices))
        raw.append(total)

    return PosteriorVector(target, net.variable(target).values, normalize_vector(calc, raw), calc)


def kappa_of_event(net: Network, event: Iterable[Assignment]) -> Degree:
    """
    Rank of an event given as a collection of full assignments.

    Uses the normalized joint ranking; the empty event has rank infinity.
    """
    if net.calculus is not Calculus.KAPPA:
        raise ContractViolationError("kappa_of_event needs a kappa network")
    all_ranks = [
        _joint_from_indices(net, dict(zip(net.names, combo)))
        for combo in itertools.product(*(range(v.cardinality) for v in net.variables))
    ]
    offset = min(all_ranks)
    if offset is INF:
        raise ImpossibleEvidenceError("the network assigns rank infinity to every world")
    rank = INF
    for full in event:
        check_assignment(net, full, full=True)
        rank = min(rank, joint_degree(net, full) - offset)
    return rank


# ============================================================================
# VARIABLE ELIMINATION
# ============================================================================

def min_fill_order(net: Network, keep: AbstractSet[str]) -> EliminationOrder:
    """
    Greedy order over the moral graph minimizing fill-in edges.

    Ties are broken by declaration order of variables.
    """
    for name in keep:
        net.variable(name)

    graph = nx.moral_graph(net.to_digraph()) if net.tables else nx.Graph()
    graph.add_nodes_from(net.names)
    remaining = [name for name in net.names if name not in keep]
    order: List[str] = []

    while remaining:
        def fill_in(name: str) -> int:
            neighbours = list(graph.neighbors(name))
            return sum(
                1
                for a, b in itertools.combinations(neighbours, 2)
                if not graph.has_edge(a, b)
            )

        best = min(remaining, key=fill_in)  # min() keeps the first of equal keys
        neighbours = list(graph.neighbors(best))
        graph.add_edges_from(itertools.combinations(neighbours, 2))
        graph.remove_node(best)
        remaining.remove(best)
        order.append(best)

    return EliminationOrder(tuple(order))


def eliminate_posterior(net: Network, evidence: Assignment, target: str,
                        order: Optional[EliminationOrder] = None) -> PosteriorVector:
    """
    Posterior of ``target`` by variable elimination.

    Evidence restricts every table factor before elimination. ``order`` must
    be a permutation of the variables that are neither target nor observed;
    min-fill is used when omitted.
    """
    _check_query(net, evidence, target)
    calc = net.calculus
    keep = frozenset(evidence) | {target}

    if order is None:
        order = min_fill_order(net, keep)
    eliminable = [name for name in net.names if name not in keep]
    if len(order) != len(eliminable) or set(order) != set(eliminable):
        raise ContractViolationError(
            f"elimination order {list(order)} is not a permutation of {eliminable}"
        )

    observed = _value_indices(net, evidence)
    factors = [Factor.from_table(net, table).restrict(observed) for table in net.tables]

    for name in order:
        bucket = [f for f in factors if name in f.scope]
        if not bucket:
            continue
        factors = [f for f in factors if name not in f.scope]
        joined = reduce(lambda acc, f: acc.product(f), bucket)
        factors.append(joined.marginalize(name))
        logger.debug(f"eliminated {name}: {len(bucket)} factors, scope {joined.scope}")

    result = product_all(factors, calc)
    raw = result.vector(target)
    return PosteriorVector(target, net.variable(target).values, normalize_vector(calc, raw), calc)


# ============================================================================
# BELIEF CLASSIFICATION
# ============================================================================

def classify_belief(post: PosteriorVector, positive: Optional[str] = None) -> Belief:
    """
    Believed / disbelieved / uncommitted status of ``positive`` for a binary kappa posterior.

    The positive value defaults to the variable's first declared value.
    """
    if post.calculus is not Calculus.KAPPA:
        raise ContractViolationError("belief classification is defined for kappa rankings only")
    if len(post.values) != 2:
        raise ContractViolationError(f"'{post.variable}' is not binary")

    positive = post.values[0] if positive is None else positive
    pos = post.degree_of(positive)
    neg = post.degrees[1 - post.values.index(positive)]

    if pos == 0 and neg == 0:
        return Belief(UNCOMMITTED, 0)
    if pos == 0:
        return Belief(BELIEVED, neg)
    return Belief(DISBELIEVED, pos)
