"""
Core model for causal networks under two calculi

Networks are DAGs of discrete variables quantified by conditional tables.
The same network structure can carry point probabilities (combined by
multiplication, merged by addition) or kappa rankings (combined by integer
addition, merged by minimum). Everything downstream is generic over
:class:`Calculus`.

All types here are immutable after construction.
"""

import itertools
import math
import numbers
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, total_ordering
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from config import PROBABILITY_TOLERANCE


# ============================================================================
# ERRORS
# ============================================================================

class ModelError(Exception):
    """Base class for every error raised by the engine."""
    pass


class ContractViolationError(ModelError):
    """Raised when a caller breaks an operation's precondition."""
    pass


class ImpossibleEvidenceError(ModelError):
    """Raised when evidence has probability zero (or rank infinity)."""
    pass


class NetworkValidationError(ModelError):
    """Raised when a network fails validation; carries the full report."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# ============================================================================
# INFINITY
# ============================================================================

@total_ordering
class Infinity:
    """
    The distinguished kappa degree of an impossible event.

    Absorbing under addition, identity of min, greater than every integer.
    There is exactly one instance, ``INF``.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __hash__(self) -> int:
        return hash("kappa-infinity")

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        if other is self or isinstance(other, numbers.Real):
            return False
        return NotImplemented

    def __add__(self, other):
        if other is self or isinstance(other, numbers.Integral):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        if isinstance(other, numbers.Integral):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("cannot subtract an infinite rank from a finite one")

    def __reduce__(self):
        return (Infinity, ())

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


INF = Infinity()

Degree = Union[float, int, Infinity]
Assignment = Mapping[str, str]


# ============================================================================
# CALCULUS
# ============================================================================

class Calculus(str, Enum):
    """The two interchangeable belief calculi."""

    PROBABILITY = "probability"
    KAPPA = "kappa"

    @property
    def unit(self) -> Degree:
        """Identity of combine."""
        return 1.0 if self is Calculus.PROBABILITY else 0

    @property
    def zero(self) -> Degree:
        """Identity of merge, absorbing for combine."""
        return 0.0 if self is Calculus.PROBABILITY else INF

    @property
    def dtype(self):
        """numpy dtype used for factor arrays under this calculus."""
        return np.float64 if self is Calculus.PROBABILITY else object

    @property
    def combine_ufunc(self) -> np.ufunc:
        return np.multiply if self is Calculus.PROBABILITY else np.add

    @property
    def merge_ufunc(self) -> np.ufunc:
        return np.add if self is Calculus.PROBABILITY else np.minimum

    def conforms(self, degree) -> bool:
        """True when ``degree`` is a legal (possibly unnormalized) degree of this calculus."""
        if isinstance(degree, bool) or degree is None:
            return False
        if self is Calculus.PROBABILITY:
            return (
                degree is not INF
                and isinstance(degree, numbers.Real)
                and math.isfinite(degree)
                and degree >= 0
            )
        if degree is INF:
            return True
        return isinstance(degree, numbers.Integral) and degree >= 0

    def plausibility_key(self, degree: Degree):
        """Sort key placing the most plausible degree first."""
        if self is Calculus.PROBABILITY:
            return -float(degree)
        return degree


def _check_degrees(calc: Calculus, *degrees) -> None:
    for degree in degrees:
        if not calc.conforms(degree):
            raise ContractViolationError(
                f"{degree!r} is not a {calc.value} degree"
            )


def combine(calc: Calculus, a: Degree, b: Degree) -> Degree:
    """Product of two degrees: multiplication or rank addition (∞ absorbing)."""
    _check_degrees(calc, a, b)
    if calc is Calculus.PROBABILITY:
        return a * b
    return a + b


def merge(calc: Calculus, a: Degree, b: Degree) -> Degree:
    """Sum of two degrees: addition or minimum."""
    _check_degrees(calc, a, b)
    if calc is Calculus.PROBABILITY:
        return a + b
    return min(a, b)


# ============================================================================
# LEXICOGRAPHIC LAYOUT
# ============================================================================

def assignment_to_index(cardinalities: Sequence[int], indices: Sequence[int]) -> int:
    """Position of a value-index tuple in lexicographic (last varies fastest) order."""
    if not cardinalities:
        return 0
    return int(np.ravel_multi_index(tuple(indices), tuple(cardinalities)))


def index_to_assignment(cardinalities: Sequence[int], index: int) -> Tuple[int, ...]:
    """Inverse of :func:`assignment_to_index`."""
    if not cardinalities:
        if index != 0:
            raise ContractViolationError(f"index {index} out of range for an empty scope")
        return ()
    return tuple(int(i) for i in np.unravel_index(index, tuple(cardinalities)))


# ============================================================================
# VARIABLES, TABLES, NETWORKS
# ============================================================================

@dataclass(frozen=True)
class Variable:
    """A discrete variable with an ordered domain."""

    name: str
    values: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def cardinality(self) -> int:
        return len(self.values)

    def index(self, value: str) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise ContractViolationError(
                f"'{value}' is not a value of variable '{self.name}' "
                f"(domain: {', '.join(self.values)})"
            ) from None


@dataclass(frozen=True)
class ConditionalTable:
    """
    Per-node quantification.

    ``rows`` holds one row per full parent assignment, enumerated
    lexicographically by parent order; each row has one degree per child
    value in declared order.
    """

    child: str
    parents: Tuple[str, ...]
    rows: Tuple[Tuple[Degree, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "rows", tuple(tuple(row) for row in self.rows))


@dataclass(frozen=True)
class Network:
    """A causal network tagged with its calculus."""

    calculus: Calculus
    variables: Tuple[Variable, ...]
    tables: Tuple[ConditionalTable, ...]
    epsilon: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "calculus", Calculus(self.calculus))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "tables", tuple(self.tables))

    @cached_property
    def _variables_by_name(self) -> Dict[str, Variable]:
        return {v.name: v for v in self.variables}

    @cached_property
    def _tables_by_child(self) -> Dict[str, ConditionalTable]:
        return {t.child: t for t in self.tables}

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def variable(self, name: str) -> Variable:
        try:
            return self._variables_by_name[name]
        except KeyError:
            raise ContractViolationError(f"unknown variable '{name}'") from None

    def table(self, name: str) -> ConditionalTable:
        try:
            return self._tables_by_child[name]
        except KeyError:
            raise ContractViolationError(f"no table for variable '{name}'") from None

    def cardinality(self, name: str) -> int:
        return self.variable(name).cardinality

    def value_index(self, name: str, value: str) -> int:
        return self.variable(name).index(value)

    def to_digraph(self) -> nx.DiGraph:
        """Parent → child graph over declared variables."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.names)
        for table in self.tables:
            for parent in table.parents:
                graph.add_edge(parent, table.child)
        return graph

    def topological_order(self) -> List[str]:
        """Topological order, ties broken by declaration order."""
        position = {name: i for i, name in enumerate(self.names)}
        return list(nx.lexicographical_topological_sort(self.to_digraph(), key=position.get))

    def parent_assignments(self, parents: Sequence[str]) -> Iterator[Tuple[str, ...]]:
        """Full parent assignments in the table row order."""
        return itertools.product(*(self.variable(p).values for p in parents))


def check_assignment(net: Network, assignment: Assignment, full: bool = False) -> None:
    """Raise ContractViolationError for unknown variables/values or, if ``full``, missing ones."""
    for name, value in assignment.items():
        net.variable(name).index(value)
    if full:
        missing = [name for name in net.names if name not in assignment]
        if missing:
            raise ContractViolationError(
                f"assignment is partial; missing {', '.join(missing)}"
            )


# ============================================================================
# VALIDATION
# ============================================================================

def validate_network(net: Network) -> List[str]:
    """
    Report every invariant violation of ``net``.

    Returns:
        List of human-readable violations; empty when the network is valid.
    """
    violations: List[str] = []
    calc = net.calculus

    if net.epsilon is not None and not 0 < net.epsilon < 1:
        violations.append(f"epsilon {net.epsilon} must lie strictly between 0 and 1")

    declared: Dict[str, Variable] = {}
    for var in net.variables:
        if not var.name:
            violations.append("variable with an empty name")
        if var.name in declared:
            violations.append(f"duplicate variable name '{var.name}'")
        declared[var.name] = var
        if len(var.values) < 2:
            violations.append(f"variable '{var.name}' needs at least 2 values")
        if any(not value for value in var.values):
            violations.append(f"variable '{var.name}' has an empty value name")
        if len(set(var.values)) != len(var.values):
            violations.append(f"variable '{var.name}' has duplicate value names")

    seen_tables = set()
    for table in net.tables:
        if table.child not in declared:
            violations.append(f"table for undeclared variable '{table.child}'")
            continue
        if table.child in seen_tables:
            violations.append(f"variable '{table.child}' has more than one table")
            continue
        seen_tables.add(table.child)
        violations.extend(_validate_table(net, table, declared, calc))

    for name in declared:
        if name not in seen_tables:
            violations.append(f"variable '{name}' has no table")

    graph = nx.DiGraph()
    graph.add_nodes_from(declared)
    for table in net.tables:
        for parent in table.parents:
            if parent in declared and table.child in declared:
                graph.add_edge(parent, table.child)
    try:
        cycle = nx.find_cycle(graph)
        path = " -> ".join([edge[0] for edge in cycle] + [cycle[0][0]])
        violations.append(f"cycle detected: {path}")
    except nx.NetworkXNoCycle:
        pass

    return violations


def _validate_table(net: Network, table: ConditionalTable,
                    declared: Mapping[str, Variable], calc: Calculus) -> List[str]:
    violations: List[str] = []
    where = f"table '{table.child}'"

    unknown = [p for p in table.parents if p not in declared]
    if unknown:
        violations.append(f"{where}: undeclared parent(s) {', '.join(unknown)}")
        return violations
    if len(set(table.parents)) != len(table.parents):
        violations.append(f"{where}: duplicate parents")
    if table.child in table.parents:
        violations.append(f"{where}: variable is its own parent")

    expected_rows = math.prod(declared[p].cardinality for p in table.parents)
    if len(table.rows) != expected_rows:
        violations.append(f"{where}: has {len(table.rows)} rows, expected {expected_rows}")
        return violations

    width = declared[table.child].cardinality
    contexts = itertools.product(*(declared[p].values for p in table.parents))
    for context, row in zip(contexts, table.rows):
        label = f"{where} row ({', '.join(context)})" if context else f"{where} prior row"
        if len(row) != width:
            violations.append(f"{label}: has {len(row)} degrees, expected {width}")
            continue
        bad = [d for d in row if not calc.conforms(d)]
        if bad:
            violations.append(f"{label}: {bad[0]!r} is not a {calc.value} degree")
            continue
        if calc is Calculus.PROBABILITY:
            if any(d > 1 + PROBABILITY_TOLERANCE for d in row):
                violations.append(f"{label}: probability above 1")
            total = math.fsum(row)
            if abs(total - 1.0) > PROBABILITY_TOLERANCE:
                violations.append(f"{label}: row sums to {total!r}, must sum to 1")
        elif min(row) != 0:
            violations.append(f"{label}: row minimum must be 0 (got {min(row)})")

    return violations
