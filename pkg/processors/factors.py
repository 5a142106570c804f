"""
Dense factors over discrete variables.

A factor maps every full assignment of its scope to a degree. Entries live
in a numpy array whose axes follow the scope order, so the flattened array
is the lexicographic layout (first scope variable most significant).
Probability factors use float64 arrays; kappa factors use object arrays
holding exact Python ints and ``INF``.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Tuple

import numpy as np

from models import Calculus, ConditionalTable, ContractViolationError, Degree, Network


@dataclass(frozen=True, eq=False)
class Factor:
    scope: Tuple[str, ...]
    values: np.ndarray
    calculus: Calculus

    def __post_init__(self):
        values = np.array(self.values, dtype=self.calculus.dtype)
        if values.ndim != len(self.scope):
            raise ContractViolationError(
                f"factor over {len(self.scope)} variables given a {values.ndim}-d array"
            )
        values.flags.writeable = False
        object.__setattr__(self, "scope", tuple(self.scope))
        object.__setattr__(self, "values", values)

    @classmethod
    def unit(cls, calculus: Calculus) -> "Factor":
        """Empty-scope factor holding the combine identity."""
        return cls((), np.array(calculus.unit, dtype=calculus.dtype), calculus)

    @classmethod
    def from_table(cls, net: Network, table: ConditionalTable) -> "Factor":
        """Factor over (parents..., child) for one conditional table."""
        scope = table.parents + (table.child,)
        shape = tuple(net.cardinality(name) for name in scope)
        flat = np.empty(len(table.rows) * net.cardinality(table.child), dtype=net.calculus.dtype)
        flat[:] = [degree for row in table.rows for degree in row]
        return cls(scope, flat.reshape(shape), net.calculus)

    @property
    def cardinalities(self) -> Tuple[int, ...]:
        return tuple(self.values.shape)

    def entries(self) -> Tuple[Degree, ...]:
        """Degrees in lexicographic order, as plain Python numbers."""
        return tuple(self.values.ravel().tolist())

    def _aligned(self, scope: Tuple[str, ...]) -> np.ndarray:
        """View of the values broadcastable against a factor over ``scope``."""
        present = [name for name in scope if name in self.scope]
        permuted = np.transpose(self.values, [self.scope.index(name) for name in present])
        shape = [self.values.shape[self.scope.index(name)] if name in self.scope else 1 for name in scope]
        return permuted.reshape(shape)

    def product(self, other: "Factor") -> "Factor":
        """Combine two factors pointwise over the union of their scopes."""
        if other.calculus is not self.calculus:
            raise ContractViolationError("cannot combine factors of different calculi")
        scope = self.scope + tuple(name for name in other.scope if name not in self.scope)
        combined = self.calculus.combine_ufunc(self._aligned(scope), other._aligned(scope))
        return Factor(scope, combined, self.calculus)

    def marginalize(self, variable: str) -> "Factor":
        """Merge ``variable`` out of the factor."""
        axis = self.scope.index(variable)
        merged = self.calculus.merge_ufunc.reduce(self.values, axis=axis)
        scope = self.scope[:axis] + self.scope[axis + 1:]
        return Factor(scope, np.asarray(merged, dtype=self.calculus.dtype), self.calculus)

    def restrict(self, observed: Mapping[str, int]) -> "Factor":
        """Keep only the slice consistent with observed value indices; observed axes are dropped."""
        values = self.values
        scope = list(self.scope)
        for name, index in observed.items():
            if name in scope:
                axis = scope.index(name)
                values = np.take(values, index, axis=axis)
                scope.pop(axis)
        return Factor(tuple(scope), values, self.calculus)

    def vector(self, variable: str) -> Tuple[Degree, ...]:
        """Entries of a single-variable factor."""
        if self.scope != (variable,):
            raise ContractViolationError(
                f"factor scope {self.scope} is not exactly ({variable},)"
            )
        return self.entries()


def product_all(factors: Iterable[Factor], calculus: Calculus) -> Factor:
    """Combine any number of factors, starting from the unit factor."""
    return reduce(lambda acc, f: acc.product(f), factors, Factor.unit(calculus))
