"""
Random networks for the property harnesses.

Every generator takes a seeded ``numpy.random.Generator`` so a failing case
can be replayed from its seed.
"""

from typing import Dict, Iterable, List

import numpy as np

from models import INF, Calculus, ConditionalTable, Network, Variable


def _parents(rng: np.random.Generator, position: int, max_parents: int) -> List[int]:
    count = int(rng.integers(0, min(max_parents, position) + 1))
    if count == 0:
        return []
    return sorted(int(p) for p in rng.choice(position, size=count, replace=False))


def _probability_row(rng: np.random.Generator, width: int, zero_chance: float) -> tuple:
    row = rng.dirichlet(np.ones(width))
    if zero_chance and rng.random() < zero_chance:
        row[int(rng.integers(0, width))] = 0.0
        row = row / row.sum()
    return tuple(float(p) for p in row)


def _kappa_row(rng: np.random.Generator, width: int, max_rank: int, infinity_chance: float) -> tuple:
    ranks: List = [int(r) for r in rng.integers(0, max_rank + 1, size=width)]
    if infinity_chance:
        for i in range(width):
            if rng.random() < infinity_chance:
                ranks[i] = INF
    if all(r is INF for r in ranks):
        ranks[int(rng.integers(0, width))] = 0
    lowest = min(ranks)
    return tuple(r - lowest for r in ranks)


def random_network(rng: np.random.Generator, n_nodes: int, calculus: Calculus,
                   max_parents: int = 2, max_values: int = 3, max_rank: int = 4,
                   zero_chance: float = 0.0, infinity_chance: float = 0.0) -> Network:
    """
    Random DAG over V1..Vn with random tables.

    Edges only run from lower to higher index; variables are declared in
    shuffled order so declaration order is not a topological order.
    """
    calc = Calculus(calculus)
    names = [f"V{i}" for i in range(1, n_nodes + 1)]
    cards = [int(rng.integers(2, max_values + 1)) for _ in names]

    tables = []
    for position, name in enumerate(names):
        parents = _parents(rng, position, max_parents)
        rows = int(np.prod([cards[p] for p in parents])) if parents else 1
        if calc is Calculus.PROBABILITY:
            table_rows = [_probability_row(rng, cards[position], zero_chance) for _ in range(rows)]
        else:
            table_rows = [_kappa_row(rng, cards[position], max_rank, infinity_chance) for _ in range(rows)]
        tables.append(ConditionalTable(name, tuple(names[p] for p in parents), tuple(table_rows)))

    variables = [Variable(name, tuple(f"v{k}" for k in range(card))) for name, card in zip(names, cards)]
    order = [int(i) for i in rng.permutation(n_nodes)]
    return Network(calc, tuple(variables[i] for i in order), tuple(tables[i] for i in order))


def random_power_network(rng: np.random.Generator, n_nodes: int, epsilon: float,
                         max_parents: int = 2, max_power: int = 3) -> Network:
    """
    Binary probability network whose rows are (eps^k, 1 - eps^k) in random orientation.
    """
    names = [f"V{i}" for i in range(1, n_nodes + 1)]
    tables = []
    for position, name in enumerate(names):
        parents = _parents(rng, position, max_parents)
        rows = []
        for _ in range(2 ** len(parents)):
            small = epsilon ** int(rng.integers(0, max_power + 1))
            row = (small, 1.0 - small) if rng.random() < 0.5 else (1.0 - small, small)
            rows.append(row)
        tables.append(ConditionalTable(name, tuple(names[p] for p in parents), tuple(rows)))

    variables = tuple(Variable(name, ("on", "off")) for name in names)
    return Network(Calculus.PROBABILITY, variables, tuple(tables))


def random_evidence(rng: np.random.Generator, net: Network, max_observed: int,
                    exclude: Iterable[str] = ()) -> Dict[str, str]:
    """Random partial assignment over variables not in ``exclude``."""
    excluded = set(exclude)
    candidates = [v for v in net.variables if v.name not in excluded]
    count = int(rng.integers(0, min(max_observed, len(candidates)) + 1))
    chosen = rng.choice(len(candidates), size=count, replace=False) if count else []
    evidence = {}
    for index in sorted(int(i) for i in chosen):
        variable = candidates[index]
        evidence[variable.name] = variable.values[int(rng.integers(0, variable.cardinality))]
    return evidence


def random_elimination_order(rng: np.random.Generator, net: Network, keep: Iterable[str]) -> List[str]:
    """A uniformly shuffled permutation of the eliminable variables."""
    kept = set(keep)
    eliminable = [name for name in net.names if name not in kept]
    return [eliminable[int(i)] for i in rng.permutation(len(eliminable))]
