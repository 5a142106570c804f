"""
Closed-form chain and fork models

Chain:  X1 -> X2 -> ... -> Xn, query X_i given X1 = true
Fork:   Y -> {X1, ..., Xn}, query Y or Xn given X1..Xi = true

The closed forms here are plain recurrences over the table numbers; they
never touch the factor engine, so engine-vs-closed-form agreement is a check
between two independent implementations. The same module builds the
explicit networks and the figure-data tables.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import pandas as pd

from generators.abstraction import EpsilonParameter, translate_network, translate_vector
from models import (
    INF,
    Calculus,
    ConditionalTable,
    ContractViolationError,
    Degree,
    Network,
    Variable,
)
from processors.inference import PosteriorVector, classify_belief, normalize_vector

TRUE = "true"
FALSE = "false"
BINARY = (TRUE, FALSE)

# Marker written in place of an infinite belief margin
CERTAIN = "certain"


def _check_probability(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ContractViolationError(f"{name} must be a probability (got {value})")


# ============================================================================
# CHAIN
# ============================================================================

@dataclass(frozen=True)
class ChainSpec:
    length: int = 10
    prior: float = 0.5
    persistence: float = 0.8   # Pr[x_i+ | x_{i-1}+]
    innovation: float = 0.2    # Pr[x_i+ | x_{i-1}-]
    epsilon: float = 0.2

    def __post_init__(self):
        if self.length < 2:
            raise ContractViolationError(f"a chain needs at least 2 nodes (got {self.length})")
        _check_probability("prior", self.prior)
        _check_probability("persistence", self.persistence)
        _check_probability("innovation", self.innovation)
        EpsilonParameter(self.epsilon)


def chain_network(spec: ChainSpec, calculus: Calculus = Calculus.PROBABILITY) -> Network:
    """X1..Xn chain; the kappa variant is the probability chain translated at spec.epsilon."""
    variables = tuple(Variable(f"X{i}", BINARY) for i in range(1, spec.length + 1))
    tables = [ConditionalTable("X1", (), ((spec.prior, 1.0 - spec.prior),))]
    for i in range(2, spec.length + 1):
        tables.append(ConditionalTable(
            f"X{i}", (f"X{i - 1}",),
            (
                (spec.persistence, 1.0 - spec.persistence),
                (spec.innovation, 1.0 - spec.innovation),
            ),
        ))
    net = Network(Calculus.PROBABILITY, variables, tuple(tables))
    if Calculus(calculus) is Calculus.KAPPA:
        return translate_network(net, spec.epsilon)
    return net


def _check_chain_index(spec: ChainSpec, i: int) -> None:
    if not 2 <= i <= spec.length:
        raise ContractViolationError(f"chain index {i} outside 2..{spec.length}")


def chain_posterior_vector(spec: ChainSpec, i: int, calculus: Calculus) -> PosteriorVector:
    """(true, false) degrees of X_i given X1 = true."""
    _check_chain_index(spec, i)
    calc = Calculus(calculus)

    if calc is Calculus.PROBABILITY:
        p_true = 1.0
        for _ in range(2, i + 1):
            p_true = p_true * spec.persistence + (1.0 - p_true) * spec.innovation
        return PosteriorVector(f"X{i}", BINARY, (p_true, 1.0 - p_true), calc)

    # kappa: min-sum recurrence over the translated link rows
    given_true = translate_vector((spec.persistence, 1.0 - spec.persistence), spec.epsilon)
    given_false = translate_vector((spec.innovation, 1.0 - spec.innovation), spec.epsilon)
    ranks: Tuple[Degree, Degree] = (0, INF)
    for _ in range(2, i + 1):
        ranks = (
            min(ranks[0] + given_true[0], ranks[1] + given_false[0]),
            min(ranks[0] + given_true[1], ranks[1] + given_false[1]),
        )
    return PosteriorVector(f"X{i}", BINARY, normalize_vector(calc, ranks), calc)


def chain_posterior(spec: ChainSpec, i: int, calculus: Calculus) -> Degree:
    """Degree of x_i+ given x_1+."""
    return chain_posterior_vector(spec, i, calculus).degree_of(TRUE)


# ============================================================================
# FORK
# ============================================================================

@dataclass(frozen=True)
class ForkSpec:
    """
    Common cause Y with n binary effects.

    The kappa quantification is given directly, not translated:
    kappa_prior = k[y+], kappa_link_pos = k[x_i- | y+], kappa_link_neg = k[x_i+ | y-].
    """

    effects: int = 10
    prior: float = 0.04
    p_given_pos: float = 0.8
    p_given_neg: float = 0.2
    kappa_prior: int = 5
    kappa_link_pos: int = 1
    kappa_link_neg: int = 1

    def __post_init__(self):
        if self.effects < 1:
            raise ContractViolationError(f"a fork needs at least one effect (got {self.effects})")
        _check_probability("prior", self.prior)
        _check_probability("p_given_pos", self.p_given_pos)
        _check_probability("p_given_neg", self.p_given_neg)
        for name in ("kappa_prior", "kappa_link_pos", "kappa_link_neg"):
            rank = getattr(self, name)
            if isinstance(rank, bool) or not isinstance(rank, int) or rank < 0:
                raise ContractViolationError(f"{name} must be a nonnegative integer (got {rank!r})")

    @property
    def last_effect(self) -> str:
        return f"X{self.effects}"


def _fork_rows(spec: ForkSpec, calc: Calculus):
    if calc is Calculus.PROBABILITY:
        return (
            (spec.prior, 1.0 - spec.prior),
            (spec.p_given_pos, 1.0 - spec.p_given_pos),
            (spec.p_given_neg, 1.0 - spec.p_given_neg),
        )
    return (
        (spec.kappa_prior, 0),
        (0, spec.kappa_link_pos),
        (spec.kappa_link_neg, 0),
    )


def fork_network(spec: ForkSpec, calculus: Calculus = Calculus.PROBABILITY) -> Network:
    """Explicit Y -> {X1..Xn} network in either calculus."""
    calc = Calculus(calculus)
    root, given_pos, given_neg = _fork_rows(spec, calc)
    variables = (Variable("Y", BINARY),) + tuple(
        Variable(f"X{i}", BINARY) for i in range(1, spec.effects + 1)
    )
    tables = [ConditionalTable("Y", (), (root,))]
    tables.extend(
        ConditionalTable(f"X{i}", ("Y",), (given_pos, given_neg))
        for i in range(1, spec.effects + 1)
    )
    return Network(calc, variables, tuple(tables))


def fork_evidence(observed: int) -> dict:
    return {f"X{i}": TRUE for i in range(1, observed + 1)}


def fork_posterior(spec: ForkSpec, observed: int, target: str, calculus: Calculus) -> PosteriorVector:
    """
    Posterior of ``target`` given X1..X_observed = true.

    ``target`` is "Y" or any unobserved effect (all effects are
    exchangeable, so every unobserved X_j answers like X_n).
    """
    calc = Calculus(calculus)
    if not 0 <= observed <= spec.effects - 1:
        raise ContractViolationError(f"observed count {observed} outside 0..{spec.effects - 1}")
    effect_targets = {f"X{j}" for j in range(observed + 1, spec.effects + 1)}
    if target != "Y" and target not in effect_targets:
        raise ContractViolationError(f"target must be Y or an unobserved effect (got '{target}')")

    root, given_pos, given_neg = _fork_rows(spec, calc)

    if calc is Calculus.PROBABILITY:
        weights = (root[0] * given_pos[0] ** observed, root[1] * given_neg[0] ** observed)
        if target == "Y":
            raw = weights
        else:
            raw = (
                weights[0] * given_pos[0] + weights[1] * given_neg[0],
                weights[0] * given_pos[1] + weights[1] * given_neg[1],
            )
    else:
        weights = (root[0] + observed * given_pos[0], root[1] + observed * given_neg[0])
        if target == "Y":
            raw = weights
        else:
            raw = (
                min(weights[0] + given_pos[0], weights[1] + given_neg[0]),
                min(weights[0] + given_pos[1], weights[1] + given_neg[1]),
            )

    return PosteriorVector(target, BINARY, normalize_vector(calc, raw), calc)


# ============================================================================
# FIGURE DATA
# ============================================================================

def belief_margin(post: PosteriorVector):
    """k[z-] - k[z+] for a binary kappa posterior; infinite margins become CERTAIN."""
    pos, neg = post.degree_of(TRUE), post.degree_of(FALSE)
    if neg is INF:
        return CERTAIN
    if pos is INF:
        return f"-{CERTAIN}"
    return neg - pos


def emit_figure_data(figure: int, spec=None, points: Optional[Iterable[int]] = None) -> pd.DataFrame:
    """
    Figure data as a table, one row per x value.

    4: chain distance i-1 vs. Pr[x_i+ | x_1+] and the kappa margin of X_i
    5: observed effects i vs. Pr[y+] and Pr[x_n+]
    6: observed effects i vs. kappa margins of Y and X_n
    """
    if figure == 4:
        spec = spec or ChainSpec()
        distances = list(points) if points is not None else list(range(1, spec.length))
        records = []
        for distance in distances:
            i = distance + 1
            records.append({
                "distance": distance,
                "p_true": chain_posterior(spec, i, Calculus.PROBABILITY),
                "kappa_margin": belief_margin(chain_posterior_vector(spec, i, Calculus.KAPPA)),
            })
        return pd.DataFrame.from_records(records, columns=["distance", "p_true", "kappa_margin"])

    if figure in (5, 6):
        spec = spec or ForkSpec()
        observed = list(points) if points is not None else list(range(0, spec.effects))
        target = spec.last_effect
        records = []
        for i in observed:
            if figure == 5:
                records.append({
                    "observed": i,
                    "p_y_true": fork_posterior(spec, i, "Y", Calculus.PROBABILITY).degree_of(TRUE),
                    "p_xn_true": fork_posterior(spec, i, target, Calculus.PROBABILITY).degree_of(TRUE),
                })
            else:
                records.append({
                    "observed": i,
                    "margin_y": belief_margin(fork_posterior(spec, i, "Y", Calculus.KAPPA)),
                    "margin_xn": belief_margin(fork_posterior(spec, i, target, Calculus.KAPPA)),
                })
        columns = ["observed", "p_y_true", "p_xn_true"] if figure == 5 else ["observed", "margin_y", "margin_xn"]
        return pd.DataFrame.from_records(records, columns=columns)

    raise ContractViolationError(f"unknown figure {figure}; expected 4, 5 or 6")


# ============================================================================
# COMMAND TABLES
# ============================================================================

def chain_table(spec: ChainSpec) -> pd.DataFrame:
    """Per node i >= 2: Pr[x_i+ | x_1+], kappa ranks of X_i and its belief status."""
    records = []
    for i in range(2, spec.length + 1):
        kappa = chain_posterior_vector(spec, i, Calculus.KAPPA)
        records.append({
            "i": i,
            "p_true": chain_posterior(spec, i, Calculus.PROBABILITY),
            "kappa_true": kappa.degree_of(TRUE),
            "kappa_false": kappa.degree_of(FALSE),
            "belief": str(classify_belief(kappa)),
        })
    return pd.DataFrame.from_records(records, columns=["i", "p_true", "kappa_true", "kappa_false", "belief"])


def fork_table(spec: ForkSpec, observed: int) -> pd.DataFrame:
    """Y and X_n given ``observed`` true effects, in both calculi."""
    records: List[dict] = []
    for target in ("Y", spec.last_effect):
        kappa = fork_posterior(spec, observed, target, Calculus.KAPPA)
        records.append({
            "variable": target,
            "p_true": fork_posterior(spec, observed, target, Calculus.PROBABILITY).degree_of(TRUE),
            "kappa_true": kappa.degree_of(TRUE),
            "kappa_false": kappa.degree_of(FALSE),
            "belief": str(classify_belief(kappa)),
        })
    return pd.DataFrame.from_records(records, columns=["variable", "p_true", "kappa_true", "kappa_false", "belief"])
