"""
Fault Diagnosis
Ranks fault hypotheses under either calculus, compares the orderings and
sweeps epsilon over a set of evidence runs (probability row plus one kappa
row per epsilon, and per-fault C1 vs C2 belief cells).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from config import RUN_TIMEOUT_SECONDS, SWEEP_WORKERS
from generators.abstraction import EpsilonLike, EpsilonParameter, c1_pipeline, translate_network
from models import Assignment, Calculus, ContractViolationError, Degree, Network, check_assignment
from processors.inference import PosteriorVector, eliminate_posterior
from processors.ordering import OrderingAgreement, ordering_agreement
from utils.logger import logger
from utils.parallel_runner import ParallelRunner

# Table sigils
BELIEVED_MARK = "+"
UNCOMMITTED_MARK = "?"
DIFFERS_MARK = "*"

# Belief cell states for a fault variable
FAULT_BELIEVED = "bad"
FAULT_DISBELIEVED = "ok"
FAULT_UNCOMMITTED = "?"

# Probability keys closer than this count as ties
PROBABILITY_TIE_DECIMALS = 12


# ============================================================================
# TYPES
# ============================================================================

@dataclass(frozen=True)
class FaultSet:
    """Fault hypotheses as (variable, faulty value) pairs, in declaration order."""

    faults: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "faults", tuple((str(v), str(x)) for v, x in self.faults))
        names = [name for name, _ in self.faults]
        if len(set(names)) != len(names):
            raise ContractViolationError("a fault variable is listed more than once")

    def __iter__(self):
        return iter(self.faults)

    def __len__(self):
        return len(self.faults)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.faults)

    def validate(self, net: Network) -> None:
        check_assignment(net, dict(self.faults))


@dataclass(frozen=True)
class FaultRow:
    fault: str
    value: str
    degree: Degree
    annotation: str = ""


@dataclass(frozen=True)
class FaultRanking:
    """Fault rows, most plausible first."""

    rows: Tuple[FaultRow, ...]
    calculus: Calculus
    evidence: Dict[str, str] = field(default_factory=dict)
    faults: FaultSet = FaultSet(())

    def degree_of(self, fault: str) -> Degree:
        for row in self.rows:
            if row.fault == fault:
                return row.degree
        raise ContractViolationError(f"'{fault}' is not in this ranking")

    @property
    def levels(self) -> int:
        """Number of distinct degrees across the rows."""
        return len({_sort_key(self.calculus, row.degree) for row in self.rows})


def _sort_key(calc: Calculus, degree: Degree):
    if calc is Calculus.PROBABILITY:
        return round(calc.plausibility_key(degree), PROBABILITY_TIE_DECIMALS)
    return calc.plausibility_key(degree)


def fault_state(posterior: PosteriorVector, faulty: str) -> str:
    """
    Belief state of a fault variable under a kappa posterior.

    "bad" when the faulty value has rank 0 and every other value is
    disbelieved, "?" when another value also has rank 0, "ok" otherwise.
    """
    degree = posterior.degree_of(faulty)
    if degree != 0:
        return FAULT_DISBELIEVED
    others = [d for v, d in zip(posterior.values, posterior.degrees) if v != faulty]
    if all(d != 0 for d in others):
        return FAULT_BELIEVED
    return FAULT_UNCOMMITTED


def _annotation(posterior: PosteriorVector, faulty: str) -> str:
    if posterior.calculus is not Calculus.KAPPA:
        return ""
    state = fault_state(posterior, faulty)
    if state == FAULT_BELIEVED:
        return BELIEVED_MARK
    if state == FAULT_UNCOMMITTED:
        return UNCOMMITTED_MARK
    return ""


# ============================================================================
# RANKING AND COMPARISON
# ============================================================================

def rank_faults(net: Network, evidence: Assignment, faults: FaultSet) -> FaultRanking:
    """
    One posterior query per fault variable, sorted most plausible first.

    Sorting is stable, so equal degrees keep fault declaration order.
    """
    faults.validate(net)
    rows = []
    for name, faulty in faults:
        posterior = eliminate_posterior(net, evidence, name)
        rows.append(FaultRow(name, faulty, posterior.degree_of(faulty), _annotation(posterior, faulty)))

    rows.sort(key=lambda row: _sort_key(net.calculus, row.degree))
    return FaultRanking(tuple(rows), net.calculus, dict(evidence), faults)


def compare_orderings(a: FaultRanking, b: FaultRanking) -> OrderingAgreement:
    """Pairwise agreement of two fault rankings; ties in either are compatible with any order."""
    names_a = sorted(row.fault for row in a.rows)
    names_b = sorted(row.fault for row in b.rows)
    if names_a != names_b:
        raise ContractViolationError(
            f"rankings cover different faults: {names_a} vs {names_b}"
        )

    labels = a.faults.names if sorted(a.faults.names) == names_a else tuple(names_a)
    keys_a = [_sort_key(a.calculus, a.degree_of(name)) for name in labels]
    keys_b = [_sort_key(b.calculus, b.degree_of(name)) for name in labels]
    return ordering_agreement(labels, keys_a, keys_b)


# ============================================================================
# EPSILON SWEEP
# ============================================================================

PROBABILITY_ROW = "Pr"


@dataclass(frozen=True)
class OrderingRow:
    """One ordering-table row: a fault ordering for one run under one calculus."""

    run: int
    evidence: Dict[str, str]
    epsilon: Optional[float]
    ranking: Optional[FaultRanking] = None
    agreement: Optional[OrderingAgreement] = None
    error: Optional[str] = None

    @property
    def label(self) -> str:
        return PROBABILITY_ROW if self.epsilon is None else f"kappa eps={self.epsilon:g}"

    @property
    def levels(self) -> Optional[int]:
        return self.ranking.levels if self.ranking is not None else None


@dataclass(frozen=True)
class BeliefCell:
    """One belief-table cell: C2 and C1 belief states of a fault at one epsilon."""

    run: int
    epsilon: float
    fault: str
    c2: str
    c1: str

    @property
    def differs(self) -> bool:
        return self.c1 != self.c2

    @property
    def c1_text(self) -> str:
        return f"{self.c1}{DIFFERS_MARK}" if self.differs else self.c1


@dataclass(frozen=True)
class SweepReport:
    epsilons: Tuple[float, ...]
    faults: FaultSet
    ordering_rows: Tuple[OrderingRow, ...]
    belief_cells: Tuple[BeliefCell, ...]

    def rows_for(self, run: int) -> List[OrderingRow]:
        return [row for row in self.ordering_rows if row.run == run]

    @property
    def failed_runs(self) -> List[int]:
        return sorted({row.run for row in self.ordering_rows if row.error})

    def level_profile(self, run: int) -> Tuple[Optional[int], ...]:
        """Distinct kappa levels of ``run``, one entry per epsilon in sweep order."""
        return tuple(row.levels for row in self.rows_for(run) if row.epsilon is not None)

    @property
    def level_rises(self) -> List[int]:
        """
        Runs whose kappa ranking gains levels when epsilon shrinks.

        A smaller epsilon widens every rank interval, so levels usually merge.
        Only translated probabilities are guaranteed to, and only between
        nested epsilons (eps and a power of it); the network route can split
        a level when the grids are not nested.
        """
        order = sorted(range(len(self.epsilons)), key=lambda i: -self.epsilons[i])
        rising = []
        for run in sorted({row.run for row in self.ordering_rows if not row.error}):
            profile = self.level_profile(run)
            levels = [profile[i] for i in order]
            if any(finer < coarser for finer, coarser in zip(levels, levels[1:])):
                rising.append(run)
        return rising


def _sweep_run(net: Network, kappa_nets: Dict[float, Network], run: int,
               evidence: Assignment, faults: FaultSet) -> Tuple[List[OrderingRow], List[BeliefCell]]:
    evidence = dict(evidence)
    probability = rank_faults(net, evidence, faults)
    rows = [OrderingRow(run, evidence, None, probability)]
    cells: List[BeliefCell] = []

    for eps, kappa_net in kappa_nets.items():
        kappa = rank_faults(kappa_net, evidence, faults)
        agreement = compare_orderings(probability, kappa)
        rows.append(OrderingRow(run, evidence, eps, kappa, agreement))
        logger.debug(f"run {run} eps={eps:g}: score {agreement.score:.3f}, {kappa.levels} levels")

        for name, faulty in faults:
            c2 = eliminate_posterior(kappa_net, evidence, name)
            c1 = c1_pipeline(net, evidence, name, eps)
            cells.append(BeliefCell(run, eps, name, fault_state(c2, faulty), fault_state(c1, faulty)))

    return rows, cells


def epsilon_sweep(net: Network, runs: Sequence[Assignment], faults: FaultSet,
                  epsilons: Sequence[EpsilonLike], max_workers: Optional[int] = None,
                  timeout_per_run: Optional[int] = None) -> SweepReport:
    """
    Diagnose every evidence run at every epsilon.

    Runs are evaluated concurrently; a run that fails (impossible evidence)
    is reported in its rows and the sweep continues.
    """
    if net.calculus is not Calculus.PROBABILITY:
        raise ContractViolationError("epsilon_sweep needs a probability network")
    faults.validate(net)
    for evidence in runs:
        check_assignment(net, evidence)

    eps_values = tuple(EpsilonParameter.coerce(e).value for e in epsilons)
    kappa_nets = {eps: translate_network(net, eps) for eps in eps_values}

    logger.info(f"🔄 Sweeping {len(runs)} runs x {len(eps_values)} epsilons over {len(faults)} faults")
    runner = ParallelRunner(
        max_workers=max_workers or SWEEP_WORKERS,
        timeout_per_task=timeout_per_run or RUN_TIMEOUT_SECONDS,
    )
    tasks = {
        f"run {index}": (lambda index=index, evidence=evidence:
                         _sweep_run(net, kappa_nets, index, evidence, faults))
        for index, evidence in enumerate(runs, start=1)
    }
    results = runner.run_all(tasks)

    ordering_rows: List[OrderingRow] = []
    belief_cells: List[BeliefCell] = []
    for index, (name, result) in enumerate(results.items(), start=1):
        if result['success']:
            rows, cells = result['data']
            ordering_rows.extend(rows)
            belief_cells.extend(cells)
            continue

        logger.warning(f"⚠️  {name}: {result['error']}")
        evidence = dict(runs[index - 1])
        for eps in (None,) + eps_values:
            ordering_rows.append(OrderingRow(index, evidence, eps, error=result['error']))

    report = SweepReport(eps_values, faults, tuple(ordering_rows), tuple(belief_cells))
    if report.level_rises:
        logger.debug(f"runs gaining kappa levels as epsilon shrinks: {report.level_rises}")
    return report
