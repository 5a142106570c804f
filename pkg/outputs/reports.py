"""
Report Tables
Formats engine results as tab-separated tables.

All numeric cells use fixed formatting so command output is byte-stable:
probabilities with PROBABILITY_DECIMALS places, ranks as integers or "inf".
"""

import numbers
from typing import Any, Dict, List, Sequence

import pandas as pd

from config import INFINITY_TOKEN, PROBABILITY_DECIMALS
from generators.abstraction import DiscrepancyReport
from models import INF
from processors.diagnosis import FaultRanking, SweepReport
from processors.inference import PosteriorVector


def format_cell(value: Any) -> str:
    """Render one cell: floats fixed-point, ranks as integers, INF as the token."""
    if value is None:
        return ""
    if value is INF:
        return INFINITY_TOKEN
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return f"{float(value):.{PROBABILITY_DECIMALS}f}"
    return str(value)


def to_tsv(frame: pd.DataFrame) -> str:
    """Tab-separated text with a header row; every cell passes through format_cell."""
    return frame.map(format_cell).to_csv(sep="\t", index=False, lineterminator="\n")


def _table(records: List[Dict[str, Any]], columns: Sequence[str]) -> str:
    # pre-formatted: a None in an int column would otherwise become NaN
    formatted = [{key: format_cell(value) for key, value in record.items()} for record in records]
    return to_tsv(pd.DataFrame.from_records(formatted, columns=list(columns)))


def format_evidence(evidence: Dict[str, str]) -> str:
    return ",".join(f"{name}={value}" for name, value in evidence.items()) or "-"


# ============================================================================
# QUERY / COMPARE
# ============================================================================

def posterior_table(post: PosteriorVector) -> str:
    records = [{"value": v, post.calculus.value: d} for v, d in zip(post.values, post.degrees)]
    return _table(records, ["value", post.calculus.value])


def compare_table(report: DiscrepancyReport, raw: bool = False) -> str:
    columns = ["value", "c1", "c2", "difference"] + (["c1_raw"] if raw else [])
    records = []
    for record in report.records:
        row = {
            "value": record.value,
            "c1": record.c1,
            "c2": record.c2,
            "difference": record.difference if record.difference is not None else record.note,
        }
        if raw:
            row["c1_raw"] = record.c1_raw
        records.append(row)

    if report.orderings_agree:
        verdict = "compatible"
    else:
        verdict = "inverted " + " ".join(f"{a}<{b}" for a, b in report.agreement.inverted_pairs)
    return _table(records, columns) + f"orderings\t{verdict}\n"


# ============================================================================
# DIAGNOSIS
# ============================================================================

def ranking_table(ranking: FaultRanking) -> str:
    records = [
        {
            "rank": position,
            "fault": row.fault,
            "value": row.value,
            ranking.calculus.value: row.degree,
            "mark": row.annotation,
        }
        for position, row in enumerate(ranking.rows, start=1)
    ]
    return _table(records, ["rank", "fault", "value", ranking.calculus.value, "mark"])


def ordering_text(ranking: FaultRanking) -> str:
    """One-line ordering with annotations, e.g. ``fuel-pump 0?, plugs 0?, battery 1``."""
    return ", ".join(
        f"{row.fault} {format_cell(row.degree)}{row.annotation}" for row in ranking.rows
    )


def sweep_ordering_table(report: SweepReport) -> str:
    records = []
    for row in report.ordering_rows:
        records.append({
            "run": row.run,
            "evidence": format_evidence(row.evidence),
            "calculus": row.label,
            "ordering": ordering_text(row.ranking) if row.ranking is not None else "",
            "score": row.agreement.score if row.agreement is not None else None,
            "comparable": row.agreement.comparable if row.agreement is not None else None,
            "kendall_tau": row.agreement.kendall_tau if row.agreement is not None else None,
            "levels": row.levels,
            "error": row.error,
        })
    return _table(records, ["run", "evidence", "calculus", "ordering", "score", "comparable", "kendall_tau", "levels", "error"])


def sweep_belief_table(report: SweepReport) -> str:
    records = [
        {
            "run": cell.run,
            "epsilon": f"{cell.epsilon:g}",
            "fault": cell.fault,
            "c2": cell.c2,
            "c1": cell.c1_text,
        }
        for cell in report.belief_cells
    ]
    return _table(records, ["run", "epsilon", "fault", "c2", "c1"])
