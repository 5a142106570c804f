"""
Network Documents
JSON text format for networks, plus the evidence and fault-list syntax used
on the command line.

Document shape:

    {
      "calculus": "probability" | "kappa",
      "epsilon": 0.2,                               (optional)
      "variables": [{"name": "X1", "values": ["true", "false"]}, ...],
      "tables": [
        {"child": "X2", "parents": ["X1"],
         "rows": [{"parents": ["true"], "degrees": [0.8, 0.2]}, ...]},
        ...
      ]
    }

Rows are keyed by explicit parent values, so their order in the file does
not matter. Kappa degrees are nonnegative integers or the token "inf".
"""

import json
import numbers
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from config import INFINITY_TOKEN
from models import (
    INF,
    Calculus,
    ConditionalTable,
    Degree,
    ModelError,
    Network,
    NetworkValidationError,
    Variable,
    validate_network,
)
from utils.logger import logger

OPTIONAL_KEYS = {"epsilon", "description"}
REQUIRED_KEYS = {"calculus", "variables", "tables"}


class NetworkDocumentError(ModelError):
    """Raised when a network document is malformed."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class EvidenceSyntaxError(ModelError):
    """Raised for a malformed Var=value list."""
    pass


# ============================================================================
# PARSING
# ============================================================================

def _reject_duplicate_keys(pairs: List[Tuple[str, Any]]) -> Dict[str, Any]:
    result: Dict[str, Any] = {}
    for key, value in pairs:
        if key in result:
            raise NetworkDocumentError(f"duplicate key '{key}'")
        result[key] = value
    return result


def _expect(condition: bool, message: str) -> None:
    if not condition:
        raise NetworkDocumentError(message)


def _string_list(value: Any, where: str) -> List[str]:
    _expect(isinstance(value, list) and all(isinstance(v, str) for v in value),
            f"{where} must be a list of strings")
    return list(value)


def _degree(calc: Calculus, raw: Any, where: str) -> Degree:
    if calc is Calculus.KAPPA:
        if raw == INFINITY_TOKEN:
            return INF
        _expect(isinstance(raw, int) and not isinstance(raw, bool) and raw >= 0,
                f"{where}: kappa degree {raw!r} must be a nonnegative integer or \"{INFINITY_TOKEN}\"")
        return raw
    _expect(isinstance(raw, numbers.Real) and not isinstance(raw, bool),
            f"{where}: probability degree {raw!r} must be a number")
    return float(raw)


def _parse_variables(doc: Dict[str, Any]) -> List[Variable]:
    _expect(isinstance(doc["variables"], list), "'variables' must be a list")
    variables = []
    for position, entry in enumerate(doc["variables"], start=1):
        _expect(isinstance(entry, dict) and set(entry) == {"name", "values"},
                f"variable #{position} must have exactly the keys 'name' and 'values'")
        _expect(isinstance(entry["name"], str), f"variable #{position}: name must be a string")
        values = _string_list(entry["values"], f"variable '{entry['name']}' values")
        variables.append(Variable(entry["name"], tuple(values)))
    return variables


def _parse_table(entry: Any, position: int, domains: Dict[str, Variable], calc: Calculus) -> ConditionalTable:
    _expect(isinstance(entry, dict) and set(entry) == {"child", "parents", "rows"},
            f"table #{position} must have exactly the keys 'child', 'parents' and 'rows'")
    child = entry["child"]
    _expect(isinstance(child, str), f"table #{position}: child must be a string")
    where = f"table '{child}'"
    parents = _string_list(entry["parents"], f"{where} parents")
    for name in [child] + parents:
        _expect(name in domains, f"{where}: undeclared variable '{name}'")
    _expect(isinstance(entry["rows"], list), f"{where}: rows must be a list")

    keyed: Dict[Tuple[str, ...], Tuple[Degree, ...]] = {}
    for row in entry["rows"]:
        _expect(isinstance(row, dict) and set(row) == {"parents", "degrees"},
                f"{where}: each row must have exactly the keys 'parents' and 'degrees'")
        key = tuple(_string_list(row["parents"], f"{where} row key"))
        _expect(len(key) == len(parents),
                f"{where}: row key {list(key)} has {len(key)} values, expected {len(parents)}")
        for parent, value in zip(parents, key):
            _expect(value in domains[parent].values,
                    f"{where}: row key value '{value}' is not a value of '{parent}'")
        _expect(key not in keyed, f"{where}: duplicate row key {list(key)}")
        _expect(isinstance(row["degrees"], list), f"{where} row {list(key)}: degrees must be a list")
        keyed[key] = tuple(_degree(calc, d, f"{where} row {list(key)}") for d in row["degrees"])

    rows = []
    for context in _parent_contexts(parents, domains):
        if context not in keyed:
            assignment = ", ".join(f"{p}={v}" for p, v in zip(parents, context))
            raise NetworkDocumentError(f"{where}: missing row for parents ({assignment})")
        rows.append(keyed[context])
    return ConditionalTable(child, tuple(parents), tuple(rows))


def _parent_contexts(parents: List[str], domains: Dict[str, Variable]):
    contexts: List[Tuple[str, ...]] = [()]
    for parent in parents:
        contexts = [c + (value,) for c in contexts for value in domains[parent].values]
    return contexts


def parse_network(text: str) -> Network:
    """
    Parse and validate a network document.

    Raises:
        NetworkDocumentError: malformed JSON (with line/column) or document shape
        NetworkValidationError: the network breaks a model invariant
    """
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as e:
        raise NetworkDocumentError(e.msg, e.lineno, e.colno) from None

    _expect(isinstance(doc, dict), "document must be a JSON object")
    missing = sorted(REQUIRED_KEYS - set(doc))
    _expect(not missing, f"missing key(s): {', '.join(missing)}")
    unknown = sorted(set(doc) - REQUIRED_KEYS - OPTIONAL_KEYS)
    _expect(not unknown, f"unknown key(s): {', '.join(unknown)}")

    try:
        calc = Calculus(doc["calculus"])
    except ValueError:
        raise NetworkDocumentError(
            f"calculus must be 'probability' or 'kappa' (got {doc['calculus']!r})"
        ) from None

    epsilon = doc.get("epsilon")
    _expect(epsilon is None or (isinstance(epsilon, numbers.Real) and not isinstance(epsilon, bool)),
            "epsilon must be a number")

    variables = _parse_variables(doc)
    domains = {v.name: v for v in variables}
    _expect(len(domains) == len(variables), "duplicate variable name")
    _expect(isinstance(doc["tables"], list), "'tables' must be a list")
    tables = [_parse_table(entry, i, domains, calc) for i, entry in enumerate(doc["tables"], start=1)]

    net = Network(calc, tuple(variables), tuple(tables),
                  epsilon=float(epsilon) if epsilon is not None else None)
    violations = validate_network(net)
    if violations:
        raise NetworkValidationError(violations)

    logger.debug(f"parsed {calc.value} network with {len(variables)} variables")
    return net


# ============================================================================
# SERIALIZATION
# ============================================================================

def _degree_token(degree: Degree):
    if degree is INF:
        return INFINITY_TOKEN
    return degree


def network_to_document(net: Network) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"calculus": net.calculus.value}
    if net.epsilon is not None:
        doc["epsilon"] = net.epsilon
    doc["variables"] = [{"name": v.name, "values": list(v.values)} for v in net.variables]
    doc["tables"] = [
        {
            "child": table.child,
            "parents": list(table.parents),
            "rows": [
                {"parents": list(context), "degrees": [_degree_token(d) for d in row]}
                for context, row in zip(net.parent_assignments(table.parents), table.rows)
            ],
        }
        for table in net.tables
    ]
    return doc


def serialize_network(net: Network) -> str:
    """Document text; floats are written with full repr precision so parsing is lossless."""
    return json.dumps(network_to_document(net), indent=2, ensure_ascii=False) + "\n"


def load_network(path: Union[str, Path]) -> Network:
    """Read and parse a document; OSError propagates for unreadable files."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_network(text)


def save_network(net: Network, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_network(net), encoding="utf-8")


# ============================================================================
# EVIDENCE AND FAULT SYNTAX
# ============================================================================

def _pairs(text: str, what: str) -> List[Tuple[str, str]]:
    pairs: List[Tuple[str, str]] = []
    if not text.strip():
        return pairs
    for part in text.split(","):
        if "=" not in part:
            raise EvidenceSyntaxError(f"malformed {what} '{part.strip()}': expected Var=value")
        name, value = (s.strip() for s in part.split("=", 1))
        if not name or not value:
            raise EvidenceSyntaxError(f"malformed {what} '{part.strip()}': empty variable or value")
        pairs.append((name, value))
    return pairs


def parse_evidence(text: str) -> Dict[str, str]:
    """``Var=value[,Var=value...]``; names and values are case-sensitive."""
    evidence: Dict[str, str] = {}
    for name, value in _pairs(text, "evidence"):
        if name in evidence and evidence[name] != value:
            raise EvidenceSyntaxError(f"conflicting evidence for '{name}': {evidence[name]} vs {value}")
        evidence[name] = value
    return evidence


def parse_faults(text: str) -> List[Tuple[str, str]]:
    """``Var=faulty_value[,...]`` in declaration order."""
    pairs = _pairs(text, "fault")
    names = [name for name, _ in pairs]
    duplicated = sorted({name for name in names if names.count(name) > 1})
    if duplicated:
        raise EvidenceSyntaxError(f"fault variable listed twice: {', '.join(duplicated)}")
    return pairs
