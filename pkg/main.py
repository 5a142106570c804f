#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Kappa/Probability Causal-Network Engine - Command Line

Subcommands:
1. query     posterior of a target variable given evidence
2. abstract  translate a probability network into a kappa network
3. compare   C1 (infer, then abstract) vs. C2 (abstract, then infer)
4. diagnose  fault rankings, or an epsilon sweep over evidence runs
5. chain     closed-form chain results / figure data
6. fork      closed-form fork results / figure data

Command output goes to stdout as tab-separated text; logs go to stderr.
"""

import argparse
import contextlib
import io
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

import config
from generators.abstraction import EpsilonParameter, compare_c1_c2, translate_network
from generators.analytic import ChainSpec, ForkSpec, chain_table, emit_figure_data, fork_table
from models import (
    Calculus,
    ContractViolationError,
    ImpossibleEvidenceError,
    ModelError,
    NetworkValidationError,
)
from outputs.reports import (
    compare_table,
    format_evidence,
    posterior_table,
    ranking_table,
    sweep_belief_table,
    sweep_ordering_table,
    to_tsv,
)
from processors.diagnosis import FaultSet, epsilon_sweep, rank_faults
from processors.inference import eliminate_posterior
from utils.logger import logger
from utils.network_io import (
    EvidenceSyntaxError,
    NetworkDocumentError,
    load_network,
    parse_evidence,
    parse_faults,
    save_network,
)

# Exit statuses
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_UNREADABLE = 3
EXIT_DOCUMENT = 4
EXIT_EVIDENCE = 5
EXIT_CONTRACT = 6
EXIT_IMPOSSIBLE = 7
EXIT_CONFIG = 8


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""
    pass


class CommandParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class CommandResult:
    status: int
    output: str = ""
    diagnostic: str = ""


# ============================================================================
# ARGUMENT TYPES
# ============================================================================

def _epsilon(text: str) -> float:
    try:
        return EpsilonParameter(float(text)).value
    except (ValueError, ContractViolationError):
        raise argparse.ArgumentTypeError(f"epsilon must be a number strictly between 0 and 1 (got '{text}')")


def _epsilon_list(text: str) -> List[float]:
    return [_epsilon(part.strip()) for part in text.split(",") if part.strip()]


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer (got '{text}')")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer (got {value})")
    return value


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog="main.py",
        description="Exact inference in causal networks under probability and kappa calculus",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py query --network data/networks/chain.json --evidence X1=true --target X3
  python main.py abstract --network data/networks/chain.json --epsilon 0.2 --out chain_kappa.json
  python main.py compare --network data/networks/chain.json --epsilon 0.2 --evidence X1=true --target X5
  python main.py diagnose --network data/networks/car.json --evidence engine-start=no \\
      --faults battery=bad,plugs=bad --epsilon 0.2,0.02
  python main.py chain --length 5
  python main.py fork --effects 10 --observe 6
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    query = sub.add_parser("query", help="posterior of one variable")
    query.add_argument("--network", required=True, help="network document (JSON)")
    query.add_argument("--evidence", default="", help="Var=value[,Var=value...]")
    query.add_argument("--target", required=True, help="variable to query")

    abstract = sub.add_parser("abstract", help="translate a probability network to kappa")
    abstract.add_argument("--network", required=True)
    abstract.add_argument("--epsilon", required=True, type=_epsilon)
    abstract.add_argument("--out", required=True, help="path of the kappa document to write")

    compare = sub.add_parser("compare", help="C1 vs. C2 ranks for one query")
    compare.add_argument("--network", required=True)
    compare.add_argument("--epsilon", required=True, type=_epsilon)
    compare.add_argument("--evidence", default="")
    compare.add_argument("--target", required=True)
    compare.add_argument("--raw", action="store_true", help="also show C1 ranks before normalization")

    diagnose = sub.add_parser("diagnose", help="rank faults; sweep epsilons with --epsilon")
    diagnose.add_argument("--network", required=True)
    diagnose.add_argument("--evidence", action="append", default=None,
                          help="one evidence run; repeat for several runs")
    diagnose.add_argument("--faults", required=True, help="Var=faulty_value[,...]")
    diagnose.add_argument("--epsilon", type=_epsilon_list, default=None, help="E[,E...]")

    chain = sub.add_parser("chain", help="chain X1 -> ... -> Xn given X1=true")
    chain.add_argument("--length", type=_positive_int, default=10)
    chain.add_argument("--epsilon", type=_epsilon, default=0.2)
    chain.add_argument("--figure", action="store_true", help="emit distance-vs-belief figure data")

    fork = sub.add_parser("fork", help="fork Y -> X1..Xn given X1..Xi=true")
    fork.add_argument("--effects", type=_positive_int, default=10)
    fork.add_argument("--observe", type=int, default=None, help="number of observed effects i")
    fork.add_argument("--figure", type=int, choices=(5, 6), default=None,
                      help="emit figure data over every i (5: probabilities, 6: kappa margins)")

    return parser


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def _cmd_query(args) -> str:
    net = load_network(args.network)
    posterior = eliminate_posterior(net, parse_evidence(args.evidence), args.target)
    return posterior_table(posterior)


def _cmd_abstract(args) -> str:
    net = load_network(args.network)
    kappa = translate_network(net, args.epsilon)
    save_network(kappa, args.out)
    logger.info(f"💾 Wrote kappa network to {args.out}")
    return f"{args.out}\n"


def _cmd_compare(args) -> str:
    net = load_network(args.network)
    report = compare_c1_c2(net, parse_evidence(args.evidence), args.target, args.epsilon)
    return compare_table(report, raw=args.raw)


def _cmd_diagnose(args) -> str:
    net = load_network(args.network)
    runs = [parse_evidence(text) for text in (args.evidence or [""])]
    faults = FaultSet(tuple(parse_faults(args.faults)))

    if args.epsilon:
        if net.calculus is not Calculus.PROBABILITY:
            raise ContractViolationError("--epsilon sweeps need a probability network")
        report = epsilon_sweep(net, runs, faults, args.epsilon)
        return sweep_ordering_table(report) + "\n" + sweep_belief_table(report)

    blocks = []
    for index, evidence in enumerate(runs, start=1):
        ranking = rank_faults(net, evidence, faults)
        header = f"# run {index}: {format_evidence(evidence)}\n" if len(runs) > 1 else ""
        blocks.append(header + ranking_table(ranking))
    return "\n".join(blocks)


def _cmd_chain(args) -> str:
    spec = ChainSpec(length=args.length, epsilon=args.epsilon)
    if args.figure:
        return to_tsv(emit_figure_data(4, spec))
    return to_tsv(chain_table(spec))


def _cmd_fork(args) -> str:
    spec = ForkSpec(effects=args.effects)
    if args.figure is not None:
        return to_tsv(emit_figure_data(args.figure, spec))
    if args.observe is None:
        raise UsageError("fork: --observe is required unless --figure is given")
    return to_tsv(fork_table(spec, args.observe))


COMMANDS = {
    "query": _cmd_query,
    "abstract": _cmd_abstract,
    "compare": _cmd_compare,
    "diagnose": _cmd_diagnose,
    "chain": _cmd_chain,
    "fork": _cmd_fork,
}


# ============================================================================
# DISPATCH
# ============================================================================

def run_command(argv: Sequence[str]) -> CommandResult:
    """
    Parse ``argv`` and run one subcommand.

    Never raises for user errors: every failure becomes a nonzero status
    with a one-line diagnostic.
    """
    parser = build_parser()
    help_text = io.StringIO()
    try:
        with contextlib.redirect_stdout(help_text):
            args = parser.parse_args(list(argv))
    except UsageError as e:
        return CommandResult(EXIT_USAGE, diagnostic=f"error: {e}")
    except SystemExit as e:
        # --help
        return CommandResult(e.code or EXIT_OK, output=help_text.getvalue())

    try:
        config.validate_config()
        logger.info(f"🚀 Running {args.command}")
        output = COMMANDS[args.command](args)
        return CommandResult(EXIT_OK, output=output)

    except UsageError as e:
        return CommandResult(EXIT_USAGE, diagnostic=f"error: {e}")
    except config.ConfigurationError as e:
        return CommandResult(EXIT_CONFIG, diagnostic=f"error: {e}")
    except OSError as e:
        filename = e.filename if e.filename else "file"
        return CommandResult(EXIT_UNREADABLE, diagnostic=f"error: cannot access {filename}: {e.strerror or e}")
    except (NetworkDocumentError, NetworkValidationError) as e:
        return CommandResult(EXIT_DOCUMENT, diagnostic=f"error: invalid network: {e}")
    except EvidenceSyntaxError as e:
        return CommandResult(EXIT_EVIDENCE, diagnostic=f"error: {e}")
    except ImpossibleEvidenceError as e:
        return CommandResult(EXIT_IMPOSSIBLE, diagnostic=f"error: {e}")
    except ContractViolationError as e:
        return CommandResult(EXIT_CONTRACT, diagnostic=f"error: {e}")
    except ModelError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return CommandResult(EXIT_FAILURE, diagnostic=f"error: {e}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = run_command(sys.argv[1:] if argv is None else argv)
    if result.output:
        sys.stdout.write(result.output)
    if result.diagnostic:
        sys.stderr.write(result.diagnostic + "\n")
    return result.status


# =======================================================================
# COMMAND-LINE INTERFACE
# =======================================================================
if __name__ == "__main__":
    sys.exit(main())
