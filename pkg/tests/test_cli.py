#!/usr/bin/env python3
"""
Unit Tests for the command line
Golden outputs, exit statuses and subcommand composition
"""

import contextlib
import io
import os
import sys
import tempfile
import unittest
from unittest.mock import patch

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config  # noqa: E402
import main as cli  # noqa: E402
from network_factories import golden, network_path  # noqa: E402

CHAIN = network_path("chain.json")
CAR = network_path("car.json")
FORK = network_path("fork.json")
CAR_FAULT_ARG = "alternator=bad,battery=bad,fuel-pump=bad,gas=empty,plugs=bad,starter=bad"
RUN_8 = "engine-start=no,gas-gauge=empty,lights=dont,engine-turn-over=no"


class TestGoldenOutputs(unittest.TestCase):
    """Byte-exact command output"""

    def assertGolden(self, argv, name):
        result = cli.run_command(argv)
        self.assertEqual(result.status, cli.EXIT_OK, result.diagnostic)
        self.assertEqual(result.output, golden(name))

    def test_chain(self):
        """Test: chain --length 5"""
        self.assertGolden(["chain", "--length", "5"], "chain_5.tsv")

    def test_compare(self):
        """Test: compare on the shipped chain at 0.2"""
        self.assertGolden(
            ["compare", "--network", CHAIN, "--epsilon", "0.2", "--evidence", "X1=true", "--target", "X5"],
            "compare_chain_x5.tsv",
        )

    def test_compare_smaller_epsilons(self):
        """Test: compare on the shipped chain at 0.02 and 0.002 collapses to all zeros"""
        for eps in ("0.02", "0.002"):
            self.assertGolden(
                ["compare", "--network", CHAIN, "--epsilon", eps, "--evidence", "X1=true", "--target", "X5"],
                f"compare_chain_x5_eps{eps}.tsv",
            )

    def test_compare_fork(self):
        """Test: compare Y given three true effects on the shipped fork at each epsilon"""
        for eps in ("0.2", "0.02", "0.002"):
            self.assertGolden(
                ["compare", "--network", FORK, "--epsilon", eps,
                 "--evidence", "X1=true,X2=true,X3=true", "--target", "Y"],
                f"compare_fork_y_eps{eps}.tsv",
            )

    def test_fork(self):
        """Test: fork with seven observed effects"""
        self.assertGolden(["fork", "--effects", "10", "--observe", "7"], "fork_7.tsv")

    def test_diagnose(self):
        """Test: Probability fault ranking for car run 8"""
        self.assertGolden(
            ["diagnose", "--network", CAR, "--evidence", RUN_8, "--faults", CAR_FAULT_ARG],
            "diagnose_car_run8.tsv",
        )

    def test_sweep(self):
        """Test: Epsilon sweep tables for car run 8 at 0.2"""
        self.assertGolden(
            ["diagnose", "--network", CAR, "--evidence", RUN_8, "--faults", CAR_FAULT_ARG, "--epsilon", "0.2"],
            "sweep_car_run8.tsv",
        )

    def test_sweep_three_epsilons(self):
        """Test: Epsilon sweep tables for car run 8 at 0.2, 0.02 and 0.002"""
        self.assertGolden(
            ["diagnose", "--network", CAR, "--evidence", RUN_8, "--faults", CAR_FAULT_ARG,
             "--epsilon", "0.2,0.02,0.002"],
            "sweep_car_run8_three_eps.tsv",
        )

    def test_deterministic(self):
        """Test: Repeated runs give identical bytes"""
        argv = ["diagnose", "--network", CAR, "--evidence", RUN_8, "--faults", CAR_FAULT_ARG,
                "--epsilon", "0.2,0.02,0.002"]
        self.assertEqual(cli.run_command(argv).output, cli.run_command(argv).output)


class TestCommands(unittest.TestCase):
    """Subcommand behaviour"""

    def test_chain_three(self):
        """Test: chain --length 3 reports 0.68 and kappa (0, 1) for X3"""
        result = cli.run_command(["chain", "--length", "3"])
        self.assertIn("3\t0.680000\t0\t1\tbelieved(1)\n", result.output)

    def test_query(self):
        """Test: query prints one row per value"""
        result = cli.run_command(["query", "--network", CHAIN, "--evidence", "X1=true", "--target", "X3"])
        self.assertEqual(result.output, "value\tprobability\ntrue\t0.680000\nfalse\t0.320000\n")

    def test_abstract_then_query_matches_compare(self):
        """Test: Querying the abstracted network reproduces compare's C2 column"""
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "chain_kappa.json")
            written = cli.run_command(["abstract", "--network", CHAIN, "--epsilon", "0.2", "--out", out])
            self.assertEqual(written.status, cli.EXIT_OK)
            self.assertEqual(written.output, f"{out}\n")

            query = cli.run_command(["query", "--network", out, "--evidence", "X1=true", "--target", "X5"])
            self.assertEqual(query.output, "value\tkappa\ntrue\t0\nfalse\t1\n")

        compare = cli.run_command(["compare", "--network", CHAIN, "--epsilon", "0.2",
                                   "--evidence", "X1=true", "--target", "X5"])
        c2 = [line.split("\t")[2] for line in compare.output.splitlines()[1:3]]
        self.assertEqual(c2, ["0", "1"])

    def test_compare_raw(self):
        """Test: --raw adds the unnormalized C1 column"""
        result = cli.run_command(["compare", "--network", CHAIN, "--epsilon", "0.7",
                                  "--evidence", "X1=true", "--target", "X3", "--raw"])
        lines = result.output.splitlines()
        self.assertEqual(lines[0], "value\tc1\tc2\tdifference\tc1_raw")
        self.assertTrue(lines[1].endswith("\t1"))
        self.assertTrue(lines[2].endswith("\t3"))

    def test_diagnose_several_runs(self):
        """Test: Several --evidence runs get a header each"""
        result = cli.run_command(["diagnose", "--network", CAR, "--faults", "battery=bad,plugs=bad",
                                  "--evidence", "engine-start=no", "--evidence", RUN_8])
        self.assertEqual(result.status, cli.EXIT_OK)
        self.assertIn("# run 1: engine-start=no\n", result.output)
        self.assertIn(f"# run 2: {RUN_8}\n", result.output)

    def test_figures(self):
        """Test: Figure switches emit figure tables"""
        self.assertTrue(cli.run_command(["chain", "--figure"]).output.startswith("distance\tp_true\tkappa_margin\n"))
        self.assertTrue(cli.run_command(["fork", "--figure", "6"]).output.startswith("observed\tmargin_y\tmargin_xn\n"))

    def test_help(self):
        """Test: --help exits 0 with the usage text"""
        result = cli.run_command(["--help"])
        self.assertEqual(result.status, cli.EXIT_OK)
        self.assertIn("usage:", result.output)

    def test_main_writes_streams(self):
        """Test: main() writes output to stdout and returns the status"""
        out = io.StringIO()
        with contextlib.redirect_stdout(out):
            status = cli.main(["chain", "--length", "2"])
        self.assertEqual(status, 0)
        self.assertTrue(out.getvalue().startswith("i\tp_true"))


class TestExitStatuses(unittest.TestCase):
    """Every failure class maps to its own status with a one-line diagnostic"""

    def assertStatus(self, argv, status, fragment=None):
        result = cli.run_command(argv)
        self.assertEqual(result.status, status, result.diagnostic)
        self.assertEqual(result.output, "")
        self.assertTrue(result.diagnostic.startswith("error: "))
        self.assertNotIn("\n", result.diagnostic)
        if fragment:
            self.assertIn(fragment, result.diagnostic)

    def test_usage(self):
        """Test: Bad arguments exit 2"""
        self.assertStatus([], cli.EXIT_USAGE)
        self.assertStatus(["chain", "--epsilon", "1.5"], cli.EXIT_USAGE, "epsilon")
        self.assertStatus(["chain", "--length", "zero"], cli.EXIT_USAGE)
        self.assertStatus(["fork", "--effects", "10"], cli.EXIT_USAGE, "--observe")

    def test_unreadable_file(self):
        """Test: A missing network file exits 3 and names the file"""
        missing = os.path.join(tempfile.gettempdir(), "no-such-network.json")
        self.assertStatus(["query", "--network", missing, "--target", "X1"], cli.EXIT_UNREADABLE, missing)

    def test_invalid_document(self):
        """Test: Malformed and invalid documents exit 4"""
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "broken.json")
            with open(path, "w", encoding="utf-8") as f:
                f.write('{"calculus": "kappa",')
            self.assertStatus(["query", "--network", path, "--target", "A"], cli.EXIT_DOCUMENT, "line 1")

    def test_evidence_syntax(self):
        """Test: Malformed evidence exits 5"""
        self.assertStatus(["query", "--network", CHAIN, "--evidence", "X1", "--target", "X3"], cli.EXIT_EVIDENCE)

    def test_unknown_variable(self):
        """Test: Evidence naming an unknown variable exits 6 and names it"""
        self.assertStatus(["query", "--network", CHAIN, "--evidence", "X99=true", "--target", "X3"],
                          cli.EXIT_CONTRACT, "X99")

    def test_impossible_evidence(self):
        """Test: Impossible evidence exits 7"""
        self.assertStatus(["query", "--network", CAR, "--evidence", "lights=dont,radio=work",
                           "--target", "battery"], cli.EXIT_IMPOSSIBLE, "impossible")

    def test_configuration(self):
        """Test: Invalid environment settings exit 8"""
        with patch.object(config, "SWEEP_WORKERS", 0):
            self.assertStatus(["chain", "--length", "3"], cli.EXIT_CONFIG, "KAPPA_SWEEP_WORKERS")


if __name__ == '__main__':
    unittest.main()
