#!/usr/bin/env python3
"""
Unit Tests for fault diagnosis
Fault ranking, ordering comparison and the epsilon sweep over the car network
"""

import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from generators.abstraction import translate_network, translate_vector  # noqa: E402
from models import INF, Calculus, ContractViolationError  # noqa: E402
from network_factories import CAR_FAULTS, kappa_fork, network_path  # noqa: E402
from processors.diagnosis import (  # noqa: E402
    FAULT_BELIEVED,
    FAULT_DISBELIEVED,
    FAULT_UNCOMMITTED,
    FaultRanking,
    FaultRow,
    FaultSet,
    compare_orderings,
    epsilon_sweep,
    fault_state,
    rank_faults,
)
from processors.inference import PosteriorVector  # noqa: E402
from processors.ordering import ordering_agreement  # noqa: E402
from utils.network_io import load_network  # noqa: E402
from utils.system_config import SYSTEM_CONFIG  # noqa: E402


def ranking(calculus: Calculus, degrees: dict) -> FaultRanking:
    """FaultRanking over ``degrees`` keyed by fault name, faulty value 'bad'."""
    faults = FaultSet(tuple((name, "bad") for name in degrees))
    rows = tuple(FaultRow(name, "bad", degree) for name, degree in degrees.items())
    return FaultRanking(rows, calculus, {}, faults)


def car_runs():
    experiment = SYSTEM_CONFIG.get("car_experiment")
    fixed = experiment["fixed_evidence"]
    return [{**fixed, **run} for run in experiment["runs"]]


class TestFaultSet(unittest.TestCase):
    """Tests for FaultSet"""

    def test_duplicates(self):
        """Test: A fault variable may appear only once"""
        with self.assertRaises(ContractViolationError):
            FaultSet((("battery", "bad"), ("battery", "ok")))

    def test_validate(self):
        """Test: Unknown fault variables or values are rejected against a network"""
        car = load_network(network_path("car.json"))
        FaultSet(CAR_FAULTS).validate(car)
        with self.assertRaises(ContractViolationError):
            FaultSet((("carburettor", "bad"),)).validate(car)
        with self.assertRaises(ContractViolationError):
            FaultSet((("battery", "flat"),)).validate(car)


class TestFaultState(unittest.TestCase):
    """Tests for fault_state"""

    def test_states(self):
        """Test: bad / ok / ? from the rank of the faulty value"""
        def post(degrees):
            return PosteriorVector("F", ("ok", "bad", "worn"), degrees, Calculus.KAPPA)

        self.assertEqual(fault_state(post((2, 0, 1)), "bad"), FAULT_BELIEVED)
        self.assertEqual(fault_state(post((0, 0, 1)), "bad"), FAULT_UNCOMMITTED)
        self.assertEqual(fault_state(post((0, 3, INF)), "bad"), FAULT_DISBELIEVED)


class TestRankFaults(unittest.TestCase):
    """Tests for rank_faults on the fork"""

    def setUp(self):
        self.net = kappa_fork()
        self.faults = FaultSet((("Y", "true"), ("X10", "true")))

    def test_seven_effects(self):
        """Test: Seven observed effects believe both Y and X_n at rank 0"""
        evidence = {f"X{i}": "true" for i in range(1, 8)}
        result = rank_faults(self.net, evidence, self.faults)
        self.assertEqual([(r.fault, r.degree, r.annotation) for r in result.rows],
                         [("Y", 0, "+"), ("X10", 0, "+")])
        self.assertEqual(result.levels, 1)

    def test_three_effects(self):
        """Test: Three observed effects put X_n (rank 1) before Y (rank 2)"""
        evidence = {f"X{i}": "true" for i in range(1, 4)}
        result = rank_faults(self.net, evidence, self.faults)
        self.assertEqual([(r.fault, r.degree, r.annotation) for r in result.rows],
                         [("X10", 1, ""), ("Y", 2, "")])
        self.assertEqual(result.degree_of("Y"), 2)
        self.assertEqual(result.evidence, evidence)

    def test_empty_fault_set(self):
        """Test: No faults give an empty ranking"""
        self.assertEqual(rank_faults(self.net, {}, FaultSet(())).rows, ())

    def test_stable_sort(self):
        """Test: Equal degrees keep declaration order"""
        car = translate_network(load_network(network_path("car.json")), 0.2)
        evidence = car_runs()[0]
        result = rank_faults(car, evidence, FaultSet(CAR_FAULTS))
        self.assertEqual([r.fault for r in result.rows],
                         ["fuel-pump", "plugs", "alternator", "battery", "gas", "starter"])
        self.assertEqual([r.annotation for r in result.rows][:2], ["?", "?"])

    def test_probability_ranking(self):
        """Test: Car run 8 in probability orders battery first"""
        car = load_network(network_path("car.json"))
        result = rank_faults(car, car_runs()[7], FaultSet(CAR_FAULTS))
        self.assertEqual([r.fault for r in result.rows],
                         ["battery", "gas", "alternator", "fuel-pump", "plugs", "starter"])
        self.assertAlmostEqual(result.degree_of("battery"), 0.05 / 0.0595, places=6)
        self.assertTrue(all(r.annotation == "" for r in result.rows))


class TestCompareOrderings(unittest.TestCase):
    """Tests for compare_orderings and ordering_agreement"""

    def test_identical_orders(self):
        """Test: Identical strict orders of 6 faults agree on all 15 pairs"""
        names = ["a", "b", "c", "d", "e", "f"]
        prob = ranking(Calculus.PROBABILITY, dict(zip(names, (0.6, 0.5, 0.4, 0.3, 0.2, 0.1))))
        kappa = ranking(Calculus.KAPPA, dict(zip(names, range(6))))
        agreement = compare_orderings(prob, kappa)
        self.assertEqual(agreement.comparable, 15)
        self.assertEqual(agreement.score, 1.0)
        self.assertTrue(agreement.perfect)
        self.assertAlmostEqual(agreement.kendall_tau, 1.0)

    def test_reversed_orders(self):
        """Test: Reversed strict orders of 3 faults agree on none of 3 pairs"""
        prob = ranking(Calculus.PROBABILITY, {"a": 0.3, "b": 0.2, "c": 0.1})
        kappa = ranking(Calculus.KAPPA, {"a": 2, "b": 1, "c": 0})
        agreement = compare_orderings(prob, kappa)
        self.assertEqual(agreement.comparable, 3)
        self.assertEqual(agreement.score, 0.0)
        self.assertEqual(agreement.inverted_pairs, (("a", "b"), ("a", "c"), ("b", "c")))
        self.assertAlmostEqual(agreement.kendall_tau, -1.0)

    def test_all_ties(self):
        """Test: A kappa ranking with all ranks 0 agrees vacuously"""
        prob = ranking(Calculus.PROBABILITY, {"a": 0.3, "b": 0.2, "c": 0.1})
        kappa = ranking(Calculus.KAPPA, {"a": 0, "b": 0, "c": 0})
        agreement = compare_orderings(prob, kappa)
        self.assertEqual(agreement.comparable, 0)
        self.assertEqual(agreement.score, 1.0)
        self.assertIsNone(agreement.kendall_tau)

    def test_symmetric(self):
        """Test: Swapping the arguments keeps the score"""
        prob = ranking(Calculus.PROBABILITY, {"a": 0.3, "b": 0.2, "c": 0.1, "d": 0.0})
        kappa = ranking(Calculus.KAPPA, {"a": 1, "b": 0, "c": 2, "d": INF})
        self.assertEqual(compare_orderings(prob, kappa).score, compare_orderings(kappa, prob).score)
        self.assertEqual(compare_orderings(prob, kappa).comparable, 6)
        self.assertEqual(compare_orderings(prob, kappa).agreeing, 5)

    def test_mismatched_faults(self):
        """Test: Rankings over different fault sets cannot be compared"""
        with self.assertRaises(ContractViolationError):
            compare_orderings(ranking(Calculus.KAPPA, {"a": 0}), ranking(Calculus.KAPPA, {"b": 0}))

    def test_length_mismatch(self):
        """Test: ordering_agreement needs keys for every label"""
        with self.assertRaises(ContractViolationError):
            ordering_agreement(["a", "b"], [0], [0, 1])


class TestEpsilonSweep(unittest.TestCase):
    """Tests for epsilon_sweep over the car network"""

    @classmethod
    def setUpClass(cls):
        cls.car = load_network(network_path("car.json"))
        cls.faults = FaultSet(CAR_FAULTS)

    def test_shape(self):
        """Test: 1 run x 2 epsilons x 6 faults -> 3 ordering rows and 12 belief cells"""
        report = epsilon_sweep(self.car, car_runs()[:1], self.faults, [0.2, 0.02])
        self.assertEqual(len(report.ordering_rows), 3)
        self.assertEqual([row.label for row in report.ordering_rows], ["Pr", "kappa eps=0.2", "kappa eps=0.02"])
        self.assertEqual(len(report.belief_cells), 12)
        self.assertIsNone(report.ordering_rows[0].agreement)
        self.assertEqual(report.failed_runs, [])

    def test_agreement_at_coarse_epsilon(self):
        """Test: Every engine-start=no run orders faults compatibly at 0.2"""
        report = epsilon_sweep(self.car, car_runs(), self.faults, [0.2], max_workers=2)
        kappa_rows = [row for row in report.ordering_rows if row.epsilon is not None]
        self.assertEqual([row.run for row in kappa_rows], list(range(1, 9)))
        for row in kappa_rows:
            self.assertEqual(row.agreement.score, 1.0, f"run {row.run}")

    def test_run_one_levels(self):
        """Test: Run 1 has fuel-pump and plugs uncommitted at 0.2, fuel-pump believed at 0.02"""
        report = epsilon_sweep(self.car, car_runs()[:1], self.faults, [0.2, 0.02])
        probability, coarse, fine = report.rows_for(1)
        self.assertEqual([r.fault for r in probability.ranking.rows][:2], ["fuel-pump", "plugs"])
        self.assertEqual([(r.fault, r.degree, r.annotation) for r in coarse.ranking.rows][:2],
                         [("fuel-pump", 0, "?"), ("plugs", 0, "?")])
        self.assertEqual(coarse.levels, 2)
        self.assertEqual([(r.fault, r.degree, r.annotation) for r in fine.ranking.rows][:2],
                         [("fuel-pump", 0, "+"), ("plugs", 1, "")])

    def test_level_profiles(self):
        """Test: Distinct kappa levels per run at 0.2, 0.02, 0.002; only run 1 gains a level"""
        report = epsilon_sweep(self.car, car_runs(), self.faults, [0.2, 0.02, 0.002], max_workers=2)
        expected = {
            1: (2, 3, 2), 2: (3, 3, 2), 3: (3, 3, 2), 4: (4, 3, 2),
            5: (3, 3, 2), 6: (3, 3, 2), 7: (3, 3, 2), 8: (3, 2, 1),
        }
        for run, profile in expected.items():
            self.assertEqual(report.level_profile(run), profile, f"run {run}")
        # fuel-pump 0.03 and plugs 0.015 share a rank at 0.2 but not at 0.02
        self.assertEqual(report.level_rises, [1])

    def test_nested_epsilons_only_merge_levels(self):
        """Test: Translated fault posteriors never gain levels from 0.2 to 0.2^2 to 0.2^3"""
        grid = (0.2, 0.2 ** 2, 0.2 ** 3)
        for run, evidence in enumerate(car_runs(), start=1):
            probabilities = [row.degree for row in rank_faults(self.car, evidence, self.faults).rows]
            levels = [len(set(translate_vector(probabilities, eps, normalize=False))) for eps in grid]
            self.assertEqual(levels, sorted(levels, reverse=True), f"run {run}")

    def test_sweep_reports_kendall_tau(self):
        """Test: Run 8 at 0.2 has tau-b 11/sqrt(165); the probability row has none"""
        report = epsilon_sweep(self.car, car_runs()[7:], self.faults, [0.2])
        probability, kappa = report.rows_for(1)
        self.assertIsNone(probability.agreement)
        self.assertAlmostEqual(kappa.agreement.kendall_tau, 11 / 165 ** 0.5, places=9)

    def test_differing_cell_is_marked(self):
        """Test: C1 loses the fuel-pump belief at 0.02 and the cell carries '*'"""
        report = epsilon_sweep(self.car, car_runs()[:1], self.faults, [0.02])
        cell = next(c for c in report.belief_cells if c.fault == "fuel-pump")
        self.assertEqual(cell.c2, FAULT_BELIEVED)
        self.assertEqual(cell.c1, FAULT_UNCOMMITTED)
        self.assertTrue(cell.differs)
        self.assertEqual(cell.c1_text, "?*")

        same = next(c for c in report.belief_cells if c.fault == "battery")
        self.assertFalse(same.differs)
        self.assertEqual(same.c1_text, FAULT_DISBELIEVED)

    def test_impossible_run(self):
        """Test: A run with impossible evidence is reported in its rows and the sweep continues"""
        runs = [car_runs()[0], {"lights": "dont", "radio": "work"}]
        report = epsilon_sweep(self.car, runs, self.faults, [0.2, 0.02])
        self.assertEqual(report.failed_runs, [2])
        failed = report.rows_for(2)
        self.assertEqual(len(failed), 3)
        self.assertTrue(all("impossible" in row.error for row in failed))
        self.assertTrue(all(row.ranking is None for row in failed))
        self.assertEqual(len(report.rows_for(1)), 3)
        self.assertTrue(all(cell.run == 1 for cell in report.belief_cells))

    def test_bad_inputs(self):
        """Test: Kappa networks and unknown evidence are rejected before running"""
        with self.assertRaises(ContractViolationError):
            epsilon_sweep(translate_network(self.car, 0.2), car_runs(), self.faults, [0.2])
        with self.assertRaises(ContractViolationError):
            epsilon_sweep(self.car, [{"horn": "silent"}], self.faults, [0.2])
        with self.assertRaises(ContractViolationError):
            epsilon_sweep(self.car, car_runs(), self.faults, [1.5])


if __name__ == '__main__':
    unittest.main()
