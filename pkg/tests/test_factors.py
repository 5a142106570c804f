#!/usr/bin/env python3
"""
Unit Tests for dense factors
"""

import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np  # noqa: E402

from models import INF, Calculus, ContractViolationError  # noqa: E402
from network_factories import kappa_chain, probability_chain  # noqa: E402
from processors.factors import Factor, product_all  # noqa: E402


class TestFactor(unittest.TestCase):
    """Tests for Factor construction and the three operations"""

    def test_from_table_layout(self):
        """Test: Table factor scope is (parents..., child) in lexicographic layout"""
        net = probability_chain(2)
        factor = Factor.from_table(net, net.table("X2"))
        self.assertEqual(factor.scope, ("X1", "X2"))
        self.assertEqual(factor.cardinalities, (2, 2))
        np.testing.assert_allclose(factor.entries(), (0.8, 0.2, 0.2, 0.8))

    def test_values_are_read_only(self):
        """Test: Factor arrays cannot be mutated"""
        factor = Factor(("A",), np.array([0.5, 0.5]), Calculus.PROBABILITY)
        with self.assertRaises(ValueError):
            factor.values[0] = 1.0

    def test_shape_mismatch(self):
        """Test: Scope and array rank must agree"""
        with self.assertRaises(ContractViolationError):
            Factor(("A", "B"), np.array([0.5, 0.5]), Calculus.PROBABILITY)

    def test_probability_product_and_marginalize(self):
        """Test: P(X1) * P(X2|X1) summed over X1 gives P(X2)"""
        net = probability_chain(2)
        joint = Factor.from_table(net, net.table("X1")).product(Factor.from_table(net, net.table("X2")))
        self.assertEqual(joint.scope, ("X1", "X2"))
        np.testing.assert_allclose(joint.entries(), (0.4, 0.1, 0.1, 0.4))
        marginal = joint.marginalize("X1")
        self.assertEqual(marginal.scope, ("X2",))
        np.testing.assert_allclose(marginal.vector("X2"), (0.5, 0.5))

    def test_kappa_product_and_marginalize(self):
        """Test: Kappa factors add ranks and merge with min, keeping exact ints"""
        net = kappa_chain(3)
        f2 = Factor.from_table(net, net.table("X2"))
        f3 = Factor.from_table(net, net.table("X3"))
        joint = f2.product(f3)
        self.assertEqual(joint.scope, ("X1", "X2", "X3"))
        self.assertEqual(joint.entries(), (0, 1, 2, 1, 1, 2, 1, 0))
        marginal = joint.marginalize("X2")
        self.assertEqual(marginal.entries(), (0, 1, 1, 0))
        self.assertTrue(all(type(e) is int for e in marginal.entries()))

    def test_product_aligns_scopes(self):
        """Test: Product over (B) and (A, B) broadcasts on the shared variable"""
        left = Factor(("B",), np.array([1.0, 2.0]), Calculus.PROBABILITY)
        right = Factor(("A", "B"), np.array([[1.0, 10.0], [100.0, 1000.0]]), Calculus.PROBABILITY)
        product = left.product(right)
        self.assertEqual(product.scope, ("B", "A"))
        np.testing.assert_allclose(product.values, [[1.0, 100.0], [20.0, 2000.0]])

    def test_restrict(self):
        """Test: Restriction drops observed axes"""
        net = probability_chain(2)
        factor = Factor.from_table(net, net.table("X2")).restrict({"X1": 1})
        self.assertEqual(factor.scope, ("X2",))
        np.testing.assert_allclose(factor.entries(), (0.2, 0.8))

    def test_infinite_entries(self):
        """Test: INF survives product and is the identity of min"""
        a = Factor(("A",), np.array([0, INF], dtype=object), Calculus.KAPPA)
        b = Factor(("A",), np.array([3, 1], dtype=object), Calculus.KAPPA)
        product = a.product(b)
        self.assertEqual(product.entries(), (3, INF))
        self.assertEqual(product.marginalize("A").entries(), (3,))

    def test_product_all_of_nothing_is_unit(self):
        """Test: The empty product is the unit factor"""
        unit = product_all([], Calculus.KAPPA)
        self.assertEqual(unit.scope, ())
        self.assertEqual(unit.entries(), (0,))

    def test_mixed_calculi(self):
        """Test: Factors of different calculi cannot be combined"""
        a = Factor(("A",), np.array([0.5, 0.5]), Calculus.PROBABILITY)
        b = Factor(("A",), np.array([0, 1], dtype=object), Calculus.KAPPA)
        with self.assertRaises(ContractViolationError):
            a.product(b)


if __name__ == '__main__':
    unittest.main()
