import unittest
from fractions import Fraction

import numpy as np

from cusplab.cyclotomic import rational, zeta
from cusplab.exactla import (
    CharPoly, RepMatrix, block_diag, charpoly, commutant, cyclotomic_domain, det, kernel, random_invertible, rref,
    swap_matrix, sym2_matrix, sym_power_matrix, system_rank, tensor_matrix, to_domain_matrix, wedge2_basis,
    wedge2_matrix,
)
from cusplab.exceptions import DimensionError, InputError, SingularMatrixError


class TestRepMatrix(unittest.TestCase):
    def setUp(self):
        i = zeta(4)
        self.s = RepMatrix([[0, -1], [1, 0]])
        self.d = RepMatrix.diag([i, -i])

    def test_shape_checks(self):
        with self.assertRaises(DimensionError):
            RepMatrix([[1, 2]])
        with self.assertRaises(DimensionError):
            RepMatrix([])
        with self.assertRaises(DimensionError):
            self.s @ RepMatrix.identity(3)

    def test_products_and_powers(self):
        self.assertEqual(self.s ** 4, RepMatrix.identity(2))
        self.assertEqual(self.d @ self.d, RepMatrix.diag([-1, -1]))
        self.assertEqual(self.s ** -1, self.s.transpose())
        self.assertEqual(self.d.conductor, 4)

    def test_det_inverse_trace(self):
        m = RepMatrix([[2, 1], [7, 4]])
        self.assertEqual(det(m), 1)
        self.assertEqual(m @ m.inverse(), RepMatrix.identity(2))
        self.assertEqual(m.trace(), 6)
        with self.assertRaises(SingularMatrixError):
            RepMatrix([[1, 2], [2, 4]]).inverse()

    def test_predicates(self):
        self.assertTrue(RepMatrix.identity(3).is_identity())
        self.assertTrue(RepMatrix.zeros(2).is_zero())
        self.assertTrue(RepMatrix.diag([3, 3]).is_scalar())
        self.assertTrue(self.s.is_antisymmetric())
        self.assertFalse(self.s.is_symmetric())

    def test_json(self):
        self.assertEqual(RepMatrix.from_json(self.d.to_json()), self.d)
        with self.assertRaises(InputError):
            RepMatrix.from_json({"dim": 2})
        with self.assertRaises(DimensionError):
            RepMatrix.from_json({"dim": 3, "rows": [[1, 0], [0, 1]]})


class TestFunctorialMatrices(unittest.TestCase):
    def test_wedge2_basis_order(self):
        self.assertEqual(wedge2_basis(4), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])

    def test_wedge2_of_diagonal(self):
        m = RepMatrix.diag([1, 2, 3, 5])
        self.assertEqual(wedge2_matrix(m), RepMatrix.diag([2, 3, 5, 6, 10, 15]))

    def test_functorial_matrices_are_multiplicative(self):
        for t in range(200):
            rng = np.random.default_rng([1, t])
            a, b, c = random_invertible(rng, 4), random_invertible(rng, 4), random_invertible(rng, 2)
            with self.subTest(pair=t):
                self.assertEqual(wedge2_matrix(a @ b), wedge2_matrix(a) @ wedge2_matrix(b))
                self.assertEqual(sym2_matrix(a @ b), sym2_matrix(a) @ sym2_matrix(b))
                self.assertEqual(tensor_matrix(a @ b, c @ c), tensor_matrix(a, c) @ tensor_matrix(b, c))

    def test_sym_power_agrees_with_sym2(self):
        m = RepMatrix([[1, 2], [3, 5]])
        self.assertEqual(sym_power_matrix(m, 2), sym2_matrix(m))
        self.assertEqual(sym_power_matrix(m, 3).dim, 4)

    def test_tensor_trace_and_swap(self):
        a = RepMatrix([[1, 2], [0, 3]])
        b = RepMatrix([[0, 1], [1, 1]])
        self.assertEqual(tensor_matrix(a, b).trace(), a.trace() * b.trace())
        p = swap_matrix(2)
        self.assertEqual(p @ tensor_matrix(a, b) @ p, tensor_matrix(b, a))

    def test_block_diag(self):
        m = block_diag(RepMatrix([[2]]), RepMatrix.identity(2))
        self.assertEqual(m, RepMatrix.diag([2, 1, 1]))


class TestElimination(unittest.TestCase):
    def test_rref(self):
        rows, pivots = rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        self.assertEqual(pivots, [0, 1])
        self.assertEqual(rows[0], [rational(1), rational(0), rational(1)])

    def test_kernel(self):
        basis = kernel([[1, 1, 0], [0, 0, 1]])
        self.assertEqual(len(basis), 1)
        self.assertEqual(basis[0], [rational(-1), rational(1), rational(0)])

    def test_system_rank(self):
        rows = [{0: rational(1), 1: rational(1)}, {0: rational(2), 1: rational(2)}, {}]
        self.assertEqual(system_rank(rows, 3), 1)
        self.assertEqual(system_rank([{0: zeta(3)}, {1: zeta(4)}], 2), 2)
        self.assertEqual(system_rank([], 4), 0)

    def test_kernel_has_a_one_at_each_free_column(self):
        basis = kernel([[2, 3, 0], [0, 0, 5]])
        self.assertEqual(basis, [[rational(Fraction(-3, 2)), rational(1), rational(0)]])

    def test_row_order_does_not_change_the_reduced_form(self):
        rows = [[0, 1, zeta(3)], [2, 4, 6], [1, 3, 3 + zeta(3)]]
        for order in ([0, 1, 2], [2, 1, 0], [1, 2, 0]):
            permuted = [rows[i] for i in order]
            self.assertEqual(rref(permuted), rref(rows))
            self.assertEqual(kernel(permuted), kernel(rows))

    def test_commutant_of_irreducible_and_reducible(self):
        i = zeta(4)
        q = [RepMatrix.diag([i, -i]), RepMatrix([[0, -1], [1, 0]])]
        dim, basis = commutant(q)
        self.assertEqual(dim, 1)
        self.assertTrue(basis[0].is_scalar())
        self.assertEqual(commutant([RepMatrix.diag([1, 2, 2])])[0], 5)
        with self.assertRaises(InputError):
            commutant([])


class TestCharPoly(unittest.TestCase):
    def test_charpoly(self):
        m = RepMatrix([[2, 1], [1, 2]])
        self.assertEqual(charpoly(m), CharPoly.from_roots([1, 3]))
        self.assertEqual(charpoly(m)(3), 0)
        self.assertEqual(str(charpoly(RepMatrix.identity(2))), "x^2 - 2*x + 1")

    def test_charpoly_is_conjugation_invariant(self):
        rng = np.random.default_rng(3)
        g = random_invertible(rng, 3)
        m = RepMatrix([[1, zeta(3), 0], [0, 2, 1], [5, 0, zeta(3, 2)]])
        self.assertEqual(charpoly(g @ m @ g.inverse()), charpoly(m))

    def test_monic_required(self):
        with self.assertRaises(InputError):
            CharPoly([2, 1])


class TestCyclotomicDomains(unittest.TestCase):
    def test_domains(self):
        self.assertTrue(cyclotomic_domain(1).is_QQ)
        self.assertTrue(cyclotomic_domain(2).is_QQ)
        self.assertFalse(cyclotomic_domain(12).is_QQ)
        _, n = to_domain_matrix([[zeta(3), 1], [zeta(4), 0]])
        self.assertEqual(n, 12)

    def test_det_inverse_charpoly_over_cyclotomic_fields(self):
        w = zeta(3)
        m = RepMatrix([[w, 1], [zeta(4), 2]])
        self.assertEqual(det(m), 2 * w - zeta(4))
        self.assertEqual(m @ m.inverse(), RepMatrix.identity(2))
        self.assertEqual(charpoly(RepMatrix.diag([w, zeta(3, 2)])), CharPoly([1, 1, 1]))
        self.assertEqual(charpoly(m), CharPoly([1, -(w + 2), 2 * w - zeta(4)]))
        with self.assertRaises(SingularMatrixError):
            RepMatrix([[w, 1], [w * w, w]]).inverse()


if __name__ == '__main__':
    unittest.main()
