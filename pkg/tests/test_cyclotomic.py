import os
import unittest
from fractions import Fraction
from unittest.mock import patch

import mpmath
import numpy as np

from cusplab.cyclotomic import (
    CycNum, canonicalize, common_conductor, cyclotomic_coeffs, degree, random_cycnum, rational,
    root_of_unity_exponent, to_complex, zeta,
)
from cusplab.exceptions import ConductorOverflowError, CyclotomicZeroDivisionError, EmbeddingError, InputError


class TestCyclotomicPolynomials(unittest.TestCase):
    def test_small_conductors(self):
        self.assertEqual(cyclotomic_coeffs(1), (-1, 1))
        self.assertEqual(cyclotomic_coeffs(4), (1, 0, 1))
        self.assertEqual(cyclotomic_coeffs(6), (1, -1, 1))
        self.assertEqual(cyclotomic_coeffs(8), (1, 0, 0, 0, 1))

    def test_degree_is_totient(self):
        self.assertEqual(degree(5), 4)
        self.assertEqual(degree(12), 4)
        self.assertEqual(degree(15), 8)


class TestCycNumArithmetic(unittest.TestCase):
    def test_zeta_powers(self):
        i = zeta(4)
        self.assertEqual(i * i, rational(-1))
        self.assertEqual(zeta(8) ** 2, i)
        self.assertEqual(zeta(5) ** 5, 1)
        self.assertEqual(zeta(3) ** -1, zeta(3, 2))

    def test_sum_of_roots_of_unity(self):
        total = sum((zeta(5, k) for k in range(5)), rational(0))
        self.assertTrue(total.is_zero())

    def test_mixed_conductors(self):
        self.assertEqual(zeta(4) * zeta(3) ** -1, zeta(12, 3 - 4))
        self.assertEqual(common_conductor([zeta(4), zeta(6), rational(2)]), 12)

    def test_equality_across_embeddings(self):
        a = zeta(3)
        self.assertEqual(a, a.embed(15))
        self.assertEqual(hash(a), hash(a.embed(15)))
        self.assertEqual(rational(Fraction(1, 2)), CycNum(6, {0: Fraction(1, 2)}))

    def test_inverse_and_division(self):
        x = CycNum(5, [1, 2, 0, -1])
        self.assertEqual(x * x.inverse(), 1)
        self.assertEqual((x / x), 1)
        self.assertEqual(1 / rational(4), rational(Fraction(1, 4)))

    def test_zero_division(self):
        with self.assertRaises(CyclotomicZeroDivisionError):
            rational(0).inverse()
        with self.assertRaises(CyclotomicZeroDivisionError):
            zeta(7) / CycNum(7)

    def test_galois_and_norm(self):
        i = zeta(4)
        self.assertEqual(i.conj(), -i)
        self.assertEqual((1 + i).norm(), 2)
        self.assertEqual(zeta(5).galois(2), zeta(5, 2))
        with self.assertRaises(InputError):
            zeta(6).galois(3)

    def test_rational_helpers(self):
        self.assertTrue(rational(3).is_rational())
        self.assertEqual(rational(3).to_fraction(), Fraction(3))
        with self.assertRaises(InputError):
            zeta(4).to_fraction()
        self.assertEqual(str(rational(2)), "2")


class TestEmbedding(unittest.TestCase):
    def test_bad_embedding(self):
        with self.assertRaises(EmbeddingError):
            zeta(3).embed(8)

    def test_canonicalize_finds_smallest_field(self):
        x = zeta(3).embed(12)
        self.assertEqual(canonicalize(x).conductor, 3)
        self.assertEqual(canonicalize(zeta(8) ** 4).conductor, 1)

    def test_embed_then_canonicalize_returns_the_value(self):
        for t in range(100):
            rng = np.random.default_rng([5, t])
            d = int(rng.choice([3, 4, 5, 7, 8, 12]))
            x = random_cycnum(rng, d)
            m = d * int(rng.choice([1, 2, 3]))
            back = canonicalize(x.embed(m))
            with self.subTest(trial=t, conductor=d, target=m):
                self.assertEqual(back, x)
                self.assertEqual(back.conductor, canonicalize(x).conductor)
                self.assertEqual(d % back.conductor, 0)

    def test_canonicalize_keeps_sums_of_mixed_conductors(self):
        x = zeta(3) + zeta(4)
        self.assertEqual(canonicalize(x.embed(24)).conductor, 12)
        self.assertEqual(canonicalize(zeta(5).embed(10)), zeta(5))

    def test_root_of_unity_exponent(self):
        self.assertEqual(root_of_unity_exponent(zeta(4)), (4, 1))
        self.assertEqual(root_of_unity_exponent(rational(-1)), (2, 1))
        self.assertIsNone(root_of_unity_exponent(rational(2)))

    def test_to_complex(self):
        value = to_complex(zeta(8) + zeta(8, 7), dps=20)
        self.assertTrue(mpmath.almosteq(value, mpmath.sqrt(2), 1e-15))

    def test_numerical_shadow_agrees_with_exact_equality(self):
        tolerance = mpmath.mpf('1e-20')
        for t in range(1000):
            rng = np.random.default_rng([9, t])
            d = int(rng.choice([1, 3, 4, 5, 8, 12]))
            x = random_cycnum(rng, d, bound=2, max_den=2)
            if t % 2:
                y = x.embed(d * int(rng.choice([1, 2, 3])))
            else:
                y = random_cycnum(rng, d, bound=2, max_den=2)
            with self.subTest(trial=t):
                self.assertEqual(x == y, abs(to_complex(x) - to_complex(y)) < tolerance)


class TestConfiguration(unittest.TestCase):
    @patch.dict(os.environ, {'CUSPLAB_MAX_CONDUCTOR': '10'})
    def test_conductor_bound_from_environment(self):
        with self.assertRaises(ConductorOverflowError):
            CycNum(12, [0, 1])

    def test_nonpositive_conductor(self):
        with self.assertRaises(InputError):
            CycNum(0, [1])

    def test_json_forms(self):
        x = CycNum(5, [Fraction(1, 3), 0, -2])
        self.assertEqual(CycNum.from_json(x.to_json()), x)
        self.assertEqual(CycNum.from_json("3/2"), rational(Fraction(3, 2)))
        with self.assertRaises(InputError):
            CycNum.from_json({"terms": []})

    def test_random_values_are_reproducible(self):
        a = random_cycnum(np.random.default_rng(7), 8)
        b = random_cycnum(np.random.default_rng(7), 8)
        self.assertEqual(a, b)
        self.assertEqual(a.conductor, 8)


if __name__ == '__main__':
    unittest.main()
