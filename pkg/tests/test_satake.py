import unittest

import numpy as np

from cusplab.catalog import names, representation
from cusplab.cyclotomic import rational
from cusplab.exactla import CharPoly, RepMatrix, random_invertible
from cusplab.exceptions import DimensionError, InputError, UnknownIdentityError
from cusplab.reps import wedge2
from cusplab.satake import (
    IDENTITIES, PlaceKind, SemisimpleParam, _antidiagonal_form, adjointp, asai_param, conjugate, detp, dualp, fuzz,
    gsp4_param, induce_param, list_identities, param, random_inputs, random_symplectic, scale, sym2p, tensor22,
    verify_identity, wedge2p,
)


class TestParameterOperations(unittest.TestCase):
    def test_wedge2p(self):
        self.assertEqual(wedge2p(param(2, 3, 4, 6)).fingerprint, CharPoly.from_roots([6, 8, 12, 12, 18, 24]))
        with self.assertRaises(DimensionError):
            wedge2p(param(5))

    def test_sym2p_scale_dual_det(self):
        self.assertEqual(sym2p(param(2, 3)), param(4, 6, 9))
        self.assertEqual(scale(param(2, 3), 5), param(10, 15))
        self.assertEqual(dualp(param(2, 4)), param(rational(1) / 2, rational(1) / 4))
        self.assertEqual(detp(param(2, 3)), param(6))
        self.assertEqual(adjointp(param(2, 3)), param(rational(2) / 3, 1, rational(3) / 2))

    def test_conjugation_keeps_the_class(self):
        g = RepMatrix([[1, 2], [3, 7]])
        self.assertEqual(conjugate(param(2, 3), g), param(3, 2))
        self.assertNotEqual(param(2, 3), param(2, 4))

    def test_singular_parameter(self):
        with self.assertRaises(InputError):
            param(0, 1)

    def test_tensor22_dimensions(self):
        with self.assertRaises(DimensionError):
            tensor22(param(1, 2, 3), param(1, 2))


class TestInductionAndAsai(unittest.TestCase):
    def test_inert_induction_of_a_character(self):
        t = induce_param(param(7), PlaceKind.INERT)
        self.assertEqual(t.fingerprint, CharPoly([1, 0, -7]))

    def test_split_induction(self):
        t = induce_param(param(2, 3), PlaceKind.SPLIT, param(5, 7))
        self.assertEqual(t, param(2, 3, 5, 7))
        with self.assertRaises(InputError):
            induce_param(param(2, 3), PlaceKind.SPLIT)

    def test_asai(self):
        inert = asai_param(param(2, 3), PlaceKind.INERT)
        self.assertEqual(inert.fingerprint, CharPoly.from_roots([2, 3]) * CharPoly([1, 0, -6]))
        split = asai_param(param(2, 3), PlaceKind.SPLIT, param(5, 7))
        self.assertEqual(split, param(10, 14, 15, 21))
        with self.assertRaises(DimensionError):
            asai_param(param(2, 3, 4), PlaceKind.INERT)

    def test_place_signs(self):
        self.assertEqual(PlaceKind.SPLIT.omega, 1)
        self.assertEqual(PlaceKind.INERT.omega, -1)


class TestSymplecticHelpers(unittest.TestCase):
    def test_random_symplectic_preserves_the_form(self):
        form = _antidiagonal_form(4)
        g = random_symplectic(np.random.default_rng(11))
        self.assertEqual(g.transpose() @ form @ g, form)

    def test_gsp4_param(self):
        self.assertEqual(gsp4_param(2, 3, 12), param(2, 3, 4, 6))


class TestVerifyIdentity(unittest.TestCase):
    def test_p31a(self):
        result = verify_identity('P31a', [param(2, 3), param(5, 7)])
        self.assertTrue(result.holds)
        self.assertEqual(result.lhs, CharPoly.from_roots([140, 150, 210, 210, 294, 315]))

    def test_p31b(self):
        self.assertTrue(verify_identity('P31b', [param(2, 3), param(5, 7)]).holds)

    def test_p33(self):
        result = verify_identity('P33', [2, 3, 12])
        self.assertTrue(result.holds)
        self.assertEqual(result.rhs, CharPoly.from_roots([12, 6, 8, 12, 18, 24]))
        conjugated = verify_identity('P33', [2, 3, 12], rng=np.random.default_rng(5))
        self.assertTrue(conjugated.holds)

    def test_p34_inert(self):
        result = verify_identity('P34', [param(2, 3)], PlaceKind.INERT)
        self.assertTrue(result.holds)
        expected = CharPoly.from_roots([-2, -3]) * CharPoly([1, 0, -6]) * CharPoly([1, 0, -6])
        self.assertEqual(result.lhs, expected)
        self.assertFalse(result.convention_dependent)

    def test_p32_inert_is_flagged(self):
        result = verify_identity('P32', [param(2, 3)], PlaceKind.INERT)
        self.assertTrue(result.holds)
        self.assertTrue(result.convention_dependent)

    def test_s63wedge_split(self):
        result = verify_identity('S63wedge', [2, 5])
        self.assertTrue(result.holds)
        self.assertEqual(result.lhs, CharPoly([1, -10]))

    def test_dihedral_identities_at_inert_places(self):
        for name in ('S63sym', 'S63wedge', 'ADIH'):
            self.assertTrue(verify_identity(name, [3], PlaceKind.INERT).holds, name)

    def test_errors(self):
        with self.assertRaises(UnknownIdentityError):
            verify_identity('P99', [])
        with self.assertRaises(InputError):
            verify_identity('P31a', [param(2, 3)], PlaceKind.INERT)
        with self.assertRaises(InputError):
            verify_identity('P31a', [param(2, 3)])
        with self.assertRaises(InputError):
            verify_identity('S63wedge', [0, 5])
        with self.assertRaises(DimensionError):
            verify_identity('P31a', [param(2, 3, 4), param(5, 7)])

    def test_non_diagonal_inputs(self):
        t1 = SemisimpleParam(RepMatrix([[2, 1], [0, 3]]))
        self.assertTrue(verify_identity('P31a', [t1, param(5, 7)]).holds)
        self.assertTrue(verify_identity('P34', [t1], PlaceKind.INERT).holds)


class TestFuzz(unittest.TestCase):
    def test_every_identity_passes(self):
        for name in IDENTITIES:
            report = fuzz(name, trials=1000, seed=1)
            self.assertTrue(report.passed, name)
            self.assertEqual(report.trials, 1000)

    def test_fuzz_is_reproducible(self):
        spec = IDENTITIES['P32']
        a = random_inputs(spec, PlaceKind.SPLIT, np.random.default_rng([0, 0, 3]))
        b = random_inputs(spec, PlaceKind.SPLIT, np.random.default_rng([0, 0, 3]))
        self.assertEqual(a, b)
        self.assertEqual(fuzz('P32', trials=2).convention_dependent, ['inert'])

    def test_listing(self):
        frame = list_identities()
        self.assertEqual(len(frame), len(IDENTITIES))
        self.assertIn('P33', list(frame['identity']))


class TestCatalogFingerprints(unittest.TestCase):
    def test_wedge2_images_match_wedge2p(self):
        for name in names(4):
            rep = representation(name)
            square = wedge2(rep)
            rng = np.random.default_rng(4)
            for g in rng.integers(rep.group.order, size=20):
                g = int(g)
                moved = conjugate(SemisimpleParam(rep.image(g)), random_invertible(rng, 4))
                with self.subTest(name=name, element=g):
                    self.assertEqual(SemisimpleParam(square.image(g)), wedge2p(moved))


if __name__ == '__main__':
    unittest.main()
