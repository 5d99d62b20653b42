import os
import unittest
from unittest.mock import patch

from cusplab.catalog import direct_product, load_group
from cusplab.cyclotomic import rational, zeta
from cusplab.exactla import RepMatrix
from cusplab.exceptions import (
    CheckFailure, GroupMismatchError, GroupOrderExceededError, NotASubgroupError, SingularGeneratorError,
)
from cusplab.groups import (
    abelianization_invariants, closure, commutator_subgroup, conjugacy_classes, generated_indices,
    index2_subgroups, linear_character_from_generators, linear_characters, locate_subgroup, quadratic_characters,
    subgroup,
)


class TestClosure(unittest.TestCase):
    def test_trivial_group(self):
        group = closure([RepMatrix.identity(4)], name='trivial')
        self.assertEqual(group.order, 1)
        self.assertEqual(group.num_classes, 1)

    def test_catalog_orders(self):
        self.assertEqual(load_group('g192').order, 192)
        self.assertEqual(load_group('s5').order, 120)
        self.assertEqual(load_group('sl25').order, 120)
        self.assertEqual(load_group('q8').order, 8)

    def test_bound(self):
        with self.assertRaises(GroupOrderExceededError):
            closure([RepMatrix([[1, 1], [0, 1]])], max_order=50)

    def test_singular_generator_rejected(self):
        with self.assertRaises(SingularGeneratorError):
            closure([RepMatrix([[0, 0], [0, 1]])])
        with self.assertRaises(SingularGeneratorError):
            closure([RepMatrix.diag([1, -1]), RepMatrix([[1, 1], [1, 1]])])

    @patch.dict(os.environ, {'CUSPLAB_MAX_ORDER': '20'})
    def test_bound_from_environment(self):
        with self.assertRaises(GroupOrderExceededError):
            closure([RepMatrix.diag([zeta(7), 1]), RepMatrix.diag([1, zeta(5)])])

    def test_table_and_words(self):
        group = load_group('d8')
        for i in range(group.order):
            product = RepMatrix.identity(2)
            for s in group.word(i):
                product = product @ group.generators[s]
            self.assertEqual(product, group.elements[i])
        a, b = 3, 5
        self.assertEqual(group.elements[a] @ group.elements[b], group.elements[group.mul(a, b)])
        self.assertEqual(group.mul(a, int(group.inv[a])), 0)

    def test_exponent_and_center(self):
        self.assertEqual(load_group('q8').exponent, 4)
        self.assertEqual(load_group('sl25').exponent, 60)
        self.assertEqual(load_group('sl23').center().order, 2)
        self.assertFalse(load_group('d8').is_abelian())


class TestClasses(unittest.TestCase):
    def test_class_counts(self):
        self.assertEqual(len(conjugacy_classes(load_group('s5'))), 7)
        self.assertEqual(load_group('sl23').num_classes, 7)
        self.assertEqual(load_group('sl25').num_classes, 9)

    def test_classes_partition_the_group(self):
        group = load_group('g192')
        sizes = group.class_sizes
        self.assertEqual(sum(sizes), group.order)
        self.assertTrue(all(group.order % s == 0 for s in sizes))
        self.assertEqual(list(group.classes[0]), [0])


class TestSubgroups(unittest.TestCase):
    def test_commutator_subgroups(self):
        self.assertEqual(commutator_subgroup(load_group('s5')).order, 60)
        self.assertEqual(commutator_subgroup(load_group('sl25')).order, 120)
        abelian = closure([RepMatrix.diag([zeta(4), 1])], name='c4')
        self.assertEqual(commutator_subgroup(abelian).order, 1)

    def test_subgroup_and_locate(self):
        group = load_group('d8')
        members = generated_indices(group, [group.gen_positions[0]])
        rotations = subgroup(group, members, name='c4')
        self.assertEqual(rotations.order, 4)
        self.assertEqual(sorted(locate_subgroup(group, rotations).tolist()), sorted(members.tolist()))
        with self.assertRaises(NotASubgroupError):
            subgroup(group, [0, group.gen_positions[0]])

    def test_locate_foreign_subgroup(self):
        with self.assertRaises(NotASubgroupError):
            locate_subgroup(load_group('d8'), load_group('q8'))

    def test_index2_subgroups(self):
        self.assertEqual([h.order for h in index2_subgroups(load_group('s5'))], [60])
        self.assertEqual(index2_subgroups(load_group('sl25')), [])
        self.assertEqual(len(index2_subgroups(load_group('d8'))), 3)


class TestLinearCharacters(unittest.TestCase):
    def test_s5(self):
        chars = linear_characters(load_group('s5'))
        self.assertEqual(len(chars), 2)
        self.assertTrue(chars[0].is_trivial())
        self.assertEqual(chars[1].order, 2)
        self.assertEqual(abelianization_invariants(load_group('s5')), [2])

    def test_sl23_squared(self):
        sl23 = load_group('sl23')
        group = direct_product(sl23, sl23, name='sl23xsl23')
        self.assertEqual(abelianization_invariants(group), [3, 3])
        self.assertEqual(len(linear_characters(group)), 9)
        self.assertEqual(len(quadratic_characters(group)), 1)

    def test_g192_has_only_the_trivial_quadratic_character(self):
        g192 = load_group('g192')
        self.assertEqual(abelianization_invariants(g192), [3])
        self.assertEqual(len(quadratic_characters(g192)), 1)
        self.assertEqual(index2_subgroups(g192), [])

    def test_characters_are_multiplicative(self):
        group = load_group('d8')
        for chi in linear_characters(group):
            for a in range(group.order):
                for b in range(group.order):
                    self.assertEqual(chi.value(group.mul(a, b)), chi.value(a) * chi.value(b))

    def test_character_arithmetic(self):
        group = load_group('d8')
        chars = linear_characters(group)
        self.assertEqual(len(chars), 4)
        for chi in chars:
            self.assertTrue((chi * chi).is_trivial())
            self.assertEqual(chi.inverse(), chi)
        with self.assertRaises(GroupMismatchError):
            chars[1] * linear_characters(load_group('q8'))[1]

    def test_from_generators(self):
        group = load_group('d8')
        sign = linear_character_from_generators(group, [rational(1), rational(-1)], label='det')
        self.assertEqual(sign.order, 2)
        self.assertEqual(sign.kernel().order, 4)
        with self.assertRaises(CheckFailure):
            linear_character_from_generators(group, [zeta(4), rational(1)])


if __name__ == '__main__':
    unittest.main()
