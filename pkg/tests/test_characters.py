import unittest
from itertools import combinations

import numpy as np
from sympy import QQ

from grpcert.character.class_function import (ClassFunction, induce, inner_product, reduced_regular,
                                              regular_character, restrict, trivial_character)
from grpcert.character.cyclotomic import Cyclotomic, power_basis
from grpcert.character.dimension import dimension_function
from grpcert.character.fixed_points import (fixed_dimension, is_strictly_fpf, is_top_rank_fpf, require_character,
                                            strict_fpf_witness, top_rank_fpf_witness)
from grpcert.character.table import character_table, decompose, is_character
from grpcert.errors import NotACharacter
from grpcert.group.catalog import CATALOG_ENTRIES, abelian, catalog_group, cyclic, extraspecial, modular
from grpcert.group.finite_group import subgroup_group
from grpcert.group.subgroups import (all_subgroups, center, subgroup_class_representatives, trivial_subgroup,
                                     whole_group)
from tests.helpers.utils import regular_values


class CyclotomicTests(unittest.TestCase):

    def test_roots_of_unity_sum(self):
        z = Cyclotomic.root_of_unity(3)
        self.assertEqual(Cyclotomic.rational(1) + z + z * z, 0)

        total = Cyclotomic.rational(0)
        for k in range(9):
            total = total + Cyclotomic.root_of_unity(9, k)
        self.assertTrue(total.is_zero())

    def test_power_basis_shape(self):
        self.assertEqual(power_basis(9).shape, (9, 6))
        self.assertEqual(power_basis(5).shape, (5, 4))

    def test_conjugate_and_inverse(self):
        z = Cyclotomic.root_of_unity(5, 2)
        self.assertEqual(z * z.conjugate(), 1)
        self.assertEqual(z * z.inverse(), 1)

        value = Cyclotomic.rational(2) + Cyclotomic.root_of_unity(3)
        self.assertEqual(value * value.inverse(), 1)
        self.assertEqual(value / value, 1)

    def test_embedding(self):
        self.assertEqual(Cyclotomic.root_of_unity(3), Cyclotomic.root_of_unity(9, 3))
        self.assertEqual(Cyclotomic.root_of_unity(3) * Cyclotomic.root_of_unity(9), Cyclotomic.root_of_unity(9, 4))

    def test_rational(self):
        half = Cyclotomic.rational(QQ(1, 2))
        self.assertTrue(half.is_rational())
        self.assertFalse(half.is_integer())
        self.assertEqual(half.to_json(), "1/2")
        self.assertEqual(int(half + half), 1)

        with self.assertRaises(ValueError):
            Cyclotomic.root_of_unity(3).to_rational()

    def test_numeric_value(self):
        self.assertAlmostEqual(abs(complex(Cyclotomic.root_of_unity(4)) - 1j), 0.0)
        self.assertAlmostEqual(complex(Cyclotomic.root_of_unity(3) + Cyclotomic.root_of_unity(3, 2)).real, -1.0)

    def test_galois(self):
        z = Cyclotomic.root_of_unity(9)
        self.assertEqual(z.galois(2), Cyclotomic.root_of_unity(9, 2))
        self.assertEqual(z.galois(8), z.conjugate())


class CharacterTableTests(unittest.TestCase):

    def verify_orthogonality(self, group):
        table = character_table(group)
        self.assertEqual(len(table), len(table.classes))
        self.assertEqual(sum(d * d for d in table.degrees), group.order)
        self.assertEqual(table.trivial, trivial_character(group))

        for i, chi in enumerate(table):
            for j, psi in enumerate(table):
                self.assertEqual(inner_product(chi, psi), 1 if i == j else 0,
                                 "Irreducibles %d and %d of %s are not orthonormal." % (i, j, group.label))

    def test_cyclic(self):
        self.verify_orthogonality(cyclic(3))
        self.verify_orthogonality(cyclic(9))
        self.assertEqual(character_table(cyclic(9)).degrees, [1] * 9)

    def test_heisenberg(self):
        group = extraspecial(3, 3, 3)
        self.verify_orthogonality(group)
        self.assertEqual(sorted(character_table(group).degrees), [1] * 9 + [3] * 2)

    def test_modular(self):
        group = modular(3, 3)
        self.verify_orthogonality(group)
        self.assertEqual(sorted(character_table(group).degrees), [1] * 9 + [3] * 2)

    def test_order_125(self):
        group = extraspecial(5, 3, 5)
        table = character_table(group)
        self.assertEqual(sorted(table.degrees), [1] * 25 + [5] * 4)

    def test_order_243(self):
        group = extraspecial(3, 5, 3)
        table = character_table(group)
        self.assertEqual(sorted(table.degrees), [1] * 81 + [9] * 2)

    def test_regular_decomposition(self):
        group = extraspecial(3, 3, 3)
        table = character_table(group)
        decomposition = decompose(regular_character(group))
        self.assertTrue(decomposition.is_character)
        self.assertEqual([int(m) for m in decomposition.multiplicities], table.degrees)

        regular = regular_character(group)
        self.assertEqual([int(regular(x)) for x in range(group.order)], regular_values(group).tolist())

    def test_catalog_orthogonality(self):
        checked = 0
        for spec, _ in CATALOG_ENTRIES:
            group = catalog_group(spec)
            if group.order > 243:
                continue
            self.verify_orthogonality(group)
            self.assertTrue(character_table(group).orthogonality_verified, spec)
            checked += 1
        self.assertEqual(checked, len(CATALOG_ENTRIES) - 1)

    def test_compose_decompose_random(self):
        rng = np.random.default_rng(11)
        for group in (extraspecial(3, 3, 3), modular(3, 3), abelian(9, 3)):
            table = character_table(group)
            for _ in range(10):
                multiplicities = [int(m) for m in rng.integers(0, 5, size=len(table))]
                decomposition = decompose(table.compose(multiplicities))
                self.assertTrue(decomposition.is_character)
                self.assertEqual([int(m) for m in decomposition.multiplicities], multiplicities)

    def test_compose(self):
        group = abelian(3, 3)
        table = character_table(group)
        self.assertEqual(table.compose([1] * len(table)), regular_character(group))

    def test_not_a_character(self):
        group = cyclic(3)
        delta = ClassFunction(group, [1, 0, 0], name="delta")
        decomposition = decompose(delta)
        self.assertFalse(decomposition.is_character)
        self.assertIsNotNone(decomposition.witness)
        self.assertFalse(is_character(delta))

        with self.assertRaises(NotACharacter):
            require_character(delta)

        negative = ClassFunction(group, [-1, -1, -1])
        self.assertFalse(is_character(negative))

        self.assertTrue(is_character(reduced_regular(group)))


class InductionTests(unittest.TestCase):

    def test_induce_trivial_from_trivial(self):
        group = extraspecial(3, 3, 3)
        trivial = trivial_subgroup(group)
        induced = induce(trivial_character(trivial.as_group()), group)
        self.assertEqual(induced, regular_character(group))

    def test_restrict_and_frobenius(self):
        group = extraspecial(3, 3, 3)
        table = character_table(group)
        group_center = center(group)
        sub_table = character_table(group_center.as_group())

        for chi in table:
            restricted = restrict(chi, group_center)
            for phi in sub_table:
                self.assertEqual(inner_product(restricted, phi), inner_product(chi, induce(phi, group)))

    def test_induction_in_stages(self):
        group = extraspecial(3, 3, 3)
        for record in subgroup_class_representatives(group):
            if record.order != 9:
                continue
            H = record.as_group()
            K = subgroup_group(H, H.closure([1]), label="order 3 inside order 9")
            for phi in character_table(K):
                self.assertEqual(induce(induce(phi, H), group), induce(phi, group))

    def test_frobenius_reciprocity_random(self):
        rng = np.random.default_rng(5)
        triples = 0
        for group in (extraspecial(3, 3, 3), modular(3, 3)):
            table = character_table(group)
            records = all_subgroups(group)
            for _ in range(60):
                record = records[int(rng.integers(len(records)))]
                sub_table = character_table(record.as_group())
                phi = sub_table[int(rng.integers(len(sub_table)))]
                chi = table[int(rng.integers(len(table)))]
                self.assertEqual(inner_product(restrict(chi, record), phi), inner_product(chi, induce(phi, group)),
                                 "Reciprocity fails for %s on the subgroup of order %d." % (chi, record.order))
                triples += 1
        self.assertGreaterEqual(triples, 100)

    def test_induced_degree(self):
        group = extraspecial(3, 3, 3)
        group_center = center(group)
        for phi in character_table(group_center.as_group()):
            self.assertEqual(int(induce(phi, group).degree), 9)


class FixedPointTests(unittest.TestCase):

    def test_fixed_dimension(self):
        group = abelian(3, 3)
        regular = regular_character(group)
        for record in subgroup_class_representatives(group):
            self.assertEqual(fixed_dimension(regular, record), group.order // record.order)

        self.assertEqual(fixed_dimension(trivial_character(group), whole_group(group)), 1)

    def test_strictly_fpf(self):
        group = cyclic(9)
        table = character_table(group)
        faithful = [chi for chi in table if is_strictly_fpf(chi)]
        # The six characters of order 9 act freely on the unit sphere.
        self.assertEqual(len(faithful), 6)
        self.assertFalse(is_strictly_fpf(table.trivial))

        # Characters of order 3 are trivial on the subgroup of order 3.
        for chi in table:
            witness = strict_fpf_witness(chi)
            if witness is not None and chi != table.trivial:
                self.assertEqual(witness["element_order"], 3)
                self.assertEqual(witness["fixed_dimension"], 1)

        self.assertEqual(len(character_table(extraspecial(3, 3, 3)).linear_characters()), 9)

    def test_top_rank_fpf(self):
        group = abelian(3, 3)
        self.assertTrue(is_top_rank_fpf(reduced_regular(group), 2))
        self.assertFalse(is_top_rank_fpf(trivial_character(group), 2))
        self.assertIsNotNone(top_rank_fpf_witness(trivial_character(group), 1))
        # No elementary abelian subgroup of rank 3, so the condition holds vacuously.
        self.assertTrue(is_top_rank_fpf(trivial_character(group), 3))

    def test_strict_implies_top_rank(self):
        strict = 0
        for group in (cyclic(3), cyclic(9), abelian(9, 3), extraspecial(3, 3, 3), modular(3, 3)):
            table = character_table(group)
            candidates = list(table) + [chi + psi for chi, psi in combinations(table, 2)]
            for chi in candidates:
                if not is_strictly_fpf(chi):
                    continue
                strict += 1
                for rank in (1, 2, 3):
                    self.assertTrue(is_top_rank_fpf(chi, rank), "%s on %s, rank %d" % (chi, group.label, rank))
        self.assertGreater(strict, 0)

    def test_dimension_monotone(self):
        for group in (abelian(3, 3), extraspecial(3, 3, 3), modular(3, 3)):
            table = character_table(group)
            records = all_subgroups(group)
            for chi in (regular_character(group), reduced_regular(group), table[1], table[-1] + table[1]):
                n = dimension_function(chi)
                for K in records:
                    for H in records:
                        if K.is_subgroup_of(H):
                            self.assertGreaterEqual(n(K), n(H))

    def test_dimension_function(self):
        group = extraspecial(3, 3, 3)
        regular = dimension_function(regular_character(group))
        self.assertEqual(regular.degree, 27)
        for record in subgroup_class_representatives(group):
            self.assertEqual(regular(record), 27 // record.order)
            self.assertEqual(regular.join_power(record, 2), 2 * (27 // record.order) + 1)

        with self.assertRaises(ValueError):
            regular.join_power(whole_group(group), 0)


if __name__ == '__main__':
    unittest.main()
