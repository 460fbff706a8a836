import unittest
from unittest import mock

from grpcert import config
from grpcert.character.class_function import (ClassFunction, reduced_regular, regular_character, restrict,
                                              trivial_character)
from grpcert.character.table import character_table, is_character
from grpcert.construction import rank3
from grpcert.construction.abelian import beta_abelian, eta_character, greedy_basis, verify_abelian
from grpcert.construction.amalgam import (amalgam_obstruction, effective_characters, effective_irreducibles,
                                          glued_subgroups)
from grpcert.construction.isotropy import (Provenance, RepresentationFamily, center_sphere_family, check_family,
                                           family_from_character, free_linear_characters, isotropy_of_product)
from grpcert.construction.rank3 import (beta_rank3, beta_rank3_case_formula, beta_rank3_display_formula,
                                        rank3_case, verify_rank3)
from grpcert.construction.report import CheckStatus, VerificationReport
from grpcert.errors import (BadGroup, MissingAssignment, NoSuitableCharacters, NonAbelianIsotropy, PreconditionFailed,
                            RankExceedsTarget)
from grpcert.group.catalog import abelian, cyclic, direct_product, extraspecial, modular
from grpcert.group.structure import find_normal_Q
from grpcert.group.subgroups import center, subgroup_class_representatives, whole_group


class VerificationReportTests(unittest.TestCase):

    def test_counts_and_status(self):
        report = VerificationReport("claim", "group", {"r": 2})
        report.check("holds", True)
        report.check("fails", False, {"element": 3})
        report.observe("note", {"value": 1})
        report.assume("external step")
        report.finish()

        self.assertFalse(report.passed)
        self.assertEqual(report.counts(), {"pass": 1, "fail": 1, "observation": 1})
        self.assertEqual(report.failures[0].witness, {"element": 3})

        document = report.to_dict(include_timing=False)
        self.assertNotIn("timing", document)
        self.assertEqual(document["summary"]["passed"], False)
        self.assertEqual(document["checks"][1]["status"], "fail")
        self.assertIn("seconds", report.to_dict()["timing"])

    def test_failing_check_needs_witness(self):
        report = VerificationReport("claim", "group")
        with self.assertRaises(ValueError):
            report.add_check("bare failure", CheckStatus.FAIL)

        # A boolean check still records a witness when it fails.
        report.check("condition", False)
        self.assertEqual(report.failures[0].witness, {"condition": False})

    def test_observation_does_not_fail(self):
        report = VerificationReport("claim", "group")
        report.observe("vacuous")
        self.assertTrue(report.passed)

    def test_observe_skipped_orthogonality(self):
        group = modular(3, 3)
        with mock.patch.object(config, "character_table_verify_class_limit", 5):
            table = character_table(group)
        self.assertFalse(table.orthogonality_verified)

        report = VerificationReport("claim", group.label)
        report.observe_table(table)
        report.observe_table(character_table(extraspecial(3, 3, 3)))
        self.assertTrue(report.finish().passed)
        self.assertEqual([check.name for check in report.observations],
                         ["orthogonality of the M(3,3) table not verified"])
        self.assertEqual(report.observations[0].witness["classes"], 11)


class IsotropyTests(unittest.TestCase):

    def test_free_linear_characters(self):
        group = abelian(3, 3)
        characters = free_linear_characters(group, 2)
        self.assertEqual(len(characters), 2)

        with self.assertRaises(NoSuitableCharacters):
            free_linear_characters(group, 1)

    def test_center_sphere_family_heisenberg(self):
        group = extraspecial(3, 3, 3)
        model = center_sphere_family(group)
        self.assertEqual(model.rk_X, 1)
        self.assertEqual(model.dims, [17])
        self.assertTrue(model.all_abelian())
        self.assertTrue(all(observation["holds"] for observation in model.observations))

        # Free points and the noncentral subgroups of order 3.
        group_center = center(group)
        self.assertEqual(sorted(set(record.order for record in model.representatives())), [1, 3])
        for record in model.representatives():
            self.assertEqual(record.intersection_order(group_center), 1)

    def test_trivial_sphere_isotropy(self):
        group = extraspecial(3, 3, 3)
        model = isotropy_of_product(group, [trivial_character(group)])
        self.assertEqual([record.order for record in model.representatives()], [27])
        self.assertFalse(model.all_abelian())

    def test_regular_sphere_isotropy(self):
        # Every subgroup fixes a different amount of the regular representation.
        group = abelian(3, 3)
        model = isotropy_of_product(group, [regular_character(group)])
        self.assertEqual(len(model.isotropy_classes), len(subgroup_class_representatives(group)))
        self.assertEqual(model.rk_X, 2)

    def test_isotropy_shrinks_with_factors(self):
        group = extraspecial(3, 3, 3)
        table = character_table(group)
        for first in (table[1], table[-1], regular_character(group)):
            smaller = isotropy_of_product(group, [first])
            for second in table:
                larger = isotropy_of_product(group, [first, second])
                self.assertLessEqual(larger.rk_X, smaller.rk_X)
                for record in larger.isotropy:
                    self.assertTrue(any(record.is_subgroup_of(other) for other in smaller.isotropy),
                                    "Isotropy of order %d escapes the smaller product." % record.order)

    def test_check_family(self):
        group = extraspecial(3, 3, 3)
        model = center_sphere_family(group)
        family = family_from_character(model, regular_character(group))
        report = check_family(group, model, family, rank=1)
        # The regular character has a fixed vector on every subgroup, so top rank freeness fails.
        self.assertFalse(report.passed)
        self.assertTrue(all(check.name.startswith("top rank") for check in report.failures))

        family = family_from_character(model, beta_abelian(group, 1), Provenance.BETA_ABELIAN, checked=True)
        self.assertTrue(check_family(group, model, family, rank=1).passed)

    def test_missing_assignment(self):
        group = extraspecial(3, 3, 3)
        model = center_sphere_family(group)
        with self.assertRaises(MissingAssignment):
            check_family(group, model, RepresentationFamily(group, {}))


class AbelianConstructionTests(unittest.TestCase):

    def test_beta_abelian_values(self):
        group = abelian(3, 3)
        beta = beta_abelian(group, 2)
        self.assertEqual(beta.degree, 72)
        self.assertEqual(beta, reduced_regular(group) * 9)
        self.assertTrue(is_character(beta))

        with self.assertRaises(ValueError):
            beta_abelian(group, -1)
        with self.assertRaises(PreconditionFailed):
            beta_abelian(cyclic(6), 1)

    def test_greedy_basis(self):
        group = abelian(3, 3, 3)
        members = whole_group(group).members
        self.assertEqual(len(greedy_basis(group, members)), 3)
        self.assertEqual(len(greedy_basis(group, members, "greatest")), 3)
        with self.assertRaises(ValueError):
            greedy_basis(group, members, "random")

    def test_eta_matches_beta(self):
        group = abelian(9, 3)
        for record in subgroup_class_representatives(group):
            if record.rank > 2:
                continue
            eta = eta_character(group, record, 2)
            self.assertEqual(eta, restrict(beta_abelian(group, 2), record),
                             "eta and beta differ on the subgroup of order %d." % record.order)
            self.assertEqual(eta, eta_character(group, record, 2, "greatest"))

    def test_eta_rank_exceeds(self):
        group = abelian(3, 3)
        with self.assertRaises(RankExceedsTarget):
            eta_character(group, whole_group(group), 1)

    def test_verify_heisenberg(self):
        group = extraspecial(3, 3, 3)
        model = center_sphere_family(group)
        report = verify_abelian(group, model, sweep_injections=True)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.parameters["rank"], 1)
        self.assertTrue(any("reduced regular" in check.name for check in report.checks))
        self.assertTrue(report.assumptions)

    def test_verify_rank_one_families(self):
        for group in (modular(3, 3), extraspecial(5, 3, 5)):
            model = center_sphere_family(group)
            self.assertEqual(model.rk_X, 1, group.label)
            report = verify_abelian(group, model)
            self.assertTrue(report.passed, report.failures)
            self.assertEqual(report.parameters["rank"], 1)

    def test_verify_preconditions(self):
        group = extraspecial(3, 3, 3)
        with self.assertRaises(RankExceedsTarget):
            verify_abelian(group, center_sphere_family(group), rank=0)

        with self.assertRaises(NonAbelianIsotropy):
            verify_abelian(group, isotropy_of_product(group, [trivial_character(group)]), rank=2)

    def test_verify_product(self):
        group = direct_product(extraspecial(3, 3, 3), cyclic(3))
        model = center_sphere_family(group)
        self.assertEqual(model.rk_X, 1)
        self.assertTrue(verify_abelian(group, model).passed)


class Rank3ConstructionTests(unittest.TestCase):

    def test_precondition_failure(self):
        report = verify_rank3(extraspecial(3, 3, 3))
        self.assertFalse(report.passed)
        self.assertEqual(report.failures[0].name, "precondition")
        self.assertIn("reasons", report.failures[0].witness)

    def test_beta_needs_rank3(self):
        group = extraspecial(3, 3, 3)
        with self.assertRaises(PreconditionFailed):
            beta_rank3(group, whole_group(group))

    def test_noncyclic_center(self):
        group = direct_product(extraspecial(3, 3, 3), cyclic(3))
        report = verify_rank3(group)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.data["branch"], "noncyclic center")
        self.assertEqual(report.data["center_rank"], 2)

    def test_extraspecial_243(self):
        group = extraspecial(3, 5, 3)
        Q = find_normal_Q(group)
        beta = beta_rank3(group, Q)
        self.assertEqual(int(beta.degree), 6 * 243)

        group_center = center(group)
        for record in subgroup_class_representatives(group):
            if record.intersection_order(group_center) != 1:
                continue
            restricted = restrict(beta, record)
            self.assertTrue(is_character(restricted))
            self.assertEqual(restricted, beta_rank3_case_formula(group, Q, record))
            case, _ = rank3_case(group, Q, record)
            self.assertIn(case, (1, 2, 3, 4, 5))
            if record.is_elementary_abelian and record.order == 9:
                self.assertEqual(restricted, beta_rank3_display_formula(group, Q, record))

        report = verify_rank3(group)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.data["branch"], "cyclic center")

    def test_extraspecial_3125(self):
        report = verify_rank3(extraspecial(5, 5, 5))
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.data["branch"], "cyclic center")

    def test_corrupted_beta_fails(self):
        original = rank3.beta_rank3

        def corrupted(group, Q):
            beta = original(group, Q)
            values = list(beta.values)
            values[-1] = values[-1] + 1
            return ClassFunction(group, values, name="corrupted beta")

        with mock.patch.object(rank3, "beta_rank3", corrupted):
            report = verify_rank3(extraspecial(3, 5, 3))
        self.assertFalse(report.passed)
        multiplicities = [check.witness["multiplicity"] for check in report.failures
                          if check.name.endswith(": character")]
        self.assertTrue(any("/" in m for m in multiplicities), multiplicities)


class AmalgamTests(unittest.TestCase):

    def test_effective_irreducibles(self):
        group = extraspecial(3, 3, 3)
        effective = effective_irreducibles(group)
        self.assertEqual(len(effective), 2)

    def test_effective_characters(self):
        group = extraspecial(3, 3, 3)
        # Two effective irreducibles of degree 3: pairs (a, b) != 0 with a + b <= 6.
        self.assertEqual(len(effective_characters(group, 18)), 27)
        self.assertEqual(effective_characters(group, 2), [])

        with self.assertRaises(BadGroup):
            effective_characters(abelian(3, 3, 3), 9)

    def test_glued_subgroups(self):
        group, other = extraspecial(3, 3, 3), extraspecial(3, 3, 3)
        glued, glued_other = glued_subgroups(group, other)
        self.assertEqual(glued, center(group))
        self.assertEqual(glued_other.order, 3)
        self.assertEqual(glued_other.intersection_order(center(other)), 1)

    def test_obstruction(self):
        report = amalgam_obstruction(3)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.data["effective_E"], 27)
        self.assertEqual(report.data["effective_E'"], 27)
        self.assertFalse(report.observations)

    def test_vacuous_bound(self):
        report = amalgam_obstruction(3, degree_bound=2)
        self.assertTrue(report.passed)
        self.assertEqual([check.name for check in report.observations], ["vacuous"])

    def test_obstruction_p5(self):
        report = amalgam_obstruction(5, degree_bound=10)
        self.assertTrue(report.passed, report.failures)
        # Four effective irreducibles of degree 5: (a, b, c, d) != 0 with a + b + c + d <= 2.
        self.assertEqual(report.data["effective_E"], 14)


    def test_obstruction_p5_default_bound(self):
        report = amalgam_obstruction(5)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.parameters["degree_bound"], 50)
        # (a, b, c, d) != 0 with a + b + c + d <= 10.
        self.assertEqual(report.data["effective_E"], 1000)



if __name__ == '__main__':
    unittest.main()
