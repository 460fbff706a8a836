import logging
from collections import deque
from enum import Enum
from itertools import combinations, islice

import numpy as np

from grpcert import config
from grpcert.character.class_function import induce, restrict
from grpcert.character.dimension import dimension_function
from grpcert.character.fixed_points import require_character, top_rank_fpf_witness
from grpcert.character.table import character_table
from grpcert.construction.report import VerificationReport
from grpcert.errors import MissingAssignment, NoSuitableCharacters
from grpcert.group.subgroups import (center, conjugacy_classes, elementary_abelian_rank, members_of,
                                     minimal_overgroups, subgroup_class_members, subgroup_class_representatives)
from grpcert.utils import indices_to_bitset

_logger = logging.getLogger(__name__)


class Provenance(Enum):
    BETA_RANK3 = "beta_rank3"
    BETA_ABELIAN = "beta_abelian"
    EXPLICIT = "explicit"


class RepresentationFamily(object):
    """
    A character of every isotropy subgroup, one per conjugacy class of subgroups.
    """

    def __init__(self, group, assignment, provenance=Provenance.EXPLICIT, checked=False):
        """
        :param group: FiniteGroup.
        :param assignment: Dict subgroup class id -> ClassFunction on the class representative (as a group).
        :param provenance: Provenance of the characters.
        :param checked: Skip the character test of every assignment.
        """
        representatives = subgroup_class_representatives(group)
        for class_id, character in assignment.items():
            if character.group is not representatives[class_id].as_group():
                raise ValueError("Assignment of class %d does not live on the class representative." % class_id)
            if not checked:
                require_character(character)

        self.group = group
        self.assignment = dict(assignment)
        self.provenance = provenance

    def __contains__(self, class_id):
        return class_id in self.assignment

    def __getitem__(self, class_id):
        return self.assignment[class_id]

    def replace(self, class_id, character):
        """
        A copy of the family with one assignment swapped.
        """
        assignment = dict(self.assignment)
        assignment[class_id] = character
        return RepresentationFamily(self.group, assignment, Provenance.EXPLICIT)


class SphereActionModel(object):
    """
    Product of the unit spheres of the factor characters with the diagonal action, described by its isotropy.
    """

    def __init__(self, group, factors, isotropy, provenance="product"):
        self.group = group
        self.factors = list(factors)
        self.isotropy = sorted(isotropy, key=lambda record: record.sort_key)
        self.isotropy_classes = sorted(set(record.conjugacy_class_id for record in self.isotropy))
        self.rk_X = max([record.rank for record in self.isotropy] or [0])
        self.dims = [2 * int(chi.degree) - 1 for chi in self.factors]
        self.provenance = provenance
        self.observations = []

    def representatives(self):
        representatives = subgroup_class_representatives(self.group)
        return [representatives[class_id] for class_id in self.isotropy_classes]

    def all_abelian(self):
        return all(record.is_abelian for record in self.representatives())

    def observe(self, name, holds, witness=None):
        self.observations.append({"name": name, "holds": bool(holds), "witness": witness})

    def to_json(self):
        return {"provenance": self.provenance,
                "dims": self.dims,
                "rk_X": self.rk_X,
                "factor_degrees": [int(chi.degree) for chi in self.factors],
                "isotropy_classes": [{"class_id": record.conjugacy_class_id, "order": record.order,
                                      "rank": record.rank, "abelian": record.is_abelian,
                                      "members": record.members.tolist()}
                                     for record in self.representatives()],
                "observations": self.observations}


def isotropy_of_product(group, characters, checked=False, provenance="product"):
    """
    Isotropy of the product of the unit spheres S(V_1) x ... x S(V_k).
    H is a full stabilizer iff every factor has an H-fixed vector and no minimal overgroup keeps every fixed space.
    :param group: FiniteGroup.
    :param characters: Characters of the group, one per factor.
    :param checked: Skip the character test.
    :return: SphereActionModel.
    """
    functions = [dimension_function(chi, checked=checked) for chi in characters]

    isotropy = []
    for record in subgroup_class_representatives(group):
        dimensions = [f(record) for f in functions]
        if any(d == 0 for d in dimensions):
            continue
        # Fixed spaces only shrink along inclusions, so equal dimensions mean equal fixed sets.
        if any(all(f(overgroup) == d for f, d in zip(functions, dimensions))
               for overgroup in minimal_overgroups(group, record)):
            continue
        isotropy.extend(subgroup_class_members(group, record.conjugacy_class_id))

    model = SphereActionModel(group, characters, isotropy, provenance)
    _logger.info("Sphere product on %s has %d isotropy classes, rk_X = %d." % (group.label,
                                                                              len(model.isotropy_classes),
                                                                              model.rk_X))
    return model


def _kernel_bitset(character):
    classes = conjugacy_classes(character.group)
    trivial = np.array([value == 1 for value in character.values], dtype=bool)
    return indices_to_bitset(np.flatnonzero(trivial[classes.class_of]))


def free_linear_characters(group, count, limit=None):
    """
    The first combination, in character table order, of nontrivial linear characters with trivial joint kernel.
    :param group: FiniteGroup, usually an abelian subgroup group.
    :param count: Number of characters.
    :param limit: Maximum number of combinations tried. Default config.center_character_search_limit.
    :return: List of ClassFunction.
    """
    if limit is None:
        limit = config.center_character_search_limit

    linear = character_table(group).linear_characters()[1:]
    kernels = [_kernel_bitset(chi) for chi in linear]
    everything = (1 << group.order) - 1

    for combination in islice(combinations(range(len(linear)), count), limit):
        joint = everything
        for i in combination:
            joint &= kernels[i]
        if joint == 1:
            return [linear[i] for i in combination]

    raise NoSuitableCharacters("No %d linear characters of %s with trivial joint kernel among %d combinations."
                               % (count, group.label, limit), witness={"linear_characters": len(linear)})


def center_sphere_family(group, limit=None):
    """
    Product of the spheres of characters induced from linear characters of the center acting freely on it.
    Records whether rk_X = rk(G) - rk(Z(G)) and whether every isotropy subgroup is abelian.
    :param group: p-group.
    :param limit: Combinations of linear characters tried.
    :return: SphereActionModel.
    """
    group_center = center(group)
    linear = free_linear_characters(group_center.as_group(), group_center.rank, limit)

    factors = []
    for i, chi in enumerate(linear):
        induced = induce(chi, group)
        induced.name = "Ind_Z(lambda%d)" % i
        factors.append(induced)

    model = isotropy_of_product(group, factors, checked=True, provenance="center")

    expected_rank = elementary_abelian_rank(group) - group_center.rank
    model.observe("rk_X = rk(G) - rk(Z(G))", model.rk_X == expected_rank,
                  {"rk_X": model.rk_X, "expected": expected_rank})

    nonabelian = [record for record in model.representatives() if not record.is_abelian]
    model.observe("abelian isotropy", not nonabelian,
                  {"members": nonabelian[0].members.tolist()} if nonabelian else None)
    return model


def family_from_character(model, character, provenance=Provenance.EXPLICIT, checked=False):
    """
    Restrictions of one character of G to every isotropy class representative.
    """
    assignment = {record.conjugacy_class_id: restrict(character, record) for record in model.representatives()}
    return RepresentationFamily(model.group, assignment, provenance, checked=checked)


def conjugators(group, record):
    """
    For every conjugate of the subgroup, an element g with g H g^-1 equal to it.
    :return: Dict bitset -> element index.
    """
    found = {record.member_set: 0}
    queue = deque([(record.members, 0)])
    while queue:
        members, g = queue.popleft()
        for s in group.generators:
            conjugate = np.sort(group.mul[group.mul[s, members], group.inv[s]])
            bits = indices_to_bitset(conjugate)
            if bits not in found:
                found[bits] = int(group.mul[s, g])
                queue.append((conjugate, found[bits]))
    return found


def _compatibility_witness(group, family, tau, sigma, sigma_conjugators):
    """
    First conjugate g sigma g^-1 containing tau where the transported character of sigma disagrees with tau's.
    :return: (number of conjugates tested, witness or None).
    """
    rho_tau, rho_sigma = family[tau.conjugacy_class_id], family[sigma.conjugacy_class_id]
    tested = 0
    for bits, g in sigma_conjugators.items():
        if tau.member_set & ~bits:
            continue
        tested += 1
        # rho on g sigma g^-1 is t -> rho_sigma(g^-1 t g).
        pulled = group.mul[group.mul[group.inv[g], tau.members], g]
        positions = np.searchsorted(sigma.members, pulled)
        for i, position in enumerate(positions):
            transported, own = rho_sigma(int(position)), rho_tau(i)
            if transported != own:
                return tested, {"tau": tau.members.tolist(), "sigma": members_of(group, bits).tolist(),
                                    "conjugator": g, "element": int(tau.members[i]),
                                    "restricted": transported, "assigned": own}
    return tested, None


def check_family(group, model, family, rank=None):
    """
    Hypotheses of the isotropy rank reduction: assignments restrict compatibly along every inclusion of isotropy
    subgroups (up to conjugacy), and are fixed point free on the top rank elementary abelian subgroups.
    :param group: FiniteGroup.
    :param model: SphereActionModel.
    :param family: RepresentationFamily over the model's isotropy classes.
    :param rank: Top rank r; default model.rk_X.
    :return: VerificationReport.
    """
    if rank is None:
        rank = model.rk_X

    missing = [class_id for class_id in model.isotropy_classes if class_id not in family]
    if missing:
        raise MissingAssignment("Isotropy classes %s of %s have no assigned character." % (missing, group.label),
                                witness={"classes": missing})

    report = VerificationReport("isotropy_rank_reduction", group.label,
                                {"rank": rank, "provenance": family.provenance, "rk_X": model.rk_X})
    representatives = model.representatives()

    for sigma in representatives:
        sigma_conjugators = None
        for tau in representatives:
            if tau.order >= sigma.order or sigma.order % tau.order:
                continue
            if sigma_conjugators is None:
                sigma_conjugators = conjugators(group, sigma)
            tested, witness = _compatibility_witness(group, family, tau, sigma, sigma_conjugators)
            if tested == 0:
                continue
            name = "compatible restriction class %d < class %d" % (tau.conjugacy_class_id,
                                                                   sigma.conjugacy_class_id)
            report.check(name, witness is None, witness or {"conjugates": tested})

    for sigma in representatives:
        if sigma.rank != model.rk_X:
            continue
        character = family[sigma.conjugacy_class_id]
        witness = top_rank_fpf_witness(character, rank, checked=True)
        report.check("top rank fixed point free on class %d" % sigma.conjugacy_class_id, witness is None,
                     witness or {"order": sigma.order})

    report.assume("Equivariant gluing over the isotropy strata lowers the isotropy rank to rk_X - 1 once these "
                  "hypotheses hold.")
    report.data["model"] = model.to_json()
    return report.finish()
