import logging
from collections import Counter

import numpy as np

from grpcert import config
from grpcert.character.fixed_points import fixed_dimension
from grpcert.character.table import character_table
from grpcert.construction.report import VerificationReport
from grpcert.errors import BadGroup
from grpcert.group.catalog import extraspecial
from grpcert.group.subgroups import all_subgroups, center, elementary_abelian_subgroups

_logger = logging.getLogger(__name__)


def _validate_extraspecial(group):
    """
    :return: The odd prime p when the group is extraspecial of order p^3 and exponent p.
    """
    p = group.prime
    if p is None or p == 2 or group.order != p ** 3:
        raise BadGroup("%s is not a group of order p^3 for an odd prime p." % group.label,
                       witness={"order": group.order})
    if center(group).order != p or group.exponent != p:
        raise BadGroup("%s is not extraspecial of exponent %d." % (group.label, p),
                       witness={"center_order": center(group).order, "exponent": group.exponent})
    return p


def effective_irreducibles(group):
    """
    Irreducibles with no fixed vector on any rank 2 elementary abelian subgroup.
    :return: List of irreducible indices.
    """
    table = character_table(group)
    planes = elementary_abelian_subgroups(group, 2)
    return [i for i, chi in enumerate(table)
            if all(fixed_dimension(chi, members) == 0 for members in planes)]


def _combinations(degrees, budget):
    """
    Non-negative multiplicity vectors with sum(m_i d_i) <= budget, in lexicographic order.
    """
    if not degrees:
        yield ()
        return
    for m in range(budget // degrees[0] + 1):
        for rest in _combinations(degrees[1:], budget - m * degrees[0]):
            yield (m,) + rest


def effective_characters(group, degree_bound):
    """
    Characters of degree 1..D whose unit sphere has isotropy rank at most 1: the multiplicity vectors whose
    character fixes no vector of any rank 2 elementary abelian subgroup.
    A sum of characters fixes a vector iff some summand does, so only effective irreducibles take part.
    :param group: Extraspecial group of order p^3 and exponent p, p odd.
    :param degree_bound: Largest degree D.
    :return: Sorted list of multiplicity vectors (tuples over the character table).
    :raise BadGroup: for any other group.
    """
    _validate_extraspecial(group)
    table = character_table(group)
    effective = effective_irreducibles(group)

    vectors = []
    for combination in _combinations([table.degrees[i] for i in effective], degree_bound):
        if not any(combination):
            continue
        vector = [0] * len(table)
        for i, m in zip(effective, combination):
            vector[i] = m
        vectors.append(tuple(vector))

    _logger.debug("%d effective characters of degree at most %d on %s." % (len(vectors), degree_bound, group.label))
    return sorted(vectors)


def glued_subgroups(group, other):
    """
    The amalgamated Z/p: the center of the first group and the least noncentral subgroup of order p of the second.
    :return: (SubgroupRecord of group, SubgroupRecord of other).
    """
    other_center = center(other)
    noncentral = [record for record in all_subgroups(other)
                  if record.order == other.prime and not record.is_subgroup_of(other_center)]
    return center(group), min(noncentral, key=lambda record: record.sort_key)


def _vanishes_outside(character, subgroup):
    flags = np.zeros(character.group.order, dtype=bool)
    flags[subgroup.members] = True
    return [int(x) for x in character.classes.representatives
            if not flags[x] and not character(int(x)).is_zero()]


def _fixed_dimensions(group, subgroup, vectors):
    """
    Fixed dimensions of the subgroup for each multiplicity vector, by linearity over the irreducibles.
    """
    per_irreducible = [fixed_dimension(chi, subgroup) for chi in character_table(group)]
    return [sum(m * n for m, n in zip(vector, per_irreducible)) for vector in vectors]


def amalgam_obstruction(p, degree_bound=None):
    """
    No pair of effective spheres over E and E' = extraspecial(p,3,exp p) has dimension functions agreeing on the
    amalgamated Z/p, which is Z(E) in E and a noncentral subgroup of order p in E'.
    :param p: Odd prime.
    :param degree_bound: Largest degree of the enumerated characters. Default config.amalgam_degree_bound_factor p^2.
    :return: VerificationReport.
    """
    if degree_bound is None:
        degree_bound = config.amalgam_degree_bound_factor * p ** 2

    group = extraspecial(p, 3, p)
    other = extraspecial(p, 3, p)
    other.label = "extraspecial(%d,3,exp %d)'" % (p, p)
    _validate_extraspecial(group)

    report = VerificationReport("amalgam_obstruction", group.label, {"p": p, "degree_bound": degree_bound})
    report.observe_table(character_table(group))
    glued, glued_other = glued_subgroups(group, other)
    report.check("glued subgroup meets the center of E' trivially",
                 glued_other.intersection_order(center(other)) == 1,
                 {"members": glued_other.members.tolist()})

    # Structural dichotomy on every irreducible, independent of the degree bound.
    table = character_table(group)
    effective = effective_irreducibles(group)
    report.check("effective irreducibles are the p - 1 faithful ones", len(effective) == p - 1 and
                 all(table.degrees[i] == p for i in effective),
                 {"effective": effective, "degrees": [table.degrees[i] for i in effective]})
    for i in effective:
        outside = _vanishes_outside(table[i], glued)
        report.check("irreducible %d vanishes outside Z(E)" % i, not outside, {"elements": outside[:5]})
        dimension = fixed_dimension(table[i], glued)
        report.check("irreducible %d has no fixed vector on Z(E)" % i, dimension == 0,
                     {"fixed_dimension": dimension})
    other_table = character_table(other)
    for i in effective_irreducibles(other):
        dimension = fixed_dimension(other_table[i], glued_other)
        report.check("irreducible %d of E' fixes deg/p on the glued subgroup" % i, dimension == 1,
                     {"fixed_dimension": dimension, "degree": other_table.degrees[i]})

    vectors = effective_characters(group, degree_bound)
    other_vectors = effective_characters(other, degree_bound)
    dimensions = _fixed_dimensions(group, glued, vectors)
    other_dimensions = _fixed_dimensions(other, glued_other, other_vectors)

    nonzero = [(v, n) for v, n in zip(vectors, dimensions) if n != 0]
    report.check("effective characters of E fix nothing on Z(E)", not nonzero,
                 {"characters": len(vectors), "first": nonzero[0] if nonzero else None})

    degrees = [sum(m * d for m, d in zip(v, other_table.degrees)) for v in other_vectors]
    mismatched = [(v, n) for v, n, d in zip(other_vectors, other_dimensions, degrees) if n * p != d]
    report.check("effective characters of E' fix deg/p on the glued subgroup", not mismatched,
                 {"characters": len(other_vectors), "first": mismatched[0] if mismatched else None})

    left, right = Counter(dimensions), Counter(other_dimensions)
    agreements = sum(left[n] * right[n] for n in left)
    witness = None
    if agreements:
        n = min(set(left) & set(right))
        witness = {"chi_E": vectors[dimensions.index(n)], "chi_E'": other_vectors[other_dimensions.index(n)],
                   "fixed_dimension": n}
    report.check("no agreeing pair of effective characters", agreements == 0,
                 witness or {"pairs": len(vectors) * len(other_vectors)})

    if not vectors or not other_vectors:
        report.observe("vacuous", {"effective_E": len(vectors), "effective_E'": len(other_vectors)})

    report.data["effective_E"] = len(vectors)
    report.data["effective_E'"] = len(other_vectors)
    report.data["structural_reason"] = ("effective characters of E are sums of irreducibles vanishing outside "
                                        "Z(E), so n = 0 on Z(E); on E' the glued subgroup fixes deg/p > 0")
    report.assume("An action of the amalgam on a finite complex homotopy equivalent to a sphere restricts to "
                  "effective spheres on both vertex groups.")
    _logger.info("amalgam obstruction for p = %d: %s" % (p, report.counts()))
    return report.finish()
