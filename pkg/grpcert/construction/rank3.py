"""
The class function beta of a rank 3 odd p-group with cyclic center, the closed forms of its restrictions to the
subgroups meeting the center trivially, and the verification that those restrictions are characters.
"""
import logging

import numpy as np

from grpcert.character.class_function import ClassFunction, embedding, induce, regular_character, restrict
from grpcert.character.cyclotomic import Cyclotomic
from grpcert.character.fixed_points import strict_fpf_witness, top_rank_fpf_witness
from grpcert.character.table import character_table, decompose
from grpcert.construction.isotropy import (Provenance, center_sphere_family, check_family, family_from_character,
                                           free_linear_characters, isotropy_of_product)
from grpcert.construction.report import CheckStatus, VerificationReport
from grpcert.errors import GroupCertError, NoCaseMatches, NoSuchQ, PreconditionFailed, Unclassifiable
from grpcert.group.structure import (SubgroupType, centralizer_index, check_rank3_preconditions, classify_subgroup,
                                     find_normal_Q, valid_normal_Qs)
from grpcert.group.subgroups import (center, center_and_centralizer, conjugacy_classes, elementary_abelian_rank,
                                     elementary_abelian_subgroups, inner_subgroup_group, make_record, omega_one,
                                     positions_in, subgroup_class_representatives)
from grpcert.utils import parallel_map

_logger = logging.getLogger(__name__)


def _centralizer(group, Q):
    return group.cached(("centralizer", Q.member_set), lambda: center_and_centralizer(group, Q))


def _flags(group, members):
    flags = np.zeros(group.order, dtype=bool)
    flags[members] = True
    return flags


def _validate_rank3_input(group, Q):
    reasons = check_rank3_preconditions(group)
    if reasons:
        raise PreconditionFailed("beta is defined for odd p-groups of rank 3 with cyclic center: %s."
                                 % "; ".join(reasons), witness={"reasons": reasons})
    if Q.member_set not in set(record.member_set for record in valid_normal_Qs(group)):
        raise PreconditionFailed("Q = %s is not a normal subgroup of type (p, p) meeting the center of %s."
                                 % (Q.members.tolist(), group.label))


def beta_rank3(group, Q):
    """
    The piecewise class function along 1 < Z(G) < Q < C_G(Q) < G:
    (p^2 - p)|G| at 1, 0 on Z(G)\\1, -p|G| on Q\\Z(G), 0 on C_G(Q)\\Q, -|G| on elements of order p outside C_G(Q)
    and 0 on the other elements outside C_G(Q).
    :param group: Odd p-group of rank 3 with cyclic center.
    :param Q: Normal subgroup from find_normal_Q.
    :return: ClassFunction on the group.
    """
    _validate_rank3_input(group, Q)
    p, n = group.prime, group.order

    in_center = _flags(group, center(group).members)
    in_Q = _flags(group, Q.members)
    in_centralizer = _flags(group, _centralizer(group, Q).members)

    values = np.zeros(group.order, dtype=np.int64)
    values[(group.element_order == p) & ~in_centralizer] = -n
    values[in_Q & ~in_center] = -p * n
    values[0] = (p * p - p) * n

    classes = conjugacy_classes(group)
    per_class = values[classes.representatives]
    if not np.array_equal(per_class[classes.class_of], values):
        raise PreconditionFailed("beta is not constant on the conjugacy classes of %s." % group.label)

    return ClassFunction(group, per_class.tolist(), name="beta")


def rank3_case(group, Q, subgroup):
    """
    Closed form that describes beta on a subgroup H with H n Z(G) = 1:
    1: H n Q != 1; 2: H n Q = 1 and H cyclic, inside C_G(Q) or of order above p; 3: H of order p outside C_G(Q);
    4: H abelian with a cyclic subgroup of index p; 5: H = M(p^n).
    :return: (case number, CLASSIFICATION).
    """
    classification = classify_subgroup(group, Q, subgroup)
    p = group.prime
    centralizer = _centralizer(group, Q)

    if subgroup.intersection_order(Q) > 1:
        return 1, classification

    if subgroup.is_subgroup_of(centralizer):
        if classification.tag != SubgroupType.CYCLIC:
            raise NoCaseMatches("Noncyclic subgroup of C_G(Q) meets Q trivially in %s." % group.label,
                                witness={"members": subgroup.members.tolist()})
        return 2, classification

    if classification.tag == SubgroupType.CYCLIC:
        # beta vanishes on H\1 once the generators have order above p.
        return (3 if subgroup.order == p else 2), classification
    if classification.tag == SubgroupType.ABELIAN_MAXIMAL_CYCLIC:
        return 4, classification
    if classification.tag == SubgroupType.MODULAR:
        return 5, classification

    raise NoCaseMatches("Subgroup of order %d of %s with shape %s fits no closed form."
                        % (subgroup.order, group.label, classification.tag.value),
                        witness={"members": subgroup.members.tolist(), "shape": classification.tag.value})


def _reduced_character(group, subgroup_group, support=None):
    """
    p - 1 at 1 and -1 on the nonidentity elements of a subgroup of order p, 0 elsewhere.
    :param support: Flags over the elements of group marking the order p subgroup; None for the whole subgroup group.
    """
    indices = embedding(subgroup_group, group)
    p_minus_one = subgroup_group.order - 1 if support is None else int(support.sum()) - 1

    def value(element):
        if element == 0:
            return p_minus_one
        if support is None or support[indices[element]]:
            return -1
        return 0

    return ClassFunction.from_element_function(subgroup_group, value)


def _least_member(group, members, condition):
    hits = members[condition[members]]
    return int(hits[0]) if hits.size else None


def _abelian_case(group, Q, subgroup):
    """
    H abelian of type (p, p^(m-1)) with H n Q = 1: beta|_H = p|G|/|H| sum over 0 <= i < p of Ind_{H_i}^H(phi_i),
    H_i = <x y^(i p^(m-2))>, y generating H n C_G(Q), x of order p outside C_G(Q), phi_i the reduced regular
    character of H_i.
    """
    p, n = group.prime, group.order
    members = subgroup.members
    in_centralizer = _flags(group, _centralizer(group, Q).members)
    cyclic_part = members[in_centralizer[members]]

    y = _least_member(group, members, in_centralizer & (group.element_order == cyclic_part.size))
    x = _least_member(group, members, ~in_centralizer & (group.element_order == p))
    if y is None or x is None or cyclic_part.size * p != subgroup.order:
        raise NoCaseMatches("H n C_G(Q) is not a cyclic subgroup of index p in H.",
                            witness={"members": members.tolist(), "cyclic_part": cyclic_part.tolist()})

    step = cyclic_part.size // p
    subgroup_group = subgroup.as_group()
    total = None
    for i in range(p):
        generator = group.mul[x, group.power(y, i * step)]
        small = inner_subgroup_group(subgroup, group.closure([generator]))
        induced = induce(_reduced_character(group, small), subgroup_group)
        total = induced if total is None else total + induced

    return total * (p * n // subgroup.order)


def _modular_case(group, Q, subgroup):
    """
    H = M(p^m) with H n Q = 1: N = Omega_1(H) = (Z/p)^2, phi on N is p - 1 at 1, -1 on <y>\\1 for an element y of
    order p outside Z(H), 0 elsewhere; beta|_H = p|G|/|H:N| Ind_N^H(phi).
    """
    p, n = group.prime, group.order
    subgroup_group = subgroup.as_group()
    omega = omega_one(group, subgroup, p)
    if omega.order != p * p:
        raise NoCaseMatches("Omega_1(H) has order %d, not p^2." % omega.order,
                            witness={"members": subgroup.members.tolist()})

    local_center = center(subgroup_group)
    in_local_center = _flags(group, subgroup.members[local_center.members])
    y = _least_member(group, omega.members, ~in_local_center & (group.element_order == p))
    if y is None:
        raise NoCaseMatches("Omega_1(H) lies in the center of H.", witness={"members": subgroup.members.tolist()})

    omega_group = inner_subgroup_group(subgroup, omega.members)
    phi = _reduced_character(group, omega_group, _flags(group, group.closure([y])))
    return induce(phi, subgroup_group) * (p * n * omega.order // subgroup.order)


def _case_formula(group, Q, subgroup, case):
    p, n = group.prime, group.order
    subgroup_group = subgroup.as_group()

    if case == 1:
        intersection = subgroup.members[np.isin(subgroup.members, Q.members)]
        small = inner_subgroup_group(subgroup, intersection)
        formula = induce(_reduced_character(group, small), subgroup_group) * (p * n * intersection.size //
                                                                             subgroup.order)
    elif case == 2:
        formula = regular_character(subgroup_group) * ((p * p - p) * n // subgroup.order)
    elif case == 3:
        values = [p ** 3 - p ** 2] + [-p] * (subgroup.order - 1)
        formula = ClassFunction(subgroup_group, values) * (n // p)
    elif case == 4:
        formula = _abelian_case(group, Q, subgroup)
    else:
        formula = _modular_case(group, Q, subgroup)

    formula.name = "case %d" % case
    return formula


def beta_rank3_case_formula(group, Q, subgroup):
    """
    The predicted restriction of beta to H, built from the closed form of H's case.
    :param group: Odd p-group of rank 3 with cyclic center.
    :param Q: Normal subgroup from find_normal_Q.
    :param subgroup: SubgroupRecord with H n Z(G) = 1.
    :return: ClassFunction on subgroup.as_group().
    :raise NoCaseMatches: when H fits no closed form.
    """
    try:
        case, _ = rank3_case(group, Q, subgroup)
    except Unclassifiable as error:
        raise NoCaseMatches(str(error), witness=error.witness)
    return _case_formula(group, Q, subgroup, case)


def beta_rank3_display_formula(group, Q, subgroup):
    """
    beta on a rank 2 elementary abelian H = <a> x <b> with H n Z(G) = 1, as sums of products phi_i(a) phi_j(b) of
    characters of the two cyclic factors:
    |G| sum_{i, j >= 1} phi_i phi_j when b generates H n Q, and
    (p - 1)|G|/p sum_{i, j >= 1} phi_i phi_j + |G| sum_{i >= 1} phi_i phi_0 when b generates H n C_G(Q).
    :return: ClassFunction on subgroup.as_group().
    """
    p, n = group.prime, group.order
    if not subgroup.is_elementary_abelian or subgroup.order != p * p or \
            subgroup.intersection_order(center(group)) != 1:
        raise PreconditionFailed("The closed forms need a rank 2 elementary abelian subgroup meeting the center "
                                 "trivially.")

    meets_Q = subgroup.intersection_order(Q) > 1
    second = Q if meets_Q else _centralizer(group, Q)
    in_second = _flags(group, second.members)
    factor = subgroup.members[in_second[subgroup.members]]
    if factor.size != p:
        raise NoCaseMatches("H meets C_G(Q) in %d elements." % factor.size,
                            witness={"members": subgroup.members.tolist()})

    b = int(factor[1])
    a = _least_member(group, subgroup.members, ~in_second)

    coordinates = {}
    for u in range(p):
        for v in range(p):
            element = group.mul[group.power(a, u), group.power(b, v)]
            coordinates[int(positions_in(subgroup, [element])[0])] = (u, v)

    def value(element):
        u, v = coordinates[element]
        double = {}
        for i in range(p):
            for j in range(1, p):
                double[(i * u + j * v) % p] = double.get((i * u + j * v) % p, 0) + 1
        double_sum = Cyclotomic.from_powers(p, double)
        if meets_Q:
            return double_sum * n
        single = Cyclotomic.from_powers(p, {(i * u) % p: 1 for i in range(1, p)}) if u else \
            Cyclotomic.rational(p - 1)
        return double_sum * ((p - 1) * n // p) + single * n

    formula = ClassFunction.from_element_function(subgroup.as_group(), value)
    formula.name = "display formula"
    return formula


def _check_subgroup(group, Q, beta, subgroup, prefix):
    """
    Checks of beta on one subgroup class representative meeting the center trivially.
    :return: List of (name, status, witness).
    """
    p = group.prime
    name = "%s class %d" % (prefix, subgroup.conjugacy_class_id)
    checks = []

    restricted = restrict(beta, subgroup)
    decomposition = decompose(restricted)
    checks.append((name + ": character", CheckStatus.PASS if decomposition.is_character else CheckStatus.FAIL,
                   decomposition.witness or {"order": subgroup.order, "degree": int(restricted.degree)}))

    try:
        case, classification = rank3_case(group, Q, subgroup)
        checks.append((name + ": classification", CheckStatus.PASS, {"shape": classification.tag.value}))
        formula = _case_formula(group, Q, subgroup, case)
        differences = restricted.differences(formula)
        checks.append((name + ": case %d formula" % case, CheckStatus.FAIL if differences else CheckStatus.PASS,
                       {"case": case, "classes": differences[:5]}))
    except (Unclassifiable, NoCaseMatches) as error:
        checks.append((name + ": classification", CheckStatus.FAIL,
                       error.witness or {"message": str(error)}))

    if subgroup.is_elementary_abelian and subgroup.order == p * p:
        witness = top_rank_fpf_witness(restricted, 2, checked=True)
        checks.append((name + ": top rank fixed point free", CheckStatus.FAIL if witness else CheckStatus.PASS,
                       witness or {"rank": 2}))

        differences = restricted.differences(beta_rank3_display_formula(group, Q, subgroup))
        checks.append((name + ": display formula", CheckStatus.FAIL if differences else CheckStatus.PASS,
                       {"meets_Q": subgroup.intersection_order(Q) > 1, "classes": differences[:5]}))

        strict = strict_fpf_witness(restricted, checked=True)
        if strict is not None:
            checks.append((name + ": not strictly fixed point free", CheckStatus.OBSERVATION, strict))

    return checks


def _verify_noncyclic_center(group, report):
    """
    Two characters induced from linear characters of a (Z/p)^2 inside Z(G) with trivial joint kernel.
    """
    report.data["branch"] = "noncyclic center"
    group_center = center(group)
    in_center = [members for members in elementary_abelian_subgroups(group, 2)
                 if np.isin(members, group_center.members).all()]
    plane = make_record(group, in_center[0])

    factors = []
    for i, chi in enumerate(free_linear_characters(plane.as_group(), 2)):
        induced = induce(chi, group)
        induced.name = "Ind_E(lambda%d)" % i
        decomposition = decompose(induced)
        report.check("center character %d is a character" % i, decomposition.is_character,
                     decomposition.witness or {"degree": int(induced.degree)})
        factors.append(induced)

    model = isotropy_of_product(group, factors, checked=True)
    noncyclic = [record for record in model.representatives()
                 if record.order > 1 and int(group.element_order[record.members].max()) != record.order]
    report.check("cyclic isotropy", not noncyclic,
                 {"members": noncyclic[0].members.tolist()} if noncyclic else {"classes": len(model.isotropy_classes)})
    report.data["model"] = model.to_json()


def _verify_family(group, Q, beta, report):
    model = center_sphere_family(group)
    group_center = center(group)
    meeting = [record for record in model.representatives() if record.intersection_order(group_center) != 1]
    report.check("center sphere isotropy meets Z(G) trivially", not meeting,
                 {"members": meeting[0].members.tolist()} if meeting else {"rk_X": model.rk_X})
    for observation in model.observations:
        report.check("center sphere: " + observation["name"], observation["holds"],
                     observation["witness"] or {"holds": observation["holds"]})

    family = family_from_character(model, beta, Provenance.BETA_RANK3, checked=True)
    family_report = check_family(group, model, family, rank=2)
    for check in family_report.checks:
        report.add_check("family: " + check.name, check.status, check.witness)
    report.data["model"] = model.to_json()


def verify_rank3(group, sweep_all_Q=False, threads=1, include_family=True):
    """
    Certify the hypotheses of the cyclic isotropy construction on a rank 3 odd p-group.
    With rk(Z(G)) >= 2 the two center characters are exhibited; otherwise beta is checked on every subgroup class
    meeting the center trivially, and the center sphere family is checked against beta.
    :param group: FiniteGroup.
    :param sweep_all_Q: Check every valid Q, not only the least one.
    :param threads: Worker threads for the per subgroup checks.
    :param include_family: Also run the center sphere family check.
    :return: VerificationReport.
    """
    report = VerificationReport("rank3_free_action", group.label, {"sweep_all_Q": sweep_all_Q})

    p = group.prime
    reasons = []
    if p is None or group.order == 1:
        reasons.append("%s is not a nontrivial p-group" % group.label)
    else:
        if p == 2:
            reasons.append("%s is a 2-group" % group.label)
        if elementary_abelian_rank(group) != 3:
            reasons.append("rk(G) = %d, not 3" % elementary_abelian_rank(group))
    if reasons:
        report.add_check("precondition", CheckStatus.FAIL, {"reasons": reasons})
        return report.finish()
    report.check("precondition", True, {"p": p, "rank": 3})

    group_center = center(group)
    report.data["center_rank"] = group_center.rank
    if group_center.rank >= 2:
        _verify_noncyclic_center(group, report)
        report.assume("A free action on a product of three spheres follows from cyclic isotropy by the rank one "
                      "construction for finite groups.")
        return report.finish()

    report.data["branch"] = "cyclic center"
    report.observe_table(character_table(group))
    try:
        Qs = valid_normal_Qs(group) if sweep_all_Q else [find_normal_Q(group)]
    except NoSuchQ as error:
        report.add_check("normal Q", CheckStatus.FAIL, error.witness or {"message": str(error)})
        return report.finish()
    if not Qs:
        report.add_check("normal Q", CheckStatus.FAIL, {"message": "no valid Q"})
        return report.finish()

    representatives = [record for record in subgroup_class_representatives(group)
                       if record.intersection_order(group_center) == 1]
    report.data["subgroup_classes"] = len(representatives)

    for index, Q in enumerate(Qs):
        prefix = "Q%d" % index
        index_of_centralizer = centralizer_index(group, Q)
        report.check("%s: [G:C_G(Q)] = p" % prefix, index_of_centralizer == p,
                     {"Q": Q.members.tolist(), "index": index_of_centralizer})

        beta = beta_rank3(group, Q)
        results = parallel_map(lambda record: _check_subgroup(group, Q, beta, record, prefix), representatives,
                               threads)
        for checks in results:
            for name, status, witness in checks:
                report.add_check(name, status, witness)

        if include_family and index == 0:
            try:
                _verify_family(group, Q, beta, report)
            except GroupCertError as error:
                report.add_check("family", CheckStatus.FAIL, error.witness or {"message": str(error)})

    report.assume("Restriction compatibility and top rank freeness give a finite G-CW-complex homotopy "
                  "equivalent to a product of two spheres with cyclic isotropy.")
    report.assume("A free action on a product of three spheres follows from cyclic isotropy by the rank one "
                  "construction for finite groups.")
    _logger.info("rank 3 verification of %s: %s" % (group.label, report.counts()))
    return report.finish()
