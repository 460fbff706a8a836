import logging

import numpy as np

from grpcert import config
from grpcert.character.class_function import ClassFunction, induce, reduced_regular, restrict
from grpcert.character.fixed_points import top_rank_fpf_witness
from grpcert.character.table import character_table, decompose
from grpcert.construction.report import VerificationReport
from grpcert.errors import NonAbelianIsotropy, PreconditionFailed, RankExceedsTarget
from grpcert.group.subgroups import conjugacy_classes, inner_subgroup_group, omega_one

_logger = logging.getLogger(__name__)

# Orders in which the generators of A_p are picked for the injection A_p -> (Z/p)^r.
BASIS_ORDERS = ("least", "greatest")


def beta_abelian(group, rank, p=None):
    """
    |G|(p^r - 1) at 1, -|G| on elements of order p, 0 elsewhere.
    :param group: FiniteGroup, a p-group unless p is given.
    :param rank: Target rank r >= 0.
    :param p: The prime; default the prime of the p-group.
    :return: ClassFunction on the group.
    """
    if p is None:
        p = group.prime
    if p is None:
        raise PreconditionFailed("%s is not a p-group; pass the prime explicitly." % group.label)
    if rank < 0:
        raise ValueError("Rank cannot be negative, but %d was provided." % rank)

    n = group.order
    orders = group.element_order[conjugacy_classes(group).representatives]
    values = np.where(orders == p, -n, 0).astype(object)
    values[0] = n * (p ** rank - 1)
    return ClassFunction(group, values.tolist(), name="beta_abelian(r=%d)" % rank)


def greedy_basis(group, members, basis_order="least"):
    """
    A basis of an elementary abelian subgroup: walk its elements in index order and keep each outside the span.
    """
    if basis_order not in BASIS_ORDERS:
        raise ValueError("Basis order must be one of %s, but '%s' was provided." % (BASIS_ORDERS, basis_order))

    walk = members[1:] if basis_order == "least" else members[:0:-1]
    basis = []
    span = np.zeros(group.order, dtype=bool)
    span[0] = True
    for x in walk:
        if not span[x]:
            basis.append(int(x))
            span[:] = False
            span[group.closure(basis)] = True
    return basis


def _coordinates(group, basis, p):
    """
    Coordinates of every element of <basis> = (Z/p)^s in the given basis.
    :return: Dict element -> tuple of exponents.
    """
    coordinates = {0: (0,) * len(basis)}
    for k, b in enumerate(basis):
        for element, vector in list(coordinates.items()):
            current = element
            for e in range(1, p):
                current = int(group.mul[current, b])
                coordinates[current] = vector[:k] + (e,) + vector[k + 1:]
    return coordinates


def eta_character(group, subgroup, rank, basis_order="least"):
    """
    eta = |G||A_p|/|A| Ind_{A_p}^A(rho_0 o f), f: A_p -> (Z/p)^r sending a greedy basis of A_p to the first standard
    basis vectors and rho_0 the reduced regular character of (Z/p)^r.
    :param group: p-group G.
    :param subgroup: Abelian SubgroupRecord A.
    :param rank: Target rank r.
    :param basis_order: "least" or "greatest" index first when picking the basis of A_p.
    :return: ClassFunction on subgroup.as_group().
    """
    p = group.prime
    if not subgroup.is_abelian:
        raise NonAbelianIsotropy("Isotropy subgroup %s is not abelian." % subgroup.members.tolist(),
                                 witness={"members": subgroup.members.tolist()})

    omega = omega_one(group, subgroup, p)
    basis = greedy_basis(group, omega.members, basis_order)
    if len(basis) > rank:
        raise RankExceedsTarget("A_p has rank %d, above the target rank %d." % (len(basis), rank),
                                witness={"members": subgroup.members.tolist(), "rank": len(basis)})

    coordinates = _coordinates(group, basis, p)
    images = set(coordinates.values())
    if len(images) != omega.order:
        raise ValueError("Basis %s does not give an injection of A_p." % basis)

    omega_group = inner_subgroup_group(subgroup, omega.members)
    ambient = subgroup.members[omega_group.parent_indices]
    top = p ** rank - 1

    # Padding the coordinates with zeros is the injection; rho_0 only sees whether the image vanishes.
    def rho(element):
        image = coordinates[int(ambient[element])] + (0,) * (rank - len(basis))
        return top if not any(image) else -1

    rho = ClassFunction.from_element_function(omega_group, rho)
    eta = induce(rho, subgroup.as_group()) * (group.order * omega.order // subgroup.order)
    eta.name = "eta(%s)" % basis_order
    return eta


def verify_abelian(group, model, rank=None, sweep_injections=False):
    """
    Certify beta_abelian on the abelian isotropy of a sphere action model: beta|_A = eta(A) is a character on every
    isotropy class, and a multiple of the reduced regular character, fixed point free, on A = (Z/p)^r.
    :param group: p-group.
    :param model: SphereActionModel.
    :param rank: Target rank; default model.rk_X.
    :param sweep_injections: Compare eta for several injections A_p -> (Z/p)^r.
    :return: VerificationReport.
    :raise NonAbelianIsotropy: when an isotropy subgroup is not abelian.
    :raise RankExceedsTarget: when rk(A_p) exceeds the target rank.
    """
    if rank is None:
        rank = model.rk_X
    p = group.prime
    representatives = model.representatives()

    for record in representatives:
        if not record.is_abelian:
            raise NonAbelianIsotropy("Isotropy subgroup of order %d of %s is not abelian."
                                     % (record.order, group.label), witness={"members": record.members.tolist()})
        if omega_one(group, record, p).rank > rank:
            raise RankExceedsTarget("Isotropy subgroup %s has rank above %d." % (record.members.tolist(), rank),
                                    witness={"members": record.members.tolist(), "rank": record.rank})

    report = VerificationReport("abelian_isotropy", group.label, {"rank": rank, "rk_X": model.rk_X,
                                                                  "sweep_injections": sweep_injections})
    report.observe_table(character_table(group))
    beta = beta_abelian(group, rank)

    for record in representatives:
        name = "class %d" % record.conjugacy_class_id
        restricted = restrict(beta, record)
        eta = eta_character(group, record, rank)

        differences = restricted.differences(eta)
        report.check(name + ": eta equals beta", not differences, {"order": record.order, "classes": differences[:5]})

        decomposition = decompose(eta)
        report.check(name + ": character", decomposition.is_character,
                     decomposition.witness or {"degree": int(eta.degree)})

        if sweep_injections:
            for basis_order in BASIS_ORDERS[1:config.abelian_injection_sweep]:
                other = eta_character(group, record, rank, basis_order)
                report.check(name + ": injection independent (%s)" % basis_order, other == eta,
                             {"classes": eta.differences(other)[:5]})

        if record.is_elementary_abelian and record.order == p ** rank and rank > 0:
            multiple = reduced_regular(record.as_group()) * group.order
            report.check(name + ": multiple of the reduced regular character", restricted == multiple,
                         {"factor": group.order})
            witness = top_rank_fpf_witness(restricted, rank, checked=True)
            report.check(name + ": top rank fixed point free", witness is None, witness or {"rank": rank})

    report.assume("The free complex is built by induction on rk_X, starting from the rank one construction for "
                  "finite groups.")
    report.data["model"] = model.to_json()
    _logger.info("abelian isotropy verification of %s: %s" % (group.label, report.counts()))
    return report.finish()
