import logging
from collections import namedtuple
from enum import Enum

import numpy as np

from grpcert.errors import NoSuchQ, PreconditionFailed, Unclassifiable
from grpcert.group.subgroups import all_subgroups, center, center_and_centralizer, elementary_abelian_rank

_logger = logging.getLogger(__name__)

CLASSIFICATION = namedtuple("CLASSIFICATION", ["tag", "witness"])


class SubgroupType(Enum):
    """
    The four shapes a subgroup meeting the center trivially can take, in the order they are tested.
    """
    CYCLIC = "cyclic"
    IN_CENTRALIZER_OF_Q = "in_centralizer_of_q"
    ABELIAN_MAXIMAL_CYCLIC = "abelian_maximal_cyclic"
    MODULAR = "modular"


def check_rank3_preconditions(group):
    """
    Reasons why the group is not an odd p-group of rank 3 with cyclic center; empty when it is.
    """
    reasons = []
    p = group.prime
    if p is None or group.order == 1:
        reasons.append("%s is not a nontrivial p-group" % group.label)
        return reasons
    if p == 2:
        reasons.append("%s is a 2-group" % group.label)
    rank = elementary_abelian_rank(group)
    if rank != 3:
        reasons.append("rk(G) = %d, not 3" % rank)
    center_rank = center(group).rank
    if center_rank != 1:
        reasons.append("rk(Z(G)) = %d, not 1" % center_rank)
    return reasons


def valid_normal_Qs(group):
    """
    Every normal subgroup Q of type (p, p) meeting the center nontrivially, in lexicographic member order.
    """
    p = group.prime
    group_center = center(group)
    candidates = [record for record in all_subgroups(group)
                  if record.order == p * p and record.is_normal and record.is_elementary_abelian and
                  record.intersection_order(group_center) > 1]
    return sorted(candidates, key=lambda record: tuple(record.members.tolist()))


def find_normal_Q(group):
    """
    The least normal elementary abelian subgroup of order p^2 meeting the center.
    :param group: Odd p-group of rank 3 with cyclic center.
    :return: SubgroupRecord.
    """
    reasons = check_rank3_preconditions(group)
    if reasons:
        raise NoSuchQ("No normal Q for %s: %s." % (group.label, "; ".join(reasons)), witness={"reasons": reasons})

    candidates = valid_normal_Qs(group)
    if not candidates:
        raise NoSuchQ("%s satisfies the preconditions but has no normal subgroup of type (p, p) meeting the center."
                      % group.label)

    _logger.debug("Selected Q = %s out of %d candidates in %s." % (candidates[0].members.tolist(), len(candidates),
                                                                   group.label))
    return candidates[0]


def centralizer_index(group, subgroup):
    return group.order // center_and_centralizer(group, subgroup).order


def _least_element_of_order(group, subgroup, order):
    members = subgroup.members
    hits = members[group.element_order[members] == order]
    return int(hits[0]) if hits.size else None


def classify_subgroup(group, Q, subgroup):
    """
    Shape of a subgroup H with H n Z(G) = 1. The first matching shape is reported:
    cyclic, inside C_G(Q), abelian of type (p, p^(n-1)), or M(p^n).
    :return: CLASSIFICATION(tag, witness).
    """
    group_center = center(group)
    if subgroup.intersection_order(group_center) != 1:
        raise PreconditionFailed("Subgroup %s meets the center of %s nontrivially."
                                 % (subgroup.members.tolist(), group.label))

    p = group.prime
    order = subgroup.order

    generator = _least_element_of_order(group, subgroup, order)
    if generator is not None:
        return CLASSIFICATION(SubgroupType.CYCLIC, {"generator": generator})

    centralizer = center_and_centralizer(group, Q)
    if subgroup.is_subgroup_of(centralizer):
        return CLASSIFICATION(SubgroupType.IN_CENTRALIZER_OF_Q, {"centralizer_order": centralizer.order})

    maximal_cyclic = _least_element_of_order(group, subgroup, order // p)
    if maximal_cyclic is not None and order >= p * p:
        if subgroup.is_abelian:
            return CLASSIFICATION(SubgroupType.ABELIAN_MAXIMAL_CYCLIC, {"maximal_cyclic_generator": maximal_cyclic})
        if p % 2 == 1 and order >= p ** 3:
            return CLASSIFICATION(SubgroupType.MODULAR, {"maximal_cyclic_generator": maximal_cyclic})

    orders = np.unique(group.element_order[subgroup.members]).tolist()
    raise Unclassifiable("Subgroup of order %d with element orders %s in %s fits no known shape."
                         % (order, orders, group.label),
                         witness={"members": subgroup.members.tolist(), "element_orders": orders})
