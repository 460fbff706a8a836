import logging

import numpy as np
from sympy import QQ

from grpcert.character.table import decompose
from grpcert.errors import NotACharacter
from grpcert.group.subgroups import SubgroupRecord, elementary_abelian_subgroups

_logger = logging.getLogger(__name__)


def require_character(character):
    """
    Raise NotACharacter unless the class function is a character of its group.
    """
    decomposition = decompose(character)
    if not decomposition.is_character:
        raise NotACharacter("%s is not a character of %s." % (character.name or "Class function",
                                                              character.group.label),
                            witness=decomposition.witness)
    return decomposition


def fixed_dimension(character, subgroup):
    """
    Dimension of the fixed subspace of a subgroup, <chi|_H, 1_H> = 1/|H| sum over h in H of chi(h).
    :param character: ClassFunction on G.
    :param subgroup: SubgroupRecord of G or an array of member indices.
    :return: int for characters; the exact Cyclotomic otherwise.
    """
    members = subgroup.members if isinstance(subgroup, SubgroupRecord) else np.asarray(subgroup, dtype=np.int64)
    value = character.sum_over(members).scale(QQ(1, int(members.size)))
    return int(value) if value.is_integer() else value


def strict_fpf_witness(character, checked=False):
    """
    A nonidentity element fixing a nonzero vector, or None if the representation is free.
    The fixed dimension of <x> only depends on the class of x, so class representatives suffice.
    """
    if not checked:
        require_character(character)

    group = character.group
    for x in character.classes.representatives[1:]:
        x = int(x)
        dimension = fixed_dimension(character, group.closure([x]))
        if dimension != 0:
            return {"element": x, "element_order": int(group.element_order[x]), "fixed_dimension": dimension}
    return None


def is_strictly_fpf(character, checked=False):
    """
    True when no nonidentity element fixes a nonzero vector.
    :raise NotACharacter: when the class function is not a character.
    """
    return strict_fpf_witness(character, checked) is None


def top_rank_fpf_witness(character, rank, checked=False):
    """
    An elementary abelian subgroup of the given rank with a nonzero fixed subspace, or None.
    """
    if not checked:
        require_character(character)

    group = character.group
    for members in elementary_abelian_subgroups(group, rank):
        dimension = fixed_dimension(character, members)
        if dimension != 0:
            _logger.debug("Rank %d subgroup %s of %s fixes a subspace of dimension %s."
                          % (rank, members.tolist(), group.label, dimension))
            return {"subgroup": members.tolist(), "rank": rank, "fixed_dimension": dimension}
    return None


def is_top_rank_fpf(character, rank, checked=False):
    """
    True when every elementary abelian subgroup of the given rank fixes only the zero vector.
    Vacuously true when there is no such subgroup.
    :raise NotACharacter: when the class function is not a character.
    """
    return top_rank_fpf_witness(character, rank, checked) is None
