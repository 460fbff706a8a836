from collections import namedtuple
from itertools import combinations, product

import numpy as np

from grpcert.complex.lattice import (augmentation_lattice, direct_sum_lattices, lattice_from_images,
                                     permutation_lattice, regular_lattice, trivial_lattice)
from grpcert.group.catalog import abelian, cyclic
from grpcert.group.subgroups import all_subgroups, whole_group


def brute_force_subgroups(group):
    """
    Every subgroup as a frozenset of element indices, by closing every subset of at most two generators.
    Enough for the small groups of the tests: each of them has all subgroups 2-generated.
    """
    found = set()
    elements = range(group.order)
    for x in elements:
        found.add(frozenset(int(e) for e in group.closure([x])))
    for x, y in combinations(elements, 2):
        found.add(frozenset(int(e) for e in group.closure([x, y])))
    return found


def brute_force_classes(group):
    """
    Conjugacy classes as frozensets, straight from g x g^-1.
    """
    classes = set()
    for x in range(group.order):
        classes.add(frozenset(int(group.mul[group.mul[g, x], group.inv[g]]) for g in range(group.order)))
    return classes


def regular_values(group):
    """
    Values of the regular character on the elements.
    """
    values = np.zeros(group.order, dtype=np.int64)
    values[0] = group.order
    return values


def cyclic_shift_lattice(group, generator, others=(), name=None):
    """
    Z[<g>] with g shifting the basis and the other generators acting trivially.
    """
    m = int(group.element_order[generator])
    shift = np.zeros((m, m), dtype=np.int64)
    shift[(np.arange(m) + 1) % m, np.arange(m)] = 1
    images = [shift] + [np.eye(m, dtype=np.int64) for _ in others]
    return lattice_from_images(group, [generator] + list(others), images, name=name)


def is_close(first, second):
    """
    Exact comparison of two integer sequences, element by element.
    """
    first, second = list(first), list(second)
    return len(first) == len(second) and all(int(a) == int(b) for a, b in zip(first, second))


TATE_CASE = namedtuple("TATE_CASE", ["label", "subgroup", "lattice", "h_minus1", "h_zero"])


def _sum_case(label, subgroup, summands, h_minus1, h_zero):
    lattices = [lattice for lattice, count in summands for _ in range(count)]
    return TATE_CASE(label, subgroup, direct_sum_lattices(lattices, name=label), (0, h_minus1), (0, h_zero))


def tate_oracle():
    """
    Direct sums of trivial, permutation, free and augmentation lattices with their Tate groups in degrees -1 and 0.
    Over a p-group P: H^0(Z) = Z/|P|, H^-1(I_P) = P/[P,P], Z[P/K] is Z/|K| in degree 0 by Shapiro, Z[P] is zero.
    :return: List of TATE_CASE, the groups as (free rank, invariant factors).
    """
    cases = []

    group = cyclic(3)
    whole = whole_group(group)
    Z, free, ideal = trivial_lattice(group), regular_lattice(group), augmentation_lattice(group)
    for a, b, c in product(range(3), repeat=3):
        if a or b or c:
            cases.append(_sum_case("C3: Z^%d + Z[G]^%d + I^%d" % (a, b, c), whole, [(Z, a), (free, b), (ideal, c)],
                                   [3] * c, [3] * a))

    group = abelian(3, 3)
    whole = whole_group(group)
    H, K = [record for record in all_subgroups(group) if record.order == 3][:2]
    Z, free, ideal = trivial_lattice(group), regular_lattice(group), augmentation_lattice(group)
    over_H, over_K = permutation_lattice(group, H), permutation_lattice(group, K)
    for a, d, b, c in product(range(2), repeat=4):
        if a or d or b or c:
            cases.append(_sum_case("(Z/3)^2: Z^%d + Z[G/H]^%d + Z[G]^%d + I^%d" % (a, d, b, c), whole,
                                   [(Z, a), (over_H, d), (free, b), (ideal, c)], [3, 3] * c, [3] * d + [9] * a))
    for a, d, e, c in product(range(2), repeat=4):
        if a or d or e or c:
            cases.append(_sum_case("(Z/3)^2 over H: Z^%d + Z[G/H]^%d + Z[G/K]^%d + I^%d" % (a, d, e, c), H,
                                   [(Z, a), (over_H, d), (over_K, e), (ideal, c)], [3] * c, [3] * (a + 3 * d)))
    return cases
