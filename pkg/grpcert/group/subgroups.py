import logging

import numpy as np
from sympy import isprime, primefactors

from grpcert import config
from grpcert.errors import TooLarge
from grpcert.group.finite_group import subgroup_group
from grpcert.utils import bitset_to_indices, indices_to_bitset, parallel_map

_logger = logging.getLogger(__name__)


class ClassPartition(object):
    """
    Conjugacy classes of a group. Class ids are ordered by their least element, so the identity class is 0.
    """

    def __init__(self, class_of, representatives, class_sizes):
        self.class_of = class_of
        self.representatives = representatives
        self.class_sizes = class_sizes
        for array in (class_of, representatives, class_sizes):
            array.setflags(write=False)

    def __len__(self):
        return int(self.representatives.size)

    def members(self, class_id):
        return np.flatnonzero(self.class_of == class_id)


class SubgroupRecord(object):
    """
    A subgroup of a group, stored as a bitset over element indices.
    Rank and conjugacy class are filled by all_subgroups, or computed on first access.
    """

    __slots__ = ("group", "member_set", "order", "members", "generator_indices", "is_normal", "is_abelian",
                 "is_elementary_abelian", "_rank", "_conjugacy_class_id", "_as_group")

    def __init__(self, group, members, generator_indices, is_normal, is_abelian, is_elementary_abelian, rank=None,
                 conjugacy_class_id=None):
        members = np.sort(np.asarray(members, dtype=np.int64))
        members.setflags(write=False)

        self.group = group
        self.members = members
        self.member_set = indices_to_bitset(members)
        self.order = int(members.size)
        self.generator_indices = [int(x) for x in generator_indices]
        self.is_normal = is_normal
        self.is_abelian = is_abelian
        self.is_elementary_abelian = is_elementary_abelian
        self._rank = rank
        self._conjugacy_class_id = conjugacy_class_id
        self._as_group = None

    def __repr__(self):
        return "SubgroupRecord(order=%d, class=%s, generators=%s)" % (self.order, self._conjugacy_class_id,
                                                                      self.generator_indices)

    def __contains__(self, element):
        return bool((self.member_set >> int(element)) & 1)

    def __eq__(self, other):
        return isinstance(other, SubgroupRecord) and other.group is self.group and other.member_set == self.member_set

    def __hash__(self):
        return hash(self.member_set)

    @property
    def rank(self):
        if self._rank is None:
            self._rank = elementary_abelian_rank(self.as_group())
        return self._rank

    @property
    def conjugacy_class_id(self):
        if self._conjugacy_class_id is None:
            self._conjugacy_class_id = subgroup_lookup(self.group, self.member_set).conjugacy_class_id
        return self._conjugacy_class_id

    @property
    def sort_key(self):
        return self.order, tuple(self.members.tolist())

    def is_subgroup_of(self, other):
        return (self.member_set & ~other.member_set) == 0

    def intersection_order(self, other):
        return bin(self.member_set & other.member_set).count("1")

    def as_group(self):
        """
        The subgroup as a FiniteGroup of its own; element i of it is members[i] here.
        """
        if self._as_group is None:
            self._as_group = subgroup_group(self.group, self.members,
                                            label="subgroup of order %d of %s" % (self.order, self.group.label))
        return self._as_group


def conjugacy_classes(group):
    """
    Partition the group into conjugacy classes; representatives are least indices.
    :param group: FiniteGroup.
    :return: ClassPartition.
    """
    return group.cached("classes", lambda: _conjugacy_classes(group))


def _conjugacy_classes(group):
    elements = np.arange(group.order)
    conjugations = [group.mul[group.mul[g, elements], group.inv[g]] for g in group.generators]

    # Propagate the least label along every conjugation permutation until stable.
    labels = elements.copy()
    changed = True
    while changed:
        changed = False
        for permutation in conjugations:
            updated = np.minimum(labels, labels[permutation])
            updated = np.minimum(updated, _scatter_min(updated, permutation))
            if not np.array_equal(updated, labels):
                labels = updated
                changed = True

    representatives, class_of, class_sizes = np.unique(labels, return_inverse=True, return_counts=True)
    _logger.debug("%s has %d conjugacy classes." % (group.label, representatives.size))
    return ClassPartition(class_of.astype(np.int64), representatives.astype(np.int64), class_sizes.astype(np.int64))


def _scatter_min(labels, permutation):
    result = labels.copy()
    np.minimum.at(result, permutation, labels)
    return result


def _is_normal(group, members, generators):
    flags = np.zeros(group.order, dtype=bool)
    flags[members] = True
    generators = np.asarray(generators, dtype=np.int64)
    if generators.size == 0:
        return True
    for g in group.generators:
        conjugates = group.mul[group.mul[g, generators], group.inv[g]]
        if not flags[conjugates].all():
            return False
    return True


def _is_abelian(group, members, generators):
    generators = np.asarray(generators, dtype=np.int64)
    if generators.size == 0:
        return True
    return bool(np.array_equal(group.mul[np.ix_(generators, generators)], group.mul[np.ix_(generators, generators)].T))


def _is_elementary_abelian(group, members, is_abelian):
    if not is_abelian or members.size == 1:
        return is_abelian
    orders = np.unique(group.element_order[members[1:]])
    return orders.size == 1 and isprime(int(orders[0]))


def make_record(group, members, generators=None):
    """
    Build a SubgroupRecord for the given members without enumerating all subgroups.
    """
    members = np.sort(np.asarray(members, dtype=np.int64))
    if generators is None:
        generators = _least_generators(group, members)
    is_abelian = _is_abelian(group, members, generators)
    return SubgroupRecord(group, members, generators, is_normal=_is_normal(group, members, generators),
                          is_abelian=is_abelian,
                          is_elementary_abelian=_is_elementary_abelian(group, members, is_abelian))


def _least_generators(group, members):
    generators = []
    span = np.zeros(group.order, dtype=bool)
    span[0] = True
    for x in members:
        if not span[x]:
            generators.append(int(x))
            span[group.closure(generators)] = True
    return generators


def _extend_p_subgroup(group, p, members, generators):
    """
    All subgroups <H, x> with H normal in them and |<H, x> : H| = p.
    :return: List of (members, generators) of the extensions.
    """
    flags = np.zeros(group.order, dtype=bool)
    flags[members] = True

    # Normalizer of H: g with g h g^-1 in H for every generator h.
    normalizer = np.ones(group.order, dtype=bool)
    everything = np.arange(group.order)
    for h in generators:
        normalizer &= flags[group.mul[group.mul[everything, h], group.inv]]

    power = everything.copy()
    for _ in range(p - 1):
        power = group.mul[power, everything]
    candidates = np.flatnonzero(normalizer & ~flags & flags[power])

    extensions = []
    covered = np.zeros(group.order, dtype=bool)
    for x in candidates:
        if covered[x]:
            continue
        cosets = [members]
        x_power = int(x)
        for _ in range(1, p):
            cosets.append(group.mul[members, x_power])
            x_power = int(group.mul[x_power, x])
        extension = np.sort(np.concatenate(cosets))
        covered[extension] = True
        extensions.append((extension, list(generators) + [int(x)]))

    return extensions


def _enumerate_p_group(group, p, threads):
    """
    Cyclic extension method, layer by layer on orders p^k.
    :return: Dict bitset -> (members, generators) and dict bitset -> set of maximal subgroup bitsets.
    """
    trivial = np.array([0], dtype=np.int64)
    found = {1: (trivial, [])}
    maximal_subgroups = {1: set()}
    layer = [1]

    while layer:
        results = parallel_map(lambda key: _extend_p_subgroup(group, p, *found[key]), layer, threads)

        next_layer = []
        for key, extensions in zip(layer, results):
            for members, generators in extensions:
                bits = indices_to_bitset(members)
                if bits not in found:
                    found[bits] = (members, generators)
                    maximal_subgroups[bits] = set()
                    next_layer.append(bits)
                maximal_subgroups[bits].add(key)

        _logger.debug("Subgroup layer of order %d: %d subgroups." % (len(found[next_layer[0]][0]) if next_layer
                                                                     else 0, len(next_layer)))
        layer = sorted(next_layer, key=lambda bits: tuple(found[bits][0].tolist()))

    return found, maximal_subgroups


def _enumerate_general(group):
    """
    Joins of cyclic subgroups until closed.
    """
    found = {}
    cyclic = []
    for x in range(group.order):
        members = group.closure([x])
        bits = indices_to_bitset(members)
        if bits not in found:
            found[bits] = (members, [x] if x else [])
            cyclic.append((bits, x))

    queue = list(found.keys())
    while queue:
        bits = queue.pop()
        members, generators = found[bits]
        for cyclic_bits, x in cyclic:
            if (cyclic_bits & ~bits) == 0:
                continue
            joined = group.closure(list(generators) + [x])
            joined_bits = indices_to_bitset(joined)
            if joined_bits not in found:
                found[joined_bits] = (joined, list(generators) + [x])
                queue.append(joined_bits)

    return found


def all_subgroups(group, order_cap=None, threads=1):
    """
    Every subgroup of the group, grouped by conjugacy class of subgroups.
    Class ids are ordered by (order, least member tuple in the class); within a class records follow member order.
    :param group: FiniteGroup.
    :param order_cap: Refuse groups larger than this. Default config.subgroup_enumeration_order_cap.
    :param threads: Worker threads for the extension step.
    :return: List of SubgroupRecord.
    """
    if order_cap is None:
        order_cap = config.subgroup_enumeration_order_cap
    if group.order > order_cap:
        raise TooLarge("Subgroup enumeration refuses %s of order %d (cap %d)." % (group.label, group.order, order_cap))

    return group.cached("subgroups", lambda: _all_subgroups(group, threads))


def _all_subgroups(group, threads):
    if group.is_p_group and group.order > 1:
        found, maximal_subgroups = _enumerate_p_group(group, group.prime, threads)
    else:
        found = _enumerate_general(group)
        maximal_subgroups = None

    records = {}
    for bits, (members, generators) in found.items():
        is_abelian = _is_abelian(group, members, generators)
        records[bits] = SubgroupRecord(group, members, generators,
                                       is_normal=_is_normal(group, members, generators),
                                       is_abelian=is_abelian,
                                       is_elementary_abelian=_is_elementary_abelian(group, members, is_abelian))

    _assign_ranks(records, maximal_subgroups)
    ordered = _assign_conjugacy_classes(group, records)
    _logger.info("%s has %d subgroups in %d conjugacy classes." % (group.label, len(ordered),
                                                                   ordered[-1].conjugacy_class_id + 1))
    return ordered


def _elementary_rank_of(record):
    if not record.is_elementary_abelian:
        return 0
    order, rank = record.order, 0
    p = int(record.group.element_order[record.members[1]]) if order > 1 else 1
    while order > 1:
        order //= p
        rank += 1
    return rank


def _assign_ranks(records, maximal_subgroups):
    by_order = sorted(records.values(), key=lambda record: record.order)
    if maximal_subgroups is not None:
        for record in by_order:
            below = [records[bits]._rank for bits in maximal_subgroups[record.member_set]]
            record._rank = max([_elementary_rank_of(record)] + below)
        return

    elementary = [record for record in by_order if record.is_elementary_abelian]
    for record in by_order:
        record._rank = max(_elementary_rank_of(e) for e in elementary if e.is_subgroup_of(record))


def _assign_conjugacy_classes(group, records):
    orbit_of = {}
    orbits = []
    for bits, record in records.items():
        if bits in orbit_of:
            continue
        orbit = [bits]
        orbit_of[bits] = len(orbits)
        index = 0
        while index < len(orbit):
            members = records[orbit[index]].members
            for g in group.generators:
                conjugate = indices_to_bitset(group.mul[group.mul[g, members], group.inv[g]])
                if conjugate not in orbit_of:
                    orbit_of[conjugate] = len(orbits)
                    orbit.append(conjugate)
            index += 1
        orbits.append(sorted((records[b] for b in orbit), key=lambda r: r.sort_key))

    orbits.sort(key=lambda orbit: orbit[0].sort_key)
    ordered = []
    for class_id, orbit in enumerate(orbits):
        for record in orbit:
            record._conjugacy_class_id = class_id
            ordered.append(record)
    return ordered


def subgroup_lookup(group, member_set):
    """
    Enumerated record of the subgroup with the given bitset.
    """
    index = group.cached("subgroup_index", lambda: {r.member_set: r for r in all_subgroups(group)})
    return index[member_set]


def subgroup_class_representatives(group):
    """
    One record per conjugacy class of subgroups, in class id order.
    """
    def build():
        representatives = []
        for record in all_subgroups(group):
            if record.conjugacy_class_id == len(representatives):
                representatives.append(record)
        return representatives

    return group.cached("subgroup_representatives", build)


def subgroup_class_members(group, class_id):
    return [record for record in all_subgroups(group) if record.conjugacy_class_id == class_id]


def minimal_overgroups(group, subgroup):
    """
    Subgroups K > H with no subgroup strictly between them.
    """
    if group.is_p_group:
        # Maximal chains of p-groups go up by index p.
        target = subgroup.order * group.prime if group.order > 1 else 0
        return [r for r in all_subgroups(group) if r.order == target and subgroup.is_subgroup_of(r)]

    overgroups = [r for r in all_subgroups(group) if r.order > subgroup.order and subgroup.is_subgroup_of(r)]
    return [k for k in overgroups if not any(o.order < k.order and o.is_subgroup_of(k) for o in overgroups)]


def trivial_subgroup(group):
    return make_record(group, [0], [])


def whole_group(group):
    return make_record(group, np.arange(group.order), list(group.generators))


def center_and_centralizer(group, subset=None):
    """
    Centralizer C_G(S) of a subgroup or element set; the center when S is the whole group or omitted.
    :param group: FiniteGroup.
    :param subset: SubgroupRecord, iterable of element indices, or None for the center.
    :return: SubgroupRecord.
    """
    if subset is None:
        generators = list(group.generators)
    elif isinstance(subset, SubgroupRecord):
        generators = subset.generator_indices
    else:
        generators = [int(x) for x in subset]

    generators = np.asarray(generators, dtype=np.int64)
    if generators.size == 0:
        return whole_group(group)

    commutes = np.all(group.mul[:, generators] == group.mul[generators, :].T, axis=1)
    return make_record(group, np.flatnonzero(commutes))


def center(group):
    return group.cached("center", lambda: center_and_centralizer(group))


def omega_one(group, subgroup, p=None):
    """
    Subgroup generated by the elements of order p of an abelian subgroup (A_p).
    """
    if p is None:
        p = group.prime
    members = subgroup.members
    low = members[(group.element_order[members] == p) | (members == 0)]
    return make_record(group, group.closure(low))


def _elementary_abelian_search(group, p, candidates):
    """
    Layered search over elementary abelian p-subgroups built from commuting elements of order p.
    :return: List of layers, each a dict bitset -> (members, generators).
    """
    trivial = np.array([0], dtype=np.int64)
    layers = [{1: (trivial, [])}]
    while True:
        next_layer = {}
        for members, generators in layers[-1].values():
            flags = np.zeros(group.order, dtype=bool)
            flags[members] = True
            usable = candidates[~flags[candidates]]
            for g in generators:
                usable = usable[group.mul[usable, g] == group.mul[g, usable]]

            covered = np.zeros(group.order, dtype=bool)
            for x in usable:
                if covered[x]:
                    continue
                cosets = [members]
                x_power = int(x)
                for _ in range(1, p):
                    cosets.append(group.mul[members, x_power])
                    x_power = int(group.mul[x_power, x])
                extension = np.sort(np.concatenate(cosets))
                covered[extension] = True
                bits = indices_to_bitset(extension)
                if bits not in next_layer:
                    next_layer[bits] = (extension, list(generators) + [int(x)])
        if not next_layer:
            return layers
        layers.append(next_layer)


def elementary_abelian_subgroups(group, rank, p=None):
    """
    Elementary abelian subgroups of the given rank (for the prime p, or every prime dividing the order).
    :return: List of member arrays, sorted lexicographically.
    """
    primes = [p] if p is not None else [int(q) for q in primefactors(group.order)]
    if rank == 0:
        return [np.array([0], dtype=np.int64)]

    result = []
    for q in primes:
        candidates = np.flatnonzero(group.element_order == q)
        layers = group.cached(("elementary_abelian_layers", q),
                              lambda: _elementary_abelian_search(group, q, candidates))
        if rank < len(layers):
            result.extend(members for members, _ in layers[rank].values())
    return sorted(result, key=lambda members: tuple(members.tolist()))


def elementary_abelian_rank(group):
    """
    Largest r such that (Z/p)^r embeds in the group for some prime p.
    """
    def compute():
        rank = 0
        for q in primefactors(group.order):
            q = int(q)
            candidates = np.flatnonzero(group.element_order == q)
            layers = group.cached(("elementary_abelian_layers", q),
                                  lambda: _elementary_abelian_search(group, q, candidates))
            rank = max(rank, len(layers) - 1)
        return rank

    return group.cached("rank", compute)


def members_of(group, bitset):
    return bitset_to_indices(bitset, group.order)


def positions_in(record, elements):
    """
    Indices inside record.as_group() of elements of the subgroup.
    """
    elements = np.asarray(elements, dtype=np.int64)
    positions = np.searchsorted(record.members, elements)
    clipped = np.minimum(positions, record.order - 1)
    if (positions >= record.order).any() or (record.members[clipped] != elements).any():
        raise ValueError("Elements %s are not all in the subgroup %s." % (elements.tolist(), record.members.tolist()))
    return positions


def inner_subgroup_group(record, members, label=None):
    """
    The subgroup on the given members (ambient indices) as a subgroup group of record.as_group().
    """
    return subgroup_group(record.as_group(), positions_in(record, members), label)
