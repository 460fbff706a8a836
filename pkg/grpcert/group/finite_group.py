import logging
from collections import deque

import numpy as np
from sympy import ilcm

from grpcert import config
from grpcert.errors import NotAGroup, TooLarge
from grpcert.utils import prime_power

_logger = logging.getLogger(__name__)


class FiniteGroup(object):
    """
    A finite group on the element indices 0..order-1, with 0 the identity.
    The multiplication is stored as a Cayley table; everything else is derived from it.
    """

    def __init__(self, table, label=None, generators=None, permutations=None, parent=None, parent_indices=None,
                 validate=True):
        """
        Create the group from a Cayley table whose identity is already index 0.
        :param table: Square integer array, table[a, b] = a*b.
        :param label: Human readable name.
        :param generators: Element indices generating the group. Default: least-index greedy choice.
        :param permutations: Optional faithful permutation images, one row per element.
        :param parent: Group this one is a subgroup of (for subgroup groups).
        :param parent_indices: Index in the parent of each element of this group.
        :param validate: Check the group axioms.
        """
        table = np.ascontiguousarray(table, dtype=np.int32)

        if validate:
            _validate_group_table(table)

        self.mul = table
        self.mul.setflags(write=False)
        self.order = int(table.shape[0])
        self.label = label or "group of order %d" % self.order

        self.inv = np.argmax(table == 0, axis=1).astype(np.int32)
        self.inv.setflags(write=False)

        self.element_order = _element_orders(table)
        self.element_order.setflags(write=False)
        self.exponent = int(ilcm(*[int(x) for x in np.unique(self.element_order)])) if self.order > 1 else 1

        self.permutations = permutations
        self.parent = parent
        self.parent_indices = None if parent_indices is None else np.asarray(parent_indices, dtype=np.int64)

        self._generators = None if generators is None else [int(x) for x in generators]
        self._cache = {}

    def __repr__(self):
        return "FiniteGroup(%s, order=%d)" % (self.label, self.order)

    @property
    def generators(self):
        if self._generators is None:
            self._generators = greedy_generators(self)
        return self._generators

    @property
    def elements(self):
        return np.arange(self.order)

    @property
    def prime_power(self):
        """
        (p, k) if the order is p^k, (None, 0) for the trivial group, None otherwise.
        """
        if "prime_power" not in self._cache:
            self._cache["prime_power"] = prime_power(self.order)
        return self._cache["prime_power"]

    @property
    def is_p_group(self):
        return self.prime_power is not None

    @property
    def prime(self):
        split = self.prime_power
        return None if split is None else split[0]

    @property
    def is_abelian(self):
        if "is_abelian" not in self._cache:
            self._cache["is_abelian"] = bool(np.array_equal(self.mul, self.mul.T))
        return self._cache["is_abelian"]

    @property
    def root(self):
        """
        Outermost group this one is (iteratively) a subgroup of.
        """
        group = self
        while group.parent is not None:
            group = group.parent
        return group

    @property
    def root_indices(self):
        """
        Index in the root group of every element of this group.
        """
        if "root_indices" not in self._cache:
            indices = np.arange(self.order)
            group = self
            while group.parent is not None:
                indices = group.parent_indices[indices]
                group = group.parent
            self._cache["root_indices"] = indices
        return self._cache["root_indices"]

    def multiply(self, *elements):
        result = 0
        for element in elements:
            result = int(self.mul[result, element])
        return result

    def power(self, x, k):
        k = k % int(self.element_order[x])
        result = 0
        base = int(x)
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def conjugate(self, x, g):
        """
        Return g x g^-1.
        """
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def closure(self, indices):
        """
        Subgroup generated by the given elements.
        :return: Sorted numpy array of member indices.
        """
        generators = np.unique(np.asarray(list(indices), dtype=np.int64))
        generators = generators[generators != 0]

        flags = np.zeros(self.order, dtype=bool)
        flags[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            products = self.mul[frontier[:, None], generators[None, :]].ravel()
            products = np.unique(products)
            products = products[~flags[products]]
            flags[products] = True
            frontier = products

        return np.flatnonzero(flags)

    def cached(self, key, factory):
        """
        Memoize a derived structure (classes, subgroups, character table) on the group.
        """
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]


def _validate_group_table(table):
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise NotAGroup("Cayley table must be a non-empty square array, but shape %s was provided."
                        % (table.shape,))

    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("Cayley table entries must lie in 0..%d." % (n - 1))

    elements = np.arange(n)
    if not (np.array_equal(table[0], elements) and np.array_equal(table[:, 0], elements)):
        bad = int(np.flatnonzero((table[0] != elements) | (table[:, 0] != elements))[0])
        raise NotAGroup("Element 0 is not a two-sided identity.", witness=[0, bad, 0])

    right_inverse = np.argmax(table == 0, axis=1)
    has_inverse = table[elements, right_inverse] == 0
    two_sided = table[right_inverse, elements] == 0
    if not np.all(has_inverse & two_sided):
        bad = int(np.flatnonzero(~(has_inverse & two_sided))[0])
        raise NotAGroup("Element %d has no two-sided inverse." % bad, witness=[bad, int(right_inverse[bad]), 0])

    if n <= config.group_validation_exhaustive_order:
        for a in range(n):
            # (a*b)*c against a*(b*c) for every b, c.
            mismatch = table[table[a]] != table[a][table]
            if mismatch.any():
                b, c = np.argwhere(mismatch)[0]
                raise NotAGroup("Multiplication is not associative.", witness=[a, int(b), int(c)])
    else:
        rng = np.random.default_rng(config.group_validation_seed)
        a, b, c = rng.integers(0, n, size=(3, config.group_validation_samples))
        mismatch = table[table[a, b], c] != table[a, table[b, c]]
        if mismatch.any():
            i = int(np.flatnonzero(mismatch)[0])
            raise NotAGroup("Multiplication is not associative.", witness=[int(a[i]), int(b[i]), int(c[i])])
        _logger.debug("Associativity sampled on %d triples for order %d." % (config.group_validation_samples, n))


def _element_orders(table):
    n = table.shape[0]
    elements = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    orders[0] = 1

    current = elements.copy()
    for k in range(2, n + 1):
        current = table[current, elements]
        newly = (current == 0) & (orders == 0)
        orders[newly] = k
        if orders.all():
            break

    return orders


def greedy_generators(group):
    """
    Least-index generating set: walk the elements in index order and keep each one outside the current span.
    """
    generators = []
    span = np.zeros(group.order, dtype=bool)
    span[0] = True
    for x in range(1, group.order):
        if span[x]:
            continue
        generators.append(x)
        span[:] = False
        span[group.closure(generators)] = True
        if span.all():
            break
    return generators


def relabel_identity_first(table):
    """
    Swap labels so the identity of a Cayley table becomes index 0.
    :return: The relabelled table.
    """
    table = np.asarray(table, dtype=np.int64)
    n = table.shape[0]
    elements = np.arange(n)
    candidates = np.flatnonzero(np.all(table == elements[None, :], axis=1) & np.all(table == elements[:, None], axis=0))
    if candidates.size == 0:
        raise NotAGroup("Cayley table has no two-sided identity.")

    identity = int(candidates[0])
    if identity == 0:
        return table

    swap = elements.copy()
    swap[0], swap[identity] = identity, 0
    # New label of old element a is swap[a]; swap is its own inverse.
    return swap[table[np.ix_(swap, swap)]]


def group_from_cayley_table(table, label=None):
    """
    Build a validated group from a Cayley table.
    :param table: n x n array of indices in 0..n-1.
    :param label: Optional name.
    :return: FiniteGroup with its identity at index 0.
    """
    table = np.asarray(table)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise NotAGroup("Cayley table must be a non-empty square array, but shape %s was provided."
                        % (table.shape,))
    if table.min() < 0 or table.max() >= table.shape[0]:
        raise NotAGroup("Cayley table entries must lie in 0..%d." % (table.shape[0] - 1))

    table = relabel_identity_first(table)
    return FiniteGroup(table, label=label or "cayley table of order %d" % table.shape[0])


def group_from_permutations(degree, generators, label=None, order_cap=None):
    """
    Close permutation generators to a group. The product g*h applies g first, then h.
    :param degree: Number of points.
    :param generators: Image lists, 0-based.
    :param label: Optional name.
    :param order_cap: Closure stops with TooLarge past this order.
    :return: FiniteGroup with the permutation action stored in group.permutations.
    """
    if order_cap is None:
        order_cap = config.permutation_closure_order_cap

    points = np.arange(degree)
    perms = []
    for generator in generators:
        perm = np.asarray(generator, dtype=np.int64)
        if perm.shape != (degree,) or not np.array_equal(np.sort(perm), points):
            raise NotAGroup("Generator %s is not a permutation of 0..%d." % (list(generator), degree - 1))
        perms.append(perm)

    # Drop identities and repeats, they only slow the closure down.
    unique_perms = []
    seen = {points.tobytes()}
    for perm in perms:
        if perm.tobytes() not in seen:
            seen.add(perm.tobytes())
            unique_perms.append(perm)

    elements = [points]
    index = {points.tobytes(): 0}
    right_mul = [[0] for _ in unique_perms]
    parents = [None]

    queue = deque([0])
    while queue:
        current = queue.popleft()
        for g, perm in enumerate(unique_perms):
            product = perm[elements[current]]
            key = product.tobytes()
            if key not in index:
                if len(elements) >= order_cap:
                    raise TooLarge("Permutation closure exceeds the order cap %d." % order_cap)
                index[key] = len(elements)
                elements.append(product)
                parents.append((current, g))
                queue.append(index[key])
                for column in right_mul:
                    column.append(-1)
            right_mul[g][current] = index[key]

    n = len(elements)
    _logger.debug("Permutation closure of %d generators on %d points has order %d." % (len(perms), degree, n))

    right_mul = np.asarray(right_mul, dtype=np.int64)
    table = np.zeros((n, n), dtype=np.int64)
    table[:, 0] = np.arange(n)
    # Element b = parent * gen, so a*b = (a*parent)*gen.
    for b in range(1, n):
        parent, g = parents[b]
        table[:, b] = right_mul[g][table[:, parent]]

    generator_indices = [index[perm.tobytes()] for perm in unique_perms]
    return FiniteGroup(table, label=label or "permutation group of order %d" % n, generators=generator_indices,
                       permutations=np.asarray(elements), validate=n <= config.group_validation_exhaustive_order)


def subgroup_group(group, members, label=None):
    """
    The subgroup on the given members as a group in its own right, remembering the embedding.
    :param group: Parent group.
    :param members: Member indices of a subgroup of group.
    :param label: Optional name.
    :return: FiniteGroup whose element i is members[i] in the parent.
    """
    members = np.sort(np.asarray(members, dtype=np.int64))
    position = np.full(group.order, -1, dtype=np.int64)
    position[members] = np.arange(members.size)

    table = position[group.mul[np.ix_(members, members)]]
    if (table < 0).any():
        raise NotAGroup("Members %s are not closed under multiplication in %s." % (members.tolist(), group.label))

    return FiniteGroup(table, label=label or "subgroup of order %d of %s" % (members.size, group.label),
                       parent=group, parent_indices=members, validate=False)
