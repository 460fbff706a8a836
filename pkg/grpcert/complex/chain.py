import logging
from collections import namedtuple
from math import comb

import numpy as np

from grpcert.complex.integer_matrix import identity, kernel, quotient_invariants
from grpcert.complex.lattice import direct_sum_lattices, tensor_lattices
from grpcert.errors import NotEquivariant

_logger = logging.getLogger(__name__)

HOMOLOGY_GROUP = namedtuple("HOMOLOGY_GROUP", ["degree", "rank", "torsion"])


def describe_homology(group):
    """
    Z^r + Z/t1 + ... as text; "0" for the trivial group.
    """
    parts = []
    if group.rank:
        parts.append("Z" if group.rank == 1 else "Z^%d" % group.rank)
    parts.extend("Z/%d" % t for t in group.torsion)
    return " + ".join(parts) or "0"


class GChainComplex(object):
    """
    A bounded chain complex of G-lattices C_low .. C_high with equivariant boundaries d_k: C_k -> C_(k-1),
    matrices of shape (rank C_(k-1), rank C_k).
    """

    def __init__(self, group, low, modules, boundaries, name=None, validate=True):
        """
        :param group: FiniteGroup acting on every module.
        :param low: Lowest degree.
        :param modules: GLattice per degree, from low up.
        :param boundaries: len(modules) - 1 matrices, boundaries[i] = d_(low + i + 1).
        :param name: Optional name.
        :param validate: Check d o d = 0 and equivariance.
        """
        modules, boundaries = list(modules), list(boundaries)
        if len(boundaries) != len(modules) - 1:
            raise ValueError("%d modules need %d boundaries, but %d were provided."
                             % (len(modules), len(modules) - 1, len(boundaries)))
        boundaries = [np.asarray(d, dtype=np.int64).reshape(modules[i].rank, modules[i + 1].rank)
                      for i, d in enumerate(boundaries)]

        self.group = group
        self.low = int(low)
        self.modules = modules
        self.boundaries = boundaries
        self.name = name

        if validate:
            self.validate()

    def __repr__(self):
        return "GChainComplex(%s, ranks=%s from degree %d)" % (self.name, self.ranks(), self.low)

    @property
    def high(self):
        return self.low + len(self.modules) - 1

    @property
    def degrees(self):
        return range(self.low, self.high + 1)

    def module(self, degree):
        return self.modules[degree - self.low]

    def boundary(self, degree):
        """
        d_degree: C_degree -> C_(degree - 1); a zero matrix outside the complex.
        """
        if self.low < degree <= self.high:
            return self.boundaries[degree - self.low - 1]
        rows = self.module(degree - 1).rank if self.low <= degree - 1 <= self.high else 0
        columns = self.module(degree).rank if self.low <= degree <= self.high else 0
        return np.zeros((rows, columns), dtype=np.int64)

    def ranks(self):
        return [module.rank for module in self.modules]

    def validate(self):
        """
        :raise ValueError: when some d_(k-1) d_k is not zero.
        :raise NotEquivariant: when some boundary does not commute with a generator.
        """
        for k in range(self.low + 2, self.high + 1):
            if (self.boundary(k - 1) @ self.boundary(k)).any():
                raise ValueError("d_%d d_%d is not zero in %s." % (k - 1, k, self.name))

        for k in range(self.low + 1, self.high + 1):
            d = self.boundary(k)
            source, target = self.module(k), self.module(k - 1)
            for generator, a, b in zip(self.group.generators, source.action, target.action):
                if not np.array_equal(d @ a, b @ d):
                    raise NotEquivariant("d_%d of %s does not commute with generator %d."
                                         % (k, self.name, generator), witness={"degree": k, "generator": generator})
        return True

    def truncate(self, high):
        """
        The complex in degrees low .. high.
        """
        count = high - self.low + 1
        return GChainComplex(self.group, self.low, self.modules[:count], self.boundaries[:count - 1],
                             name=self.name, validate=False)

    def to_json(self):
        return {"name": self.name, "low": self.low, "ranks": self.ranks()}


def homology(complex_):
    """
    H_k = ker d_k / im d_(k+1) per degree, by Smith normal form.
    :return: List of HOMOLOGY_GROUP, one per degree.
    """
    groups = []
    for k in complex_.degrees:
        rank = complex_.module(k).rank
        cycles = kernel(complex_.boundary(k)) if k > complex_.low else identity(rank)
        free, torsion = quotient_invariants(cycles, complex_.boundary(k + 1) if k < complex_.high
                                            else np.zeros((rank, 0), dtype=np.int64))
        groups.append(HOMOLOGY_GROUP(k, free, torsion))
    _logger.debug("Homology of %s: %s" % (complex_.name, [describe_homology(g) for g in groups]))
    return groups


def sphere_product_ranks(dimension, count):
    """
    Betti numbers of a product of count spheres of the given dimension, degrees 0 .. count * dimension.
    """
    if dimension == 0:
        return [2 ** count]
    ranks = [0] * (count * dimension + 1)
    for k in range(count + 1):
        ranks[k * dimension] = comb(count, k)
    return ranks


def sphere_homology_witness(groups, dimension, count=1):
    """
    None when the homology groups are torsion free with the Betti numbers of a product of spheres, else the
    observed and expected ranks.
    """
    expected = sphere_product_ranks(dimension, count)
    ranks = [g.rank for g in groups]
    torsion = [g.torsion for g in groups if g.torsion]
    if ranks == expected and not torsion:
        return None
    return {"ranks": ranks, "expected": expected, "torsion": torsion}


def euler_characteristic(complex_):
    return sum((-1) ** k * complex_.module(k).rank for k in complex_.degrees)


def homology_euler_characteristic(groups):
    return sum((-1) ** group.degree * group.rank for group in groups)


def _blocks(first, second, degree):
    return [(i, degree - i) for i in first.degrees if second.low <= degree - i <= second.high]


def tensor_complexes(first, second, name=None):
    """
    Total complex of A x B with the diagonal action and the Koszul sign d(a x b) = da x b + (-1)^|a| a x db.
    Degree k is the direct sum of A_i x B_(k-i), blocks ordered by increasing i.
    """
    if first.group is not second.group:
        raise ValueError("Complexes live on different groups: %s and %s." % (first.group.label, second.group.label))

    group = first.group
    low, high = first.low + second.low, first.high + second.high
    modules, offsets = [], []
    for k in range(low, high + 1):
        blocks = _blocks(first, second, k)
        lattices = [tensor_lattices(first.module(i), second.module(j)) for i, j in blocks]
        modules.append(direct_sum_lattices(lattices, group, name="C%d" % k))
        positions, offset = {}, 0
        for (i, j), lattice in zip(blocks, lattices):
            positions[(i, j)] = offset
            offset += lattice.rank
        offsets.append(positions)

    boundaries = []
    for k in range(low + 1, high + 1):
        source, target = offsets[k - low], offsets[k - 1 - low]
        d = np.zeros((modules[k - 1 - low].rank, modules[k - low].rank), dtype=np.int64)
        for (i, j), column in source.items():
            a, b = first.module(i).rank, second.module(j).rank
            if (i - 1, j) in target:
                row = target[(i - 1, j)]
                block = np.kron(first.boundary(i), np.eye(b, dtype=np.int64))
                d[row:row + block.shape[0], column:column + a * b] += block
            if (i, j - 1) in target:
                row = target[(i, j - 1)]
                block = (-1) ** i * np.kron(np.eye(a, dtype=np.int64), second.boundary(j))
                d[row:row + block.shape[0], column:column + a * b] += block
        boundaries.append(d)

    return GChainComplex(group, low, modules, boundaries,
                         name=name or "(%s x %s)" % (first.name, second.name))
