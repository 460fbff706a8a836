import logging
from collections import namedtuple
from functools import reduce
from itertools import product
from math import gcd

import numpy as np

from grpcert import config
from grpcert.complex.chain import GChainComplex, homology, sphere_homology_witness, tensor_complexes
from grpcert.complex.integer_matrix import (as_integer_matrix, identity, kernel, left_kernel, quotient_invariants,
                                            row_echelon, solve)
from grpcert.complex.lattice import lattice_from_images, trivial_lattice
from grpcert.errors import NotEquivariant, NotSurjective, UnexpectedHomology, UnsupportedGroup

_logger = logging.getLogger(__name__)

# H^n(G, Z) from the resolution: Hom_G(syzygy, Z) basis (rows), coboundary coordinates (columns) and invariants.
COHOMOLOGY = namedtuple("COHOMOLOGY", ["degree", "functionals", "coboundaries", "free_rank", "torsion"])

# An equivariant map from the syzygy to Z: values on the syzygy basis, coordinates in the Hom_G basis, the
# canonical key of its class up to sign, and whether it is a coboundary.
COCYCLE = namedtuple("COCYCLE", ["values", "coefficients", "class_key", "is_coboundary"])


def cyclic_decomposition(group):
    """
    Elements g_1..g_k with G = <g_1> x ... x <g_k>, largest orders first.
    :raise UnsupportedGroup: for nonabelian groups, or when the greedy search finds no decomposition.
    """
    if not group.is_abelian:
        raise UnsupportedGroup("%s is not abelian; supply a resolution explicitly." % group.label)

    generators = list(group.generators)
    if int(np.prod([group.element_order[g] for g in generators])) == group.order:
        return sorted(generators, key=lambda g: (-int(group.element_order[g]), g))

    # A cyclic subgroup of largest order meeting the span trivially is a direct factor of an abelian p-group.
    chosen, span = [], np.array([0], dtype=np.int64)
    while span.size < group.order:
        flags = np.zeros(group.order, dtype=bool)
        flags[span] = True
        candidate = next((int(x) for x in np.argsort(-group.element_order, kind="stable")
                          if not flags[x] and flags[group.closure([int(x)])].sum() == 1), None)
        if candidate is None:
            raise UnsupportedGroup("No cyclic decomposition of %s was found." % group.label)
        chosen.append(candidate)
        span = group.closure(chosen)
    return chosen


def _shift(m):
    matrix = np.zeros((m, m), dtype=np.int64)
    matrix[(np.arange(m) + 1) % m, np.arange(m)] = 1
    return matrix


def periodic_resolution(group, generator, others, length):
    """
    Z[C] <-(g-1)- Z[C] <-N- Z[C] <-(g-1)- ... for C = <g>, as a complex over G with the other factors acting
    trivially.
    """
    m = int(group.element_order[generator])
    images = [_shift(m)] + [np.eye(m, dtype=np.int64) for _ in others]
    module = lattice_from_images(group, [generator] + list(others), images, name="Z[<%d>]" % generator)

    boundaries = [_shift(m) - np.eye(m, dtype=np.int64) if k % 2 else np.ones((m, m), dtype=np.int64)
                  for k in range(1, length + 1)]
    return GChainComplex(group, 0, [module] * (length + 1), boundaries, name="P(<%d>)" % generator)


class Resolution(object):
    """
    A free resolution P_n -> ... -> P_0 of Z with its augmentation P_0 -> Z.
    """

    def __init__(self, complex_, augmentation):
        self.group = complex_.group
        self.complex = complex_
        self.augmentation = np.asarray(augmentation, dtype=np.int64).reshape(1, complex_.module(0).rank)
        self.length = complex_.high

    def __repr__(self):
        return "Resolution(%s, ranks=%s)" % (self.group.label, self.complex.ranks())

    def augmented(self):
        """
        The complex with Z in degree -1 and the augmentation as d_0.
        """
        base = self.complex
        return GChainComplex(self.group, -1, [trivial_lattice(self.group)] + base.modules,
                             [self.augmentation] + base.boundaries, name="augmented " + str(base.name),
                             validate=False)

    def exactness_defects(self):
        """
        Degrees below the top where the augmented complex has nonzero homology.
        """
        augmented = self.augmented()
        return [{"degree": h.degree, "rank": h.rank, "torsion": h.torsion}
                for h in homology(augmented) if h.degree < self.length and (h.rank or h.torsion)]

    def boundary(self, degree):
        """
        Boundary of the augmented complex: d_0 is the augmentation.
        """
        return self.augmentation if degree == 0 else self.complex.boundary(degree)

    def to_json(self):
        return {"group": self.group.label, "ranks": self.complex.ranks()}


def free_resolution(group, length, supplied=None):
    """
    Free resolution of Z over Z[G] of the given length.
    For a product of cyclic groups it is the tensor product of the 2-periodic resolutions of the factors.
    :param group: FiniteGroup.
    :param length: Top degree n.
    :param supplied: Optional (GChainComplex, augmentation) for other groups; validated the same way.
    :return: Resolution.
    :raise UnsupportedGroup: when no resolution is built in and none is supplied, or when it is not exact.
    """
    if supplied is not None:
        resolution = Resolution(*supplied)
    elif group.order == 1:
        if length > 0:
            raise UnsupportedGroup("The trivial group only has the length 0 resolution Z.")
        resolution = Resolution(GChainComplex(group, 0, [trivial_lattice(group)], [], name="P"), [[1]])
    else:
        factors = cyclic_decomposition(group)
        complexes = [periodic_resolution(group, g, [h for h in factors if h != g], length) for g in factors]
        total = reduce(lambda a, b: tensor_complexes(a, b).truncate(length), complexes)
        total.name = "P"
        resolution = Resolution(total, np.ones(total.module(0).rank, dtype=np.int64))

    defects = resolution.exactness_defects()
    if defects:
        raise UnsupportedGroup("Resolution of %s is not exact." % group.label, witness={"defects": defects})

    _logger.info("Free resolution of %s with ranks %s." % (group.label, resolution.complex.ranks()))
    return resolution


def syzygy(resolution, n):
    """
    The n-th syzygy: Z for n = 0, ker(d_(n-1): P_(n-1) -> P_(n-2)) otherwise, d_0 the augmentation.
    The returned sublattice keeps its basis inside P_(n-1).
    """
    if n < 0 or n > resolution.length:
        raise ValueError("Syzygy degree must be in 0..%d, but %d was provided." % (resolution.length, n))
    if n == 0:
        return trivial_lattice(resolution.group)

    ambient = resolution.complex.module(n - 1)
    return ambient.sublattice(kernel(resolution.boundary(n - 1)), name="Omega^%d" % n)


def invariant_functionals(lattice):
    """
    Z-basis (rows) of Hom_G(M, Z) with trivial action on Z: rows y with y A_g = y for every generator.
    """
    eye = np.eye(lattice.rank, dtype=np.int64)
    blocks = [a - eye for a in lattice.action]
    if not blocks:
        return identity(lattice.rank)
    return left_kernel(np.hstack(blocks))


def cohomology_classes(group, resolution, n):
    """
    H^n(G, Z) = Hom_G(syzygy_n, Z) modulo restrictions of Hom_G(P_(n-1), Z).
    :return: COHOMOLOGY.
    """
    omega = syzygy(resolution, n)
    functionals = invariant_functionals(omega)
    f = functionals.shape[0]

    if n == 0:
        coboundaries = np.zeros((f, 0), dtype=object)
    else:
        restricted = invariant_functionals(resolution.complex.module(n - 1)).dot(omega.basis)
        coboundaries = solve(functionals.T, restricted.T) if restricted.shape[0] \
            else np.zeros((f, 0), dtype=object)

    free, torsion = quotient_invariants(identity(f), coboundaries)
    return COHOMOLOGY(n, functionals, coboundaries, free, torsion)


def _class_representative(vector, echelon, pivots):
    vector = list(vector)
    for row, column in enumerate(pivots):
        q = vector[column] // echelon[row, column]
        if q:
            vector = [v - q * e for v, e in zip(vector, echelon[row])]
    return tuple(int(v) for v in vector)


def surjective_cocycles(group, resolution, n, bound=None):
    """
    Surjective equivariant maps syzygy_n -> Z with coefficients in [-B, B] on the Hom_G basis, one per cohomology
    class up to sign (a map and its negative have the same kernel).
    :return: List of COCYCLE, in enumeration order.
    """
    if bound is None:
        bound = config.cocycle_height_bound

    cohomology = cohomology_classes(group, resolution, n)
    functionals = cohomology.functionals
    echelon, _, pivots = row_echelon(cohomology.coboundaries.T)

    found, seen = [], set()
    for coefficients in product(range(-bound, bound + 1), repeat=functionals.shape[0]):
        if not any(coefficients):
            continue
        values = as_integer_matrix([coefficients]).dot(functionals)[0]
        if reduce(gcd, [abs(int(v)) for v in values], 0) != 1:
            continue
        key = min(_class_representative(coefficients, echelon, pivots),
                  _class_representative([-c for c in coefficients], echelon, pivots))
        if key in seen:
            continue
        seen.add(key)
        found.append(COCYCLE(tuple(int(v) for v in values), tuple(coefficients), key, not any(key)))

    _logger.info("%d surjective cocycle classes in degree %d for %s (H^%d: rank %d, torsion %s)."
                 % (len(found), n, group.label, n, cohomology.free_rank, cohomology.torsion))
    return found


def build_C_zeta(resolution, n, cocycle):
    """
    C_zeta = (P_(n-1) / ker(zeta) -> P_(n-2) -> ... -> P_0), the resolution truncated at the kernel of a
    surjective equivariant zeta: syzygy_n -> Z. Its homology is Z in degrees 0 and n - 1.
    :param resolution: Resolution of length >= n - 1.
    :param n: Degree, at least 1.
    :param cocycle: COCYCLE or the values of zeta on the syzygy basis.
    :return: GChainComplex in degrees 0 .. n - 1.
    :raise NotSurjective: when the values have a common divisor.
    :raise NotEquivariant: when zeta is not G-invariant.
    :raise UnexpectedHomology: when the homology is not that of S^(n-1).
    """
    if n < 1:
        raise ValueError("C_zeta needs n >= 1, but %d was provided." % n)
    values = cocycle.values if isinstance(cocycle, COCYCLE) else cocycle
    zeta = as_integer_matrix([list(values)])

    omega = syzygy(resolution, n)
    if zeta.shape[1] != omega.rank:
        raise ValueError("zeta needs %d values, but %d were provided." % (omega.rank, zeta.shape[1]))
    if reduce(gcd, [abs(int(v)) for v in zeta[0]], 0) != 1:
        raise NotSurjective("zeta = %s is not surjective onto Z." % list(values), witness={"values": list(values)})
    for generator, a in zip(resolution.group.generators, omega.action):
        if not np.array_equal(zeta.dot(as_integer_matrix(a)), zeta):
            raise NotEquivariant("zeta is not invariant under generator %d." % generator,
                                 witness={"generator": int(generator), "values": list(values)})

    kernel_in_omega = kernel(zeta)
    top, projection, section = resolution.complex.module(n - 1).quotient(omega.basis.dot(kernel_in_omega),
                                                                         name="P_%d/L" % (n - 1))
    modules = resolution.complex.modules[:n - 1] + [top]
    boundaries = list(resolution.complex.boundaries[:n - 2]) if n > 2 else []
    if n >= 2:
        boundaries.append(as_integer_matrix(resolution.complex.boundary(n - 1)).dot(section).astype(np.int64))

    C_zeta = GChainComplex(resolution.group, 0, modules, boundaries, name="C_zeta%s" % (tuple(values),))
    witness = sphere_homology_witness(homology(C_zeta), n - 1)
    if witness is not None:
        raise UnexpectedHomology("%s does not have the homology of S^%d: ranks %s, torsion %s."
                                 % (C_zeta.name, n - 1, witness["ranks"], witness["torsion"]),
                                 witness=dict(witness, values=list(values)))
    return C_zeta