import logging
from collections import deque

import numpy as np

from grpcert.complex.integer_matrix import as_integer_matrix, kernel, left_kernel, solve
from grpcert.errors import NotAGroup, NotEquivariant

_logger = logging.getLogger(__name__)


def _as_action_matrix(matrix, rank):
    matrix = np.asarray(matrix, dtype=np.int64).reshape(rank, rank)
    matrix.setflags(write=False)
    return matrix


def element_matrices(group, generators, images, rank):
    """
    Extend generator images to every element along the Cayley graph, checking each edge g -> s g.
    A consistent extension is a homomorphism, so this also checks every relation of the group.
    :return: Array (order, rank, rank), entry x the matrix of element x.
    :raise NotAGroup: when the images do not define an action.
    """
    matrices = np.zeros((group.order, rank, rank), dtype=np.int64)
    known = np.zeros(group.order, dtype=bool)
    matrices[0] = np.eye(rank, dtype=np.int64)
    known[0] = True

    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s, image in zip(generators, images):
            y = int(group.mul[s, x])
            product = image @ matrices[x]
            if not known[y]:
                matrices[y] = product
                known[y] = True
                queue.append(y)
            elif not np.array_equal(matrices[y], product):
                raise NotAGroup("Generator images do not respect the relations of %s (element %d)."
                                % (group.label, y), witness={"element": y, "generator": int(s)})

    if not known.all():
        raise NotAGroup("Elements %s do not generate %s." % (list(generators), group.label))
    return matrices


class GLattice(object):
    """
    A Z-free module of finite rank with a left action of a finite group, given by one integer matrix per group
    generator (acting on column vectors).
    """

    def __init__(self, group, action, rank=None, labels=None, name=None):
        """
        :param group: FiniteGroup.
        :param action: One rank x rank integer matrix per element of group.generators.
        :param rank: Rank; needed only when the group has no generators.
        :param labels: Optional basis labels.
        :param name: Optional name used in reports.
        """
        action = list(action)
        if len(action) != len(group.generators):
            raise ValueError("%s has %d generators, but %d action matrices were provided."
                             % (group.label, len(group.generators), len(action)))
        if rank is None:
            rank = int(np.shape(action[0])[0]) if action else len(labels or [])

        self.group = group
        self.rank = rank
        self.action = [_as_action_matrix(a, rank) for a in action]
        self.labels = labels
        self.name = name
        # Set on sublattices: columns spanning the sublattice inside the ambient lattice.
        self.basis = None
        self.ambient = None
        self._elements = None

    def __repr__(self):
        return "GLattice(%s, rank=%d)" % (self.name or self.group.label, self.rank)

    @property
    def elements(self):
        """
        Matrices of every group element; validated on first access.
        """
        if self._elements is None:
            self._elements = element_matrices(self.group, self.group.generators, self.action, self.rank)
            self._elements.setflags(write=False)
        return self._elements

    def validate(self):
        """
        :raise NotAGroup: when the generator matrices do not satisfy the relations of the group.
        """
        return self.elements is not None

    def matrix(self, element):
        return self.elements[int(element)]

    def norm(self, members):
        """
        Matrix of the norm element, the sum of the given group elements.
        """
        return self.elements[np.asarray(members, dtype=np.int64)].sum(axis=0)

    def is_trivial(self):
        eye = np.eye(self.rank, dtype=np.int64)
        return all(np.array_equal(a, eye) for a in self.action)

    def invariants(self, members=None):
        """
        Z-basis (columns) of the fixed sublattice of the subgroup generated by members (default: the group).
        """
        generators = self.group.generators if members is None else members
        eye = np.eye(self.rank, dtype=np.int64)
        stacked = np.vstack([self.matrix(g) - eye for g in generators] or [np.zeros((0, self.rank), np.int64)])
        return kernel(stacked)

    def sublattice(self, basis, name=None):
        """
        An invariant sublattice spanned by the columns of basis, with the action rewritten in that basis.
        :raise NotEquivariant: when the span is not invariant.
        """
        basis = as_integer_matrix(basis, (self.rank, 0))
        action = []
        for a in self.action:
            try:
                action.append(solve(basis, as_integer_matrix(a).dot(basis)).astype(np.int64))
            except ValueError:
                raise NotEquivariant("Sublattice of rank %d is not invariant under %s."
                                     % (basis.shape[1], self.group.label))
        sub = GLattice(self.group, action, rank=basis.shape[1], name=name)
        sub.basis = basis
        sub.ambient = self
        return sub

    def quotient(self, sublattice_basis, name=None):
        """
        Quotient by a pure invariant sublattice, through an integer map Q with kernel the sublattice.
        :return: (GLattice of the quotient, Q, a right inverse S of Q).
        """
        sublattice_basis = as_integer_matrix(sublattice_basis, (self.rank, 0))
        projection = left_kernel(sublattice_basis)
        section = solve(projection, as_integer_matrix(np.eye(projection.shape[0], dtype=np.int64)))
        action = [projection.dot(as_integer_matrix(a)).dot(section).astype(np.int64) for a in self.action]
        return GLattice(self.group, action, rank=projection.shape[0], name=name), projection, section

    def to_json(self):
        return {"name": self.name, "rank": self.rank, "trivial": self.is_trivial()}


def lattice_from_images(group, generators, images, name=None, labels=None):
    """
    Lattice from images of an arbitrary generating set, re-expressed on group.generators.
    """
    rank = int(np.shape(images[0])[0]) if images else len(labels or [])
    matrices = element_matrices(group, generators, [np.asarray(a, dtype=np.int64) for a in images], rank)
    lattice = GLattice(group, [matrices[g] for g in group.generators], rank=rank, labels=labels, name=name)
    lattice._elements = matrices
    return lattice


def _permutation_matrix(images):
    n = len(images)
    matrix = np.zeros((n, n), dtype=np.int64)
    matrix[images, np.arange(n)] = 1
    return matrix


def trivial_lattice(group, rank=1):
    return GLattice(group, [np.eye(rank, dtype=np.int64) for _ in group.generators], rank=rank,
                    name="Z" if rank == 1 else "Z^%d" % rank)


def permutation_lattice(group, subgroup):
    """
    Z[G/H] on the left cosets xH, basis ordered by least coset member.
    """
    members = np.asarray(subgroup.members if hasattr(subgroup, "members") else subgroup, dtype=np.int64)
    coset_of = np.full(group.order, -1, dtype=np.int64)
    representatives = []
    for x in range(group.order):
        if coset_of[x] < 0:
            coset_of[group.mul[x, members]] = len(representatives)
            representatives.append(x)

    action = [_permutation_matrix(coset_of[group.mul[s, representatives]]) for s in group.generators]
    return GLattice(group, action, rank=len(representatives), labels=["g%dH" % x for x in representatives],
                    name="Z[G/H]" if members.size > 1 else "Z[G]")


def regular_lattice(group):
    return permutation_lattice(group, np.array([0], dtype=np.int64))


def augmentation_lattice(group):
    """
    The augmentation ideal of Z[G], basis g - 1 for g != 1.
    """
    regular = regular_lattice(group)
    basis = np.zeros((group.order, max(group.order - 1, 0)), dtype=np.int64)
    for j in range(1, group.order):
        basis[j, j - 1] = 1
        basis[0, j - 1] = -1
    return regular.sublattice(basis, name="I_G")


def tensor_lattices(first, second, name=None):
    """
    Tensor product over Z with the diagonal action; basis e_i x f_j in row major order.
    """
    if first.group is not second.group:
        raise ValueError("Lattices live on different groups: %s and %s." % (first.group.label, second.group.label))
    action = [np.kron(a, b) for a, b in zip(first.action, second.action)]
    return GLattice(first.group, action, rank=first.rank * second.rank,
                    name=name or "(%s x %s)" % (first.name, second.name))


def direct_sum_lattices(lattices, group=None, name=None):
    """
    Block diagonal direct sum, in the given order.
    """
    lattices = list(lattices)
    group = group if group is not None else lattices[0].group
    total = sum(lattice.rank for lattice in lattices)
    action = []
    for k in range(len(group.generators)):
        matrix = np.zeros((total, total), dtype=np.int64)
        offset = 0
        for lattice in lattices:
            matrix[offset:offset + lattice.rank, offset:offset + lattice.rank] = lattice.action[k]
            offset += lattice.rank
        action.append(matrix)
    return GLattice(group, action, rank=total, name=name or " + ".join(str(lattice.name) for lattice in lattices))
