import logging
from collections import namedtuple
from math import gcd, isqrt

import numpy as np
from sympy import QQ, isprime, primitive_root, sqrt_mod

from grpcert import config
from grpcert.character.class_function import ClassFunction, inner_product
from grpcert.character.cyclotomic import Cyclotomic, power_basis
from grpcert.character.modular import charpoly_mod, column_echelon_mod, inverse_mod, nullspace_mod, roots_mod
from grpcert.errors import LiftFailure
from grpcert.group.subgroups import conjugacy_classes

_logger = logging.getLogger(__name__)

DECOMPOSITION = namedtuple("DECOMPOSITION", ["multiplicities", "is_character", "witness"])


class CharacterTable(object):
    """
    Irreducible characters of a group. Rows: trivial first, then by degree and lexicographic values.
    Values are kept twice: as Cyclotomic class functions, and as eigenvalue multiplicities
    multiplicities[i, t, a] = multiplicity of zeta_e^a as an eigenvalue of g_t in the i-th representation.
    """

    def __init__(self, group, multiplicities, prime, orthogonality_verified=True):
        self.group = group
        self.classes = conjugacy_classes(group)
        self.conductor = max(group.exponent, 1)
        self.multiplicities = multiplicities
        self.multiplicities.setflags(write=False)
        self.prime = prime
        self.orthogonality_verified = orthogonality_verified

        self.degrees = [int(d) for d in multiplicities[:, 0, :].sum(axis=1)]
        self.irreducibles = [ClassFunction(group, [Cyclotomic.from_integer_powers(self.conductor, row)
                                                   for row in multiplicities[i]], name="irr%d" % i)
                             for i in range(multiplicities.shape[0])]

    def __len__(self):
        return len(self.irreducibles)

    def __getitem__(self, index):
        return self.irreducibles[index]

    def __iter__(self):
        return iter(self.irreducibles)

    @property
    def trivial(self):
        return self.irreducibles[0]

    def linear_characters(self):
        return [chi for chi, degree in zip(self.irreducibles, self.degrees) if degree == 1]

    def compose(self, multiplicities):
        """
        The class function sum(m_i chi_i).
        """
        total = ClassFunction(self.group, [0] * len(self.classes))
        for m, chi in zip(multiplicities, self.irreducibles):
            if m:
                total = total + chi * m
        return total

    def to_json(self):
        return {"degrees": self.degrees,
                "class_sizes": self.classes.class_sizes.tolist(),
                "representatives": self.classes.representatives.tolist(),
                "characters": [[v.to_json() for v in chi.values] for chi in self.irreducibles],
                "orthogonality_verified": self.orthogonality_verified}


def character_table(group):
    """
    Irreducible character table by Dixon's method: common eigenvectors of the class matrices modulo a prime
    l = 1 mod exponent, lifted to exact cyclotomic values and checked by both orthogonality relations.
    :param group: FiniteGroup.
    :return: CharacterTable.
    """
    return group.cached("character_table", lambda: _character_table(group))


def _first_prime(exponent, bound):
    candidate = (bound // exponent + 1) * exponent + 1
    while not isprime(candidate):
        candidate += exponent
    return candidate


def _character_table(group):
    classes = conjugacy_classes(group)
    if group.order == 1:
        return CharacterTable(group, np.ones((1, 1, 1), dtype=np.int64), prime=None)

    exponent = group.exponent
    bound = 2 * isqrt(group.order) * int(classes.class_sizes.max())
    prime = _first_prime(exponent, bound)

    for attempt in range(config.dixon_max_prime_attempts):
        try:
            multiplicities, verified = _dixon(group, classes, prime)
            _logger.debug("Character table of %s computed modulo %d." % (group.label, prime))
            return CharacterTable(group, multiplicities, prime, verified)
        except LiftFailure as error:
            _logger.info("Dixon's method modulo %d failed for %s: %s" % (prime, group.label, error))
            prime = _first_prime(exponent, prime)

    raise LiftFailure("Character table of %s could not be lifted after %d primes."
                      % (group.label, config.dixon_max_prime_attempts))


def _class_matrix(group, classes, r):
    """
    M[s, t] = #{x in C_r : x^-1 z_t in C_s}, the structure constants of the class sum of C_r.
    """
    k = len(classes)
    inverses = group.inv[classes.members(r)]
    products = group.mul[inverses[:, None], classes.representatives[None, :]]
    flat = classes.class_of[products] * k + np.arange(k)[None, :]
    return np.bincount(flat.ravel(), minlength=k * k).reshape(k, k)


def _split_spaces(group, classes, prime):
    k = len(classes)
    spaces = [column_echelon_mod(np.eye(k, dtype=np.int64), prime)]

    for r in range(1, k):
        if all(basis.shape[1] == 1 for basis, _ in spaces):
            break
        matrix = _class_matrix(group, classes, r) % prime

        refined = []
        for basis, pivots in spaces:
            dimension = basis.shape[1]
            if dimension == 1:
                refined.append((basis, pivots))
                continue
            # The class matrix restricted to the invariant subspace, read on its pivot rows.
            restricted = (matrix @ basis % prime)[pivots, :]
            eigenvalues = roots_mod(charpoly_mod(restricted, prime), prime)
            found = 0
            for eigenvalue in eigenvalues:
                shifted = (restricted - eigenvalue * np.eye(dimension, dtype=np.int64)) % prime
                kernel = nullspace_mod(shifted, prime)
                found += kernel.shape[1]
                refined.append(column_echelon_mod(basis @ kernel % prime, prime))
            if found != dimension:
                raise LiftFailure("class matrix %d does not split over F_%d" % (r, prime))
        spaces = refined

    if any(basis.shape[1] != 1 for basis, _ in spaces):
        raise LiftFailure("class matrices leave a space of dimension > 1")
    return [basis[:, 0] for basis, _ in spaces]


def _power_map(group, classes):
    """
    power_map[t, j] = class of g_t^j for j in 0..exponent-1.
    """
    representatives = classes.representatives
    power_map = np.zeros((len(classes), group.exponent), dtype=np.int64)
    current = np.zeros_like(representatives)
    for j in range(group.exponent):
        power_map[:, j] = classes.class_of[current]
        current = group.mul[current, representatives]
    return power_map


def _dixon(group, classes, prime):
    exponent = group.exponent
    sizes = classes.class_sizes
    inverse_class = classes.class_of[group.inv[classes.representatives]]

    vectors = _split_spaces(group, classes, prime)

    size_inverses = np.array([inverse_mod(s, prime) for s in sizes], dtype=np.int64)
    modular_values = []
    degrees = []
    for vector in vectors:
        if vector[0] % prime == 0:
            raise LiftFailure("eigenvector vanishes on the identity class")
        omega = vector * inverse_mod(vector[0], prime) % prime
        row = omega * size_inverses % prime
        dot = int(np.sum(sizes % prime * row % prime * row[inverse_class] % prime) % prime)
        if dot == 0:
            raise LiftFailure("degenerate normalization")
        square = group.order % prime * inverse_mod(dot, prime) % prime
        root = sqrt_mod(square, prime)
        if root is None:
            raise LiftFailure("degree square %d is not a square modulo %d" % (square, prime))
        degree = min(int(root), prime - int(root))
        if group.order % degree:
            raise LiftFailure("lifted degree %d does not divide the order" % degree)
        degrees.append(degree)
        modular_values.append(row * degree % prime)

    modular_values = np.array(modular_values, dtype=np.int64)

    # Eigenvalue multiplicities m_a = 1/e sum_j chi(g^j) z^(-a j), z a primitive e-th root of unity mod l.
    z = pow(int(primitive_root(prime)), (prime - 1) // exponent, prime)
    z_inverse = inverse_mod(z, prime)
    exponents = np.outer(np.arange(exponent), np.arange(exponent)) % exponent
    z_powers = np.array([pow(z_inverse, int(i), prime) for i in range(exponent)], dtype=np.int64)
    vandermonde = z_powers[exponents]

    power_values = modular_values[:, _power_map(group, classes)]
    multiplicities = np.zeros_like(power_values)
    for a in range(exponent):
        multiplicities[:, :, a] = np.sum(power_values * vandermonde[:, a][None, None, :] % prime, axis=2) % prime
    multiplicities = multiplicities * inverse_mod(exponent, prime) % prime

    degrees = np.array(degrees, dtype=np.int64)
    if (multiplicities > degrees[:, None, None]).any() or \
            (multiplicities.sum(axis=2) != degrees[:, None]).any():
        raise LiftFailure("eigenvalue multiplicities out of range")

    multiplicities = _sort_rows(multiplicities, exponent)
    verified = _verify_orthogonality(group, classes, multiplicities, inverse_class)
    return multiplicities, verified


def _sort_rows(multiplicities, exponent):
    reduced = multiplicities @ power_basis(exponent)
    degrees = multiplicities[:, 0, :].sum(axis=1)

    def key(i):
        trivial = degrees[i] == 1 and (reduced[i, :, 0] == 1).all() and not reduced[i, :, 1:].any()
        return 0 if trivial else 1, int(degrees[i]), tuple(reduced[i].ravel().tolist())

    order = sorted(range(multiplicities.shape[0]), key=key)
    return np.ascontiguousarray(multiplicities[order])


def _cyclic_products(first, second, exponent):
    """
    result[i, j, c] = sum over t and a + b = c (mod e) of first[i, t, a] second[j, t, b].
    Entries stay far below 2^53, so float64 products are exact.
    """
    result = np.zeros((first.shape[0], second.shape[0], exponent), dtype=np.float64)
    first, second = first.astype(np.float64), second.astype(np.float64)
    for a in range(exponent):
        for b in range(exponent):
            result[:, :, (a + b) % exponent] += first[:, :, a] @ second[:, :, b].T
    return np.rint(result).astype(np.int64)


def _verify_orthogonality(group, classes, multiplicities, inverse_class):
    """
    Check both orthogonality relations exactly.
    :return: False when the table has more classes than config.character_table_verify_class_limit and the check
    was skipped.
    """
    exponent = multiplicities.shape[2]
    k = multiplicities.shape[0]
    if k != len(classes):
        raise LiftFailure("%d characters for %d classes" % (k, len(classes)))
    if k > config.character_table_verify_class_limit:
        _logger.warning("Skipping exact orthogonality check of %s with %d classes." % (group.label, k))
        return False

    basis = power_basis(exponent)
    sizes = classes.class_sizes

    weighted = multiplicities * sizes[None, :, None]
    rows = _cyclic_products(weighted, multiplicities[:, inverse_class, :], exponent) @ basis
    expected = np.zeros_like(rows)
    expected[:, :, 0] = group.order * np.eye(k, dtype=np.int64)
    if not np.array_equal(rows, expected):
        raise LiftFailure("row orthogonality fails")

    by_class = np.ascontiguousarray(multiplicities.transpose(1, 0, 2))
    columns = _cyclic_products(by_class, by_class[inverse_class], exponent) @ basis
    expected = np.zeros_like(columns)
    expected[:, :, 0] = np.diag(group.order // sizes)
    if not np.array_equal(columns, expected):
        raise LiftFailure("column orthogonality fails")
    return True


def decompose(character):
    """
    Multiplicities m_i = <chi, chi_i> over the irreducibles of the character's group.
    :return: DECOMPOSITION(multiplicities as Cyclotomic, is_character, witness of the first bad multiplicity).
    """
    table = character_table(character.group)
    rational = character.rational_values()

    if rational is not None:
        multiplicities = _rational_multiplicities(table, rational)
    else:
        multiplicities = [inner_product(character, chi) for chi in table.irreducibles]

    witness = None
    for i, m in enumerate(multiplicities):
        if not m.is_integer() or int(m) < 0:
            witness = {"irreducible": i, "degree": table.degrees[i], "multiplicity": str(m)}
            break

    return DECOMPOSITION(multiplicities, witness is None, witness)


def _rational_multiplicities(table, rational):
    """
    Exact multiplicities of a rational valued class function through the eigenvalue multiplicities.
    """
    classes = table.classes
    inverse_class = classes.class_of[table.group.inv[classes.representatives]]
    denominator = 1
    for value in rational:
        denominator = denominator * int(value.denominator) // gcd(denominator, int(value.denominator))

    weights = np.array([int(value.numerator) * (denominator // int(value.denominator)) * int(size)
                        for value, size in zip(rational, classes.class_sizes)], dtype=object)

    # chi(g) conj(chi_i(g)) summed with chi rational: conj(chi_i(g_t)) = chi_i(g_t^-1).
    conjugated = table.multiplicities[:, inverse_class, :].astype(object)
    sums = np.tensordot(weights, conjugated, axes=(0, 1)) @ power_basis(table.conductor).astype(object)

    scale = QQ(1, table.group.order * denominator)
    multiplicities = []
    for row in sums:
        values = [QQ(int(v)) * scale for v in row]
        multiplicities.append(Cyclotomic(table.conductor, values))
    return multiplicities


def is_character(character):
    return decompose(character).is_character
