import logging

import numpy as np
from sympy import isprime

from grpcert import config
from grpcert.errors import BadSpec
from grpcert.group.finite_group import FiniteGroup

_logger = logging.getLogger(__name__)

# p = 2 families that the catalog deliberately does not construct.
REFUSED_FAMILIES = ("dihedral", "quaternion", "semidihedral")

# Named entries printed by "catalog list": (group spec, description).
CATALOG_ENTRIES = [
    ("cyclic:3", "cyclic group of order 3"),
    ("cyclic:9", "cyclic group of order 9"),
    ("abelian:3,3", "elementary abelian group of rank 2"),
    ("abelian:3,3,3", "elementary abelian group of rank 3"),
    ("abelian:9,3", "abelian group of type (3, 9)"),
    ("extraspecial:3:3:3", "Heisenberg group mod 3, order 27, exponent 3"),
    ("extraspecial:5:3:5", "Heisenberg group mod 5, order 125, exponent 5"),
    ("extraspecial:3:5:3", "extraspecial group of order 243, exponent 3, rank 3, cyclic center"),
    ("extraspecial:5:5:5", "extraspecial group of order 3125, exponent 5, rank 3, cyclic center"),
    ("modular:3:3", "modular group M(27)"),
    ("modular:3:4", "modular group M(81)"),
    ("product:extraspecial:3:3:3*cyclic:3", "order 81, rank 3, center of rank 2"),
    ("centralproduct:extraspecial:3:3:3*modular:3:3", "order 243, cyclic center"),
]


def _validate_prime(p, family):
    if not isinstance(p, int) or not isprime(p):
        raise BadSpec("%s needs a prime p, but %s was provided." % (family, p))
    if p == 2:
        raise BadSpec("%s with p = 2 is not constructed; p = 2 families (dihedral, quaternion, semidihedral) "
                      "are outside the catalog." % family)


def _table_from_coordinates(radices, product):
    """
    Cayley table of a group whose elements are coordinate vectors in a mixed radix box.
    :param radices: Size of each coordinate; the zero vector is the identity.
    :param product: Function (rows x 1 x k, 1 x n x k) -> product coordinates, reduced.
    :return: n x n int32 table, element index = coordinates read in mixed radix (last digit fastest).
    """
    radices = np.asarray(radices, dtype=np.int64)
    n = int(np.prod(radices)) if radices.size else 1
    strides = np.ones(radices.size, dtype=np.int64)
    for i in range(radices.size - 2, -1, -1):
        strides[i] = strides[i + 1] * radices[i + 1]

    coordinates = (np.arange(n)[:, None] // strides[None, :]) % radices[None, :]

    table = np.empty((n, n), dtype=np.int32)
    chunk = config.catalog_row_chunk
    for start in range(0, n, chunk):
        left = coordinates[start:start + chunk, None, :]
        right = coordinates[None, :, :]
        table[start:start + chunk] = product(left, right) @ strides

    return table, strides


def abelian(*orders):
    """
    Direct product of cyclic groups of the given orders.
    """
    orders = [int(d) for d in orders]
    if not orders or any(d < 1 for d in orders):
        raise BadSpec("abelian needs positive factor orders, but %s was provided." % (orders,))

    radices = np.asarray(orders, dtype=np.int64)
    table, strides = _table_from_coordinates(radices, lambda a, b: (a + b) % radices)
    generators = [int(s) for s, d in zip(strides, orders) if d > 1]

    label = "Z/%d" % orders[0] if len(orders) == 1 else "abelian(%s)" % ",".join(str(d) for d in orders)
    return FiniteGroup(table, label=label, generators=generators, validate=False)


def cyclic(n):
    return abelian(n)


def extraspecial(p, order_exponent, exponent=None):
    """
    Extraspecial group of order p^(2m+1) and exponent p, as the group of triples (a, b, c) in F_p^m x F_p^m x F_p
    with (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a.b'). This is the iterated central product of m
    Heisenberg groups.
    """
    _validate_prime(p, "extraspecial")
    if exponent is None:
        exponent = p
    if order_exponent < 3 or order_exponent % 2 == 0:
        raise BadSpec("extraspecial needs an odd order exponent 2m+1 >= 3, but %s was provided." % order_exponent)
    if exponent != p:
        raise BadSpec("Only the exponent p extraspecial groups are constructed, but exponent %s was provided."
                      % exponent)

    m = (order_exponent - 1) // 2
    radices = np.full(2 * m + 1, p, dtype=np.int64)

    def product(left, right):
        result = (left + right) % p
        twist = np.sum(left[..., :m] * right[..., m:2 * m], axis=-1)
        result[..., 2 * m] = (result[..., 2 * m] + twist) % p
        return result

    table, strides = _table_from_coordinates(radices, product)
    generators = [int(s) for s in strides[:2 * m]]

    return FiniteGroup(table, label="extraspecial(%d,%d,exp %d)" % (p, order_exponent, exponent),
                       generators=generators, validate=False)


def modular(p, n):
    """
    M(p^n) = <x, y | x^(p^(n-1)) = y^p = 1, y^-1 x y = x^(1+p^(n-2))>, elements x^i y^j.
    x^i y^j x^k y^l = x^(i + k(1 - j p^(n-2))) y^(j + l).
    """
    _validate_prime(p, "modular")
    if n < 3:
        raise BadSpec("modular M(p^n) needs n >= 3, but n = %s was provided." % n)

    big = p ** (n - 1)
    small = p ** (n - 2)
    radices = np.array([big, p], dtype=np.int64)

    def product(left, right):
        i, j = left[..., 0], left[..., 1]
        k, l = right[..., 0], right[..., 1]
        x_power = (i + k * (1 - j * small)) % big
        y_power = (j + l) % p
        return np.stack(np.broadcast_arrays(x_power, y_power), axis=-1)

    table, strides = _table_from_coordinates(radices, product)
    return FiniteGroup(table, label="M(%d,%d)" % (p, n), generators=[int(strides[0]), int(strides[1])],
                       validate=False)


def direct_product(a, b):
    na, nb = a.order, b.order
    table = a.mul.astype(np.int64)[:, None, :, None] * nb + b.mul.astype(np.int64)[None, :, None, :]
    table = table.reshape(na * nb, na * nb)

    generators = [g * nb for g in a.generators] + list(b.generators)
    return FiniteGroup(table, label="%s x %s" % (a.label, b.label), generators=generators, validate=False)


def _least_central_element_of_order(group, p):
    commutes = np.all(group.mul == group.mul.T, axis=1)
    candidates = np.flatnonzero(commutes & (group.element_order == p))
    if candidates.size == 0:
        raise BadSpec("%s has no central element of order %d to identify." % (group.label, p))
    return int(candidates[0])


def central_product(a, b):
    """
    Quotient of a x b identifying the least-index central elements of order p of both factors.
    """
    p = a.prime
    if p is None or p != b.prime:
        raise BadSpec("central product needs two p-groups for the same prime, got %s and %s." % (a.label, b.label))

    z_a = _least_central_element_of_order(a, p)
    z_b = _least_central_element_of_order(b, p)
    z_b_inverse = int(b.inv[z_b])

    nb = b.order
    first = np.repeat(np.arange(a.order), nb)
    second = np.tile(np.arange(nb), a.order)

    # Coset representative of (x, y) modulo <(z_a, z_b^-1)> is the least index in its coset.
    representative = first * nb + second
    shifted_first, shifted_second = first, second
    for _ in range(1, p):
        shifted_first = a.mul[shifted_first, z_a]
        shifted_second = b.mul[shifted_second, z_b_inverse]
        representative = np.minimum(representative, shifted_first.astype(np.int64) * nb + shifted_second)

    reps = np.unique(representative)
    coset_of = np.searchsorted(reps, representative)

    rep_first, rep_second = reps // nb, reps % nb
    m = reps.size
    table = np.empty((m, m), dtype=np.int32)
    chunk = config.catalog_row_chunk
    for start in range(0, m, chunk):
        block_first = a.mul[rep_first[start:start + chunk, None], rep_first[None, :]].astype(np.int64)
        block_second = b.mul[rep_second[start:start + chunk, None], rep_second[None, :]]
        table[start:start + chunk] = coset_of[block_first * nb + block_second]

    generators = sorted(set(int(coset_of[g * nb]) for g in a.generators) |
                        set(int(coset_of[h]) for h in b.generators))
    _logger.debug("Central product of %s and %s has order %d." % (a.label, b.label, m))

    return FiniteGroup(table, label="%s o %s" % (a.label, b.label), generators=generators, validate=False)


def build_catalog_group(head, args):
    """
    Build a catalog group from a parsed (head, args) pair. Nested operands are already built groups.
    """
    if head in REFUSED_FAMILIES:
        raise BadSpec("%s groups are p = 2 families and are not constructed." % head)

    if head == "abelian":
        return abelian(*args)
    elif head == "cyclic":
        return cyclic(*args)
    elif head == "extraspecial":
        return extraspecial(*args)
    elif head == "modular":
        return modular(*args)
    elif head == "product":
        return direct_product(*args)
    elif head == "centralproduct":
        return central_product(*args)

    raise BadSpec("Unknown catalog family '%s'." % head)


def catalog_group(spec):
    """
    Build a group from a catalog expression.
    :param spec: Group spec string (e.g. "extraspecial:3:5:3") or a parsed GroupSpec.
    :return: FiniteGroup.
    """
    from grpcert.interface.group_spec import build_group, parse_group_spec

    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    return build_group(spec)
