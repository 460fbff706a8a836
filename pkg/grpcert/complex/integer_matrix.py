from collections import namedtuple

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as _domain_invariant_factors

# Column echelon form M W = H with W unimodular; pivots[j] is the pivot row of column j of H.
COLUMN_ECHELON = namedtuple("COLUMN_ECHELON", ["echelon", "transform", "pivots"])


def as_integer_matrix(matrix, shape=None):
    """
    Exact integer copy of a matrix (object dtype holding Python ints).
    :param shape: Shape of an empty matrix, used when matrix has no entries.
    """
    array = np.asarray(matrix)
    if array.size == 0:
        return np.zeros(shape if shape is not None else array.shape, dtype=object)
    return np.vectorize(int, otypes=[object])(array)


def identity(n):
    return as_integer_matrix(np.eye(n, dtype=np.int64), (n, n))


def row_echelon(matrix):
    """
    Hermite normal form by unimodular row operations: U A = E, pivots positive, entries above a pivot reduced into
    [0, pivot). Pivot order is left to right, ties broken by least row index, so the result is reproducible.
    :return: (E, U, pivot columns).
    """
    echelon = as_integer_matrix(matrix, np.shape(matrix))
    rows, cols = echelon.shape
    transform = identity(rows)
    pivots = []
    pivot_row = 0

    for col in range(cols):
        if pivot_row == rows:
            break
        while True:
            candidates = [r for r in range(pivot_row, rows) if echelon[r, col] != 0]
            if not candidates:
                break
            best = min(candidates, key=lambda r: (abs(echelon[r, col]), r))
            if best != pivot_row:
                echelon[[pivot_row, best]] = echelon[[best, pivot_row]]
                transform[[pivot_row, best]] = transform[[best, pivot_row]]
            reduced = True
            for r in range(pivot_row + 1, rows):
                if echelon[r, col] == 0:
                    continue
                q = echelon[r, col] // echelon[pivot_row, col]
                echelon[r] = echelon[r] - q * echelon[pivot_row]
                transform[r] = transform[r] - q * transform[pivot_row]
                if echelon[r, col] != 0:
                    reduced = False
            if reduced:
                break

        if echelon[pivot_row, col] == 0:
            continue
        if echelon[pivot_row, col] < 0:
            echelon[pivot_row] = -echelon[pivot_row]
            transform[pivot_row] = -transform[pivot_row]
        for r in range(pivot_row):
            q = echelon[r, col] // echelon[pivot_row, col]
            if q:
                echelon[r] = echelon[r] - q * echelon[pivot_row]
                transform[r] = transform[r] - q * transform[pivot_row]
        pivots.append(col)
        pivot_row += 1

    return echelon, transform, pivots


def column_echelon(matrix):
    """
    M W = H with W unimodular and H in column echelon form: the first len(pivots) columns are independent,
    the remaining ones are zero.
    """
    matrix = as_integer_matrix(matrix, np.shape(matrix))
    echelon, transform, pivots = row_echelon(matrix.T)
    return COLUMN_ECHELON(echelon.T, transform.T, pivots)


def rank(matrix):
    return len(column_echelon(matrix).pivots)


def kernel(matrix):
    """
    Z-basis of {x : M x = 0}, as the columns of the returned matrix.
    """
    matrix = as_integer_matrix(matrix, np.shape(matrix))
    form = column_echelon(matrix)
    return form.transform[:, len(form.pivots):]


def left_kernel(matrix):
    """
    Z-basis of {y : y M = 0}, as the rows of the returned matrix.
    """
    matrix = as_integer_matrix(matrix, np.shape(matrix))
    return kernel(matrix.T).T


def solve(matrix, rhs):
    """
    Integer X with M X = V.
    :raise ValueError: when some column of V is not in the lattice spanned by the columns of M.
    """
    matrix = as_integer_matrix(matrix, np.shape(matrix))
    rhs = as_integer_matrix(rhs, np.shape(rhs))
    form = column_echelon(matrix)
    k = len(form.pivots)

    coefficients = np.zeros((matrix.shape[1], rhs.shape[1]), dtype=object)
    for j, row in enumerate(form.pivots):
        pivot = form.echelon[row, j]
        for c in range(rhs.shape[1]):
            partial = sum((form.echelon[row, i] * coefficients[i, c] for i in range(j)), 0)
            remainder = rhs[row, c] - partial
            if remainder % pivot:
                raise ValueError("Column %d is not an integer combination of the basis." % c)
            coefficients[j, c] = remainder // pivot

    if k and not np.array_equal(form.echelon[:, :k].dot(coefficients[:k]), rhs):
        raise ValueError("Right hand side is not in the column lattice.")
    if not k and any(v != 0 for v in rhs.ravel()):
        raise ValueError("Right hand side is not in the column lattice.")
    return form.transform.dot(coefficients)


def invariant_factors(matrix):
    """
    Smith normal form invariants of an integer matrix: (rank, torsion coefficients > 1).
    """
    matrix = as_integer_matrix(matrix, np.shape(matrix))
    if 0 in matrix.shape:
        return 0, []
    domain_matrix = DomainMatrix([[ZZ(int(v)) for v in row] for row in matrix], matrix.shape, ZZ)
    factors = [abs(int(f)) for f in _domain_invariant_factors(domain_matrix)]
    return sum(1 for f in factors if f), [f for f in factors if f > 1]


def quotient_invariants(basis, generators):
    """
    Invariants of the finitely generated abelian group span(basis) / span(generators), generators in span(basis).
    :param basis: Matrix whose columns are a Z-basis of the ambient lattice.
    :param generators: Matrix whose columns lie in that lattice.
    :return: (free rank, torsion coefficients).
    """
    basis = as_integer_matrix(basis, np.shape(basis))
    dimension = basis.shape[1]
    if dimension == 0:
        return 0, []
    generators = as_integer_matrix(generators, (basis.shape[0], 0))
    if generators.shape[1] == 0:
        return dimension, []
    coordinates = solve(basis, generators)
    image_rank, torsion = invariant_factors(coordinates)
    return dimension - image_rank, torsion
