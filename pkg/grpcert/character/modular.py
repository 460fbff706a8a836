"""
Dense linear algebra over the prime field F_l on numpy int64 arrays. Entries stay below l, so products fit in int64
for every prime Dixon's method picks.
"""
import numpy as np


def inverse_mod(value, prime):
    return pow(int(value) % prime, prime - 2, prime)


def rref_mod(matrix, prime):
    """
    Reduced row echelon form.
    :return: (nonzero rows of the echelon form, pivot columns).
    """
    reduced = np.array(matrix, dtype=np.int64) % prime
    n_rows, n_columns = reduced.shape
    pivots = []
    row = 0
    for column in range(n_columns):
        if row == n_rows:
            break
        nonzero = np.flatnonzero(reduced[row:, column])
        if nonzero.size == 0:
            continue
        swap = row + int(nonzero[0])
        if swap != row:
            reduced[[row, swap]] = reduced[[swap, row]]
        reduced[row] = reduced[row] * inverse_mod(reduced[row, column], prime) % prime

        factors = reduced[:, column].copy()
        factors[row] = 0
        reduced = (reduced - np.outer(factors, reduced[row])) % prime

        pivots.append(column)
        row += 1

    return reduced[:row], pivots


def nullspace_mod(matrix, prime):
    """
    Basis of the right kernel, one column per free variable.
    """
    matrix = np.asarray(matrix, dtype=np.int64)
    n_columns = matrix.shape[1]
    reduced, pivots = rref_mod(matrix, prime)
    free = [c for c in range(n_columns) if c not in set(pivots)]

    basis = np.zeros((n_columns, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, p in enumerate(pivots):
            basis[p, j] = (-reduced[i, f]) % prime
    return basis


def column_echelon_mod(basis, prime):
    """
    Rewrite a column basis so that it is the identity on its pivot rows.
    :return: (basis, pivot rows).
    """
    reduced, pivots = rref_mod(np.asarray(basis).T, prime)
    return np.ascontiguousarray(reduced.T), pivots


def hessenberg_mod(matrix, prime):
    """
    Upper Hessenberg form by similarity transforms.
    """
    h = np.array(matrix, dtype=np.int64) % prime
    n = h.shape[0]
    for m in range(1, n - 1):
        nonzero = np.flatnonzero(h[m:, m - 1])
        if nonzero.size == 0:
            continue
        pivot = m + int(nonzero[0])
        if pivot != m:
            h[[m, pivot]] = h[[pivot, m]]
            h[:, [m, pivot]] = h[:, [pivot, m]]

        multipliers = h[m + 1:, m - 1] * inverse_mod(h[m, m - 1], prime) % prime
        if not multipliers.any():
            continue
        # Row i -= u_i row m, then column m += sum u_i column i.
        h[m + 1:] = (h[m + 1:] - np.outer(multipliers, h[m])) % prime
        h[:, m] = (h[:, m] + h[:, m + 1:] @ multipliers) % prime
    return h


def charpoly_mod(matrix, prime):
    """
    Characteristic polynomial, lowest degree coefficient first.
    """
    h = hessenberg_mod(matrix, prime)
    n = h.shape[0]
    polys = np.zeros((n + 1, n + 1), dtype=np.int64)
    polys[0, 0] = 1
    for m in range(n):
        poly = np.zeros(n + 1, dtype=np.int64)
        poly[1:] = polys[m, :-1]
        poly = (poly - h[m, m] * polys[m]) % prime
        product = 1
        for i in range(m - 1, -1, -1):
            product = product * int(h[i + 1, i]) % prime
            if not product:
                break
            coefficient = int(h[i, m]) * product % prime
            if coefficient:
                poly = (poly - coefficient * polys[i]) % prime
        polys[m + 1] = poly
    return polys[n]


def roots_mod(poly, prime):
    """
    All roots in F_l of a polynomial given lowest degree first, by evaluation at every point.
    """
    points = np.arange(prime, dtype=np.int64)
    values = np.zeros(prime, dtype=np.int64)
    for coefficient in reversed(list(poly)):
        values = (values * points + int(coefficient)) % prime
    return np.flatnonzero(values == 0)
