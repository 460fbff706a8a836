from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import QQ, cyclotomic_poly, ilcm, totient


@lru_cache(maxsize=None)
def power_basis(conductor):
    """
    Reduction table of the N-th cyclotomic field: row k holds the integer coordinates of zeta^k
    on the basis 1, zeta, ..., zeta^(phi(N)-1).
    :return: numpy int64 array of shape (N, phi(N)).
    """
    phi = int(totient(conductor))
    # Monic minimal polynomial, lowest degree first; zeta^phi = -sum(a_i zeta^i).
    minimal = [int(c) for c in reversed(cyclotomic_poly(conductor, polys=True).all_coeffs())]

    table = np.zeros((max(conductor, phi), phi), dtype=np.int64)
    for k in range(min(phi, conductor)):
        table[k, k] = 1
    for k in range(phi, conductor):
        previous = table[k - 1]
        top = previous[-1]
        table[k, 1:] = previous[:-1]
        table[k, 0] = 0
        table[k] -= top * np.asarray(minimal[:phi], dtype=np.int64)
    table = table[:conductor]
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def galois_units(conductor):
    return tuple(k for k in range(1, conductor + 1) if gcd(k, conductor) == 1)


def _to_rational(value):
    if QQ.of_type(value):
        return value
    if isinstance(value, np.integer):
        return QQ(int(value))
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(value)


class Cyclotomic(object):
    """
    Exact element of the N-th cyclotomic field, stored as rational coordinates on the power basis
    1, zeta_N, ..., zeta_N^(phi(N)-1) reduced modulo the N-th cyclotomic polynomial.
    Values of different conductors are embedded in the field of their lcm when combined.
    """

    __slots__ = ("conductor", "coefficients")

    def __init__(self, conductor, coefficients):
        phi = int(totient(conductor))
        coefficients = [_to_rational(c) for c in coefficients]
        if len(coefficients) > phi:
            raise ValueError("Conductor %d takes at most %d coefficients, but %d were provided."
                             % (conductor, phi, len(coefficients)))
        coefficients.extend([QQ(0)] * (phi - len(coefficients)))

        self.conductor = int(conductor)
        self.coefficients = tuple(coefficients)

    @classmethod
    def rational(cls, value):
        return cls(1, [value])

    @classmethod
    def root_of_unity(cls, conductor, power=1):
        return cls.from_powers(conductor, {power: 1})

    @classmethod
    def from_powers(cls, conductor, powers):
        """
        Element sum(c * zeta_N^k) from a mapping k -> c (or a sequence indexed by k).
        """
        if not isinstance(powers, dict):
            powers = dict(enumerate(powers))

        table = power_basis(conductor)
        coefficients = [QQ(0)] * table.shape[1]
        for k, c in powers.items():
            if c == 0:
                continue
            c = _to_rational(c)
            for i, coordinate in enumerate(table[k % conductor]):
                if coordinate:
                    coefficients[i] += c * int(coordinate)
        return cls(conductor, coefficients)

    @classmethod
    def from_integer_powers(cls, conductor, powers):
        """
        Fast constructor for integer power vectors (numpy), e.g. eigenvalue multiplicities.
        """
        reduced = np.asarray(powers, dtype=np.int64) @ power_basis(conductor)
        return cls(conductor, [int(c) for c in reduced])

    @staticmethod
    def coerce(value):
        if isinstance(value, Cyclotomic):
            return value
        return Cyclotomic.rational(value)

    def is_rational(self):
        return all(c == 0 for c in self.coefficients[1:])

    def is_integer(self):
        return self.is_rational() and self.coefficients[0].denominator == 1

    def is_zero(self):
        return all(c == 0 for c in self.coefficients)

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("%s is not rational." % self)
        return self.coefficients[0]

    def __int__(self):
        if not self.is_integer():
            raise ValueError("%s is not a rational integer." % self)
        return int(self.coefficients[0].numerator)

    def embed(self, conductor):
        """
        The same value in the field of a multiple of the conductor.
        """
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError("Cannot embed conductor %d into conductor %d." % (self.conductor, conductor))
        if self.is_rational():
            return Cyclotomic(conductor, [self.coefficients[0]])
        step = conductor // self.conductor
        return Cyclotomic.from_powers(conductor, {i * step: c for i, c in enumerate(self.coefficients) if c != 0})

    def _align(self, other):
        other = Cyclotomic.coerce(other)
        conductor = int(ilcm(self.conductor, other.conductor))
        return self.embed(conductor), other.embed(conductor)

    def __add__(self, other):
        other = Cyclotomic.coerce(other)
        if other.is_rational():
            return Cyclotomic(self.conductor, (self.coefficients[0] + other.coefficients[0],) + self.coefficients[1:])
        if self.is_rational():
            return other + self
        left, right = self._align(other)
        return Cyclotomic(left.conductor, [a + b for a, b in zip(left.coefficients, right.coefficients)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-c for c in self.coefficients])

    def __sub__(self, other):
        return self + (-Cyclotomic.coerce(other))

    def __rsub__(self, other):
        return Cyclotomic.coerce(other) + (-self)

    def scale(self, factor):
        factor = _to_rational(factor)
        return Cyclotomic(self.conductor, [factor * c for c in self.coefficients])

    def __mul__(self, other):
        other = Cyclotomic.coerce(other)
        if other.is_rational():
            return self.scale(other.coefficients[0])
        if self.is_rational():
            return other.scale(self.coefficients[0])

        left, right = self._align(other)
        powers = {}
        for i, a in enumerate(left.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(right.coefficients):
                if b != 0:
                    powers[i + j] = powers.get(i + j, QQ(0)) + a * b
        return Cyclotomic.from_powers(left.conductor, powers)

    __rmul__ = __mul__

    def galois(self, k):
        """
        Image under the automorphism zeta -> zeta^k, k coprime to the conductor.
        """
        if self.is_rational():
            return self
        return Cyclotomic.from_powers(self.conductor, {(i * k) % self.conductor: c
                                                       for i, c in enumerate(self.coefficients) if c != 0})

    def conjugate(self):
        return self.galois(self.conductor - 1)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("Cyclotomic division by zero.")
        if self.is_rational():
            return Cyclotomic.rational(1 / self.coefficients[0])

        # The product of the other Galois conjugates over the field norm.
        cofactor = Cyclotomic.rational(1)
        for k in galois_units(self.conductor):
            if k != 1:
                cofactor = cofactor * self.galois(k)
        norm = (self * cofactor).to_rational()
        return cofactor.scale(1 / norm)

    def __truediv__(self, other):
        return self * Cyclotomic.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except Exception:
            return NotImplemented
        if self.is_rational() and other.is_rational():
            return self.coefficients[0] == other.coefficients[0]
        left, right = self._align(other)
        return left.coefficients == right.coefficients

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def sort_key(self, conductor=None):
        value = self if conductor is None else self.embed(conductor)
        return tuple(value.coefficients)

    def __complex__(self):
        angles = 2j * np.pi * np.arange(len(self.coefficients)) / self.conductor
        return complex(np.sum(np.array([float(c) for c in self.coefficients]) * np.exp(angles)))

    def to_json(self):
        if self.is_integer():
            return int(self)
        if self.is_rational():
            return str(self.coefficients[0])
        return {"conductor": self.conductor, "coefficients": [str(c) for c in self.coefficients]}

    def __str__(self):
        if self.is_rational():
            return str(self.coefficients[0])

        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            power = "1" if i == 0 else ("z%d" % self.conductor if i == 1 else "z%d^%d" % (self.conductor, i))
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(power)
            elif c == -1:
                terms.append("-" + power)
            else:
                terms.append("%s*%s" % (c, power))
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return "Cyclotomic(%s)" % self
