import logging

import numpy as np
from sympy import QQ

from grpcert.character.cyclotomic import Cyclotomic
from grpcert.group.subgroups import SubgroupRecord, conjugacy_classes

_logger = logging.getLogger(__name__)


class ClassFunction(object):
    """
    A function on a group that is constant on conjugacy classes, one Cyclotomic per class.
    """

    def __init__(self, group, values, name=None):
        """
        :param group: FiniteGroup the function lives on.
        :param values: One value per conjugacy class, in class id order.
        :param name: Optional label used in reports.
        """
        classes = conjugacy_classes(group)
        values = tuple(Cyclotomic.coerce(v) for v in values)
        if len(values) != len(classes):
            raise ValueError("%s has %d conjugacy classes, but %d values were provided."
                             % (group.label, len(classes), len(values)))

        self.group = group
        self.classes = classes
        self.values = values
        self.name = name
        self._rational = None

    @classmethod
    def from_element_function(cls, group, function, name=None):
        """
        Build a class function from a function of element indices, evaluated on class representatives.
        """
        return cls(group, [function(int(x)) for x in conjugacy_classes(group).representatives], name=name)

    def __repr__(self):
        return "ClassFunction(%s, %s)" % (self.name or "unnamed", [str(v) for v in self.values])

    def __call__(self, element):
        return self.values[self.classes.class_of[element]]

    @property
    def degree(self):
        return self.values[0]

    def rational_values(self):
        """
        Values as sympy rationals, or None when some value is irrational.
        """
        if self._rational is None:
            self._rational = [v.to_rational() for v in self.values] if all(v.is_rational() for v in self.values) \
                else False
        return self._rational or None

    def sum_over(self, elements):
        """
        Sum of the function over the given elements of its group.
        """
        counts = np.bincount(self.classes.class_of[np.asarray(elements, dtype=np.int64)],
                             minlength=len(self.classes))
        rational = self.rational_values()
        if rational is not None:
            return Cyclotomic.rational(sum((int(c) * r for c, r in zip(counts, rational) if c), QQ(0)))

        total = Cyclotomic.rational(0)
        for c, value in zip(counts, self.values):
            if c:
                total = total + value.scale(int(c))
        return total

    def _check_same_group(self, other):
        if other.group is not self.group:
            raise ValueError("Class functions live on different groups: %s and %s."
                             % (self.group.label, other.group.label))

    def __add__(self, other):
        self._check_same_group(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check_same_group(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return ClassFunction(self.group, [-v for v in self.values], name=self.name)

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._check_same_group(other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        return ClassFunction(self.group, [v * other for v in self.values], name=self.name)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ClassFunction) or other.group is not self.group:
            return False
        return all(a == b for a, b in zip(self.values, other.values))

    def __ne__(self, other):
        return not self.__eq__(other)

    __hash__ = None

    def conjugate(self):
        return ClassFunction(self.group, [v.conjugate() for v in self.values], name=self.name)

    def differences(self, other):
        """
        Class ids where two class functions on the same group disagree.
        """
        self._check_same_group(other)
        return [i for i, (a, b) in enumerate(zip(self.values, other.values)) if a != b]

    def to_json(self):
        return {"name": self.name, "values": [v.to_json() for v in self.values]}


def embedding(subgroup, group):
    """
    Indices in group of the elements of subgroup, following the parent chain.
    :param subgroup: FiniteGroup created (possibly iteratively) by subgroup_group from group.
    :param group: The ambient group.
    """
    indices = np.arange(subgroup.order)
    current = subgroup
    while current is not group:
        if current.parent is None:
            raise ValueError("%s is not a subgroup of %s." % (subgroup.label, group.label))
        indices = current.parent_indices[indices]
        current = current.parent
    return indices


def _as_subgroup_group(subgroup):
    return subgroup.as_group() if isinstance(subgroup, SubgroupRecord) else subgroup


def restrict(character, subgroup):
    """
    Restriction to a subgroup.
    :param character: ClassFunction on G.
    :param subgroup: SubgroupRecord of G, or a FiniteGroup built from G by subgroup_group.
    :return: ClassFunction on the subgroup (as a group of its own).
    """
    subgroup_group = _as_subgroup_group(subgroup)
    indices = embedding(subgroup_group, character.group)
    representatives = conjugacy_classes(subgroup_group).representatives
    return ClassFunction(subgroup_group, [character(indices[r]) for r in representatives], name=character.name)


def induce(character, group):
    """
    Induction by the Frobenius formula, Ind(phi)(C) = |G| / (|H| |C|) * sum over h in H n C of phi(h).
    :param character: ClassFunction on H, a subgroup group of group.
    :param group: The ambient FiniteGroup.
    :return: ClassFunction on group.
    """
    subgroup = character.group
    indices = embedding(subgroup, group)
    classes = conjugacy_classes(group)
    sub_classes = conjugacy_classes(subgroup)

    k, k_sub = len(classes), len(sub_classes)
    pairs = classes.class_of[indices] * k_sub + sub_classes.class_of
    counts = np.bincount(pairs, minlength=k * k_sub).reshape(k, k_sub)

    rational = character.rational_values()
    values = []
    for c in range(k):
        factor = QQ(group.order, subgroup.order * int(classes.class_sizes[c]))
        row = counts[c]
        if rational is not None:
            total = sum((int(n) * r for n, r in zip(row, rational) if n), QQ(0))
            values.append(Cyclotomic.rational(total * factor))
        else:
            total = Cyclotomic.rational(0)
            for n, value in zip(row, character.values):
                if n:
                    total = total + value.scale(int(n))
            values.append(total.scale(factor))

    return ClassFunction(group, values, name=character.name)


def inner_product(first, second):
    """
    <chi, psi> = 1/|G| sum over g of chi(g) conj(psi(g)).
    """
    first._check_same_group(second)
    sizes = first.classes.class_sizes
    first_rational, second_rational = first.rational_values(), second.rational_values()
    if first_rational is not None and second_rational is not None:
        total = sum((int(s) * a * b for s, a, b in zip(sizes, first_rational, second_rational)), QQ(0))
        return Cyclotomic.rational(total / first.group.order)

    total = Cyclotomic.rational(0)
    for s, a, b in zip(sizes, first.values, second.values):
        if not a.is_zero() and not b.is_zero():
            total = total + (a * b.conjugate()).scale(int(s))
    return total.scale(QQ(1, first.group.order))


def trivial_character(group):
    return ClassFunction(group, [1] * len(conjugacy_classes(group)), name="trivial")


def regular_character(group):
    return ClassFunction(group, [group.order] + [0] * (len(conjugacy_classes(group)) - 1), name="regular")


def reduced_regular(group):
    """
    Regular character minus the trivial one: |A| - 1 at the identity, -1 elsewhere.
    """
    return ClassFunction(group, [group.order - 1] + [-1] * (len(conjugacy_classes(group)) - 1),
                         name="reduced regular")
