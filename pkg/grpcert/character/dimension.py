from grpcert.character.fixed_points import fixed_dimension, require_character
from grpcert.group.subgroups import SubgroupRecord, subgroup_class_representatives


class DimensionFunction(object):
    """
    Complex dimension n(H) of the H-fixed subspace of a representation, per conjugacy class of subgroups.
    The r-fold join of the unit sphere has S^(n_r(H)) as H-fixed set, n_r(H) = r n(H) + r - 1.
    """

    def __init__(self, group, values, name=None):
        """
        :param group: FiniteGroup.
        :param values: Dict subgroup conjugacy class id -> fixed dimension.
        :param name: Name of the character the function belongs to.
        """
        self.group = group
        self.values = dict(values)
        self.name = name

    def __call__(self, subgroup):
        class_id = subgroup.conjugacy_class_id if isinstance(subgroup, SubgroupRecord) else int(subgroup)
        return self.values[class_id]

    def join_power(self, subgroup, r):
        if r < 1:
            raise ValueError("Join power must be at least 1, but %d was provided." % r)
        return r * self(subgroup) + r - 1

    @property
    def degree(self):
        return self.values[0]

    def to_json(self):
        return {"name": self.name, "values": {str(k): v for k, v in sorted(self.values.items())}}


def dimension_function(character, checked=False):
    """
    Fixed dimensions <chi|_H, 1_H> on one representative of every conjugacy class of subgroups.
    :param character: Character of G.
    :param checked: Skip the character test.
    :return: DimensionFunction.
    """
    if not checked:
        require_character(character)

    group = character.group
    values = {record.conjugacy_class_id: fixed_dimension(character, record)
              for record in subgroup_class_representatives(group)}
    return DimensionFunction(group, values, name=character.name)
