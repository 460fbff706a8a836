import logging

import numpy as np

from grpcert.complex.integer_matrix import kernel, quotient_invariants
from grpcert.complex.lattice import permutation_lattice, tensor_lattices
from grpcert.errors import PreconditionFailed
from grpcert.group.subgroups import SubgroupRecord, make_record, whole_group
from grpcert.utils import parallel_map, prime_power

_logger = logging.getLogger(__name__)


class TateReport(object):
    """
    Tate cohomology of a lattice in degrees -1 and 0 over a p-subgroup:
    H^-1 = ker(N) / I_H M and H^0 = M^H / N M, as (free rank, torsion coefficients).
    Both vanish iff the lattice is Z[H]-projective.
    """

    def __init__(self, subgroup, h_minus1, h_zero, lattice_name=None, degree=None):
        self.subgroup = subgroup
        self.h_minus1 = h_minus1
        self.h_zero = h_zero
        self.lattice_name = lattice_name
        self.degree = degree

    @property
    def projective(self):
        return not any(self.h_minus1) and not any(self.h_zero)

    def to_json(self):
        return {"subgroup": self.subgroup.members.tolist(),
                "subgroup_order": self.subgroup.order,
                "class_id": self.subgroup.conjugacy_class_id,
                "lattice": self.lattice_name,
                "degree": self.degree,
                "h_minus1": {"rank": self.h_minus1[0], "torsion": self.h_minus1[1]},
                "h_zero": {"rank": self.h_zero[0], "torsion": self.h_zero[1]},
                "projective": self.projective}

    def __repr__(self):
        return "TateReport(order %d, H^-1=%s, H^0=%s)" % (self.subgroup.order, self.h_minus1, self.h_zero)


def tate_01(subgroup, lattice, degree=None):
    """
    Tate cohomology in degrees -1 and 0 of a lattice restricted to a p-subgroup.
    :param subgroup: SubgroupRecord of lattice.group.
    :param lattice: GLattice.
    :param degree: Degree of the lattice inside a complex, kept for reports.
    :return: TateReport.
    :raise PreconditionFailed: when the subgroup is not a p-group.
    """
    if prime_power(subgroup.order) is None:
        raise PreconditionFailed("Tate criterion needs a p-subgroup, but the subgroup has order %d."
                                 % subgroup.order)

    rank = lattice.rank
    norm = lattice.norm(subgroup.members)
    eye = np.eye(rank, dtype=np.int64)
    augmentation = [lattice.matrix(g) - eye for g in subgroup.generator_indices]
    augmentation = np.hstack(augmentation) if augmentation else np.zeros((rank, 0), dtype=np.int64)

    h_zero = quotient_invariants(lattice.invariants(subgroup.generator_indices), norm)
    h_minus1 = quotient_invariants(kernel(norm), augmentation)
    return TateReport(subgroup, h_minus1, h_zero, lattice.name, degree)


class ProjectivityCertificate(object):
    """
    Tate reports of every module of a complex against every tested subgroup.
    """

    def __init__(self, complex_, subgroups, reports):
        self.complex = complex_
        self.subgroups = list(subgroups)
        self.reports = list(reports)

    @property
    def failures(self):
        return [report for report in self.reports if not report.projective]

    @property
    def projective(self):
        return not self.failures

    def to_json(self):
        return {"complex": self.complex.to_json(),
                "subgroup_orders": [s.order for s in self.subgroups],
                "projective": self.projective,
                "reports": [report.to_json() for report in self.reports]}


def projectivity_certificate(complex_, subgroups, threads=1):
    """
    tate_01 for every module of the complex against every subgroup. Conjugate subgroups give isomorphic
    restrictions, so class representatives suffice.
    :return: ProjectivityCertificate.
    """
    pairs = [(degree, subgroup) for degree in complex_.degrees for subgroup in subgroups]
    reports = parallel_map(lambda pair: tate_01(pair[1], complex_.module(pair[0]), pair[0]), pairs, threads)
    certificate = ProjectivityCertificate(complex_, subgroups, reports)
    _logger.info("Projectivity of %s over %d subgroups: %s." % (complex_.name, len(subgroups),
                                                                certificate.projective))
    return certificate


def permutation_tensor_check(group, subgroup, lattice):
    """
    Z[G/H] x M with the diagonal action is Z[G]-projective when M is Z[H]-projective.
    :param group: p-group G.
    :param subgroup: SubgroupRecord H, or member indices.
    :param lattice: GLattice over G.
    :return: TateReport of Z[G/H] x M over G.
    :raise PreconditionFailed: when M is not Z[H]-projective.
    """
    if not isinstance(subgroup, SubgroupRecord):
        subgroup = make_record(group, subgroup)

    restricted = tate_01(subgroup, lattice)
    if not restricted.projective:
        raise PreconditionFailed("%s is not projective over the subgroup of order %d."
                                 % (lattice.name, subgroup.order), witness=restricted.to_json())

    induced = tensor_lattices(permutation_lattice(group, subgroup), lattice)
    return tate_01(whole_group(group), induced)
