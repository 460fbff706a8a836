import logging
from functools import reduce
from itertools import combinations, islice

from grpcert import config
from grpcert.complex.chain import (GChainComplex, describe_homology, euler_characteristic, homology,
                                   homology_euler_characteristic, sphere_homology_witness, sphere_product_ranks,
                                   tensor_complexes)
from grpcert.complex.lattice import trivial_lattice
from grpcert.complex.resolution import build_C_zeta, free_resolution, surjective_cocycles
from grpcert.complex.tate import projectivity_certificate
from grpcert.construction.report import VerificationReport
from grpcert.errors import SearchExhausted, UnexpectedHomology
from grpcert.group.subgroups import subgroup_class_representatives

_logger = logging.getLogger(__name__)


def _unit_complex(group):
    return GChainComplex(group, 0, [trivial_lattice(group)], [], name="Z")


def _sphere_homology(groups, dimension, count):
    witness = sphere_homology_witness(groups, dimension, count)
    return witness is None, witness or {"ranks": [g.rank for g in groups]}


def find_spherical_classes(group, n, r, bound=None, threads=1):
    """
    Search r-tuples of surjective degree n cocycles whose truncated complexes C_zeta tensor to a complex of
    modules projective over every subgroup of rank <= max(r, 1). The first tuple that passes is certified: its
    tensor product has the homology of a product of r spheres of dimension n - 1.
    :param group: Group with a built in resolution.
    :param n: Cohomological degree, at least 2.
    :param r: Number of classes.
    :param bound: Coefficient bound of the cocycle search. Default config.cocycle_height_bound.
    :param threads: Worker threads for the Tate computations.
    :return: VerificationReport.
    :raise SearchExhausted: when no tuple within the bounds passes.
    """
    if bound is None:
        bound = config.cocycle_height_bound
    if n < 2:
        raise ValueError("Spheres of positive dimension need n >= 2, but %d was provided." % n)

    resolution = free_resolution(group, n)
    cocycles = surjective_cocycles(group, resolution, n, bound)
    subgroups = [record for record in subgroup_class_representatives(group) if record.rank <= max(r, 1)]

    tried = 0
    for candidate in islice(combinations(cocycles, r), config.spherical_search_tuple_limit):
        tried += 1
        try:
            factors = [build_C_zeta(resolution, n, cocycle) for cocycle in candidate]
        except UnexpectedHomology as error:
            _logger.debug("Cocycles %s rejected: %s" % ([c.coefficients for c in candidate], error))
            continue
        total = reduce(tensor_complexes, factors) if factors else _unit_complex(group)
        groups = homology(total)
        witness = sphere_homology_witness(groups, n - 1, r)
        if witness is not None:
            _logger.debug("Cocycles %s give homology ranks %s." % ([c.coefficients for c in candidate],
                                                                  witness["ranks"]))
            continue
        certificate = projectivity_certificate(total, subgroups, threads)
        if not certificate.projective:
            _logger.debug("Cocycles %s fail over %d subgroups." % ([c.coefficients for c in candidate],
                                                                   len(certificate.failures)))
            continue

        return _certify(group, n, r, bound, resolution, candidate, factors, total, groups, certificate, tried)

    raise SearchExhausted("No %d-tuple among %d surjective cocycles of degree %d with bound %d gives a projective "
                          "complex over %s." % (r, len(cocycles), n, bound, group.label),
                          witness={"cocycles": len(cocycles), "tuples_tried": tried, "bound": bound})


def _certify(group, n, r, bound, resolution, cocycles, factors, total, groups, certificate, tried):
    report = VerificationReport("spherical_classes", group.label, {"n": n, "r": r, "bound": bound})
    report.data["resolution_ranks"] = resolution.complex.ranks()
    report.data["cocycles"] = [{"values": list(c.values), "coefficients": list(c.coefficients),
                                "class": list(c.class_key), "coboundary": c.is_coboundary} for c in cocycles]
    report.data["tuples_tried"] = tried

    for index, factor in enumerate(factors):
        holds, witness = _sphere_homology(homology(factor), n - 1, 1)
        report.check("C_zeta %d has the homology of S^%d" % (index, n - 1), holds, witness)

    holds, witness = _sphere_homology(groups, n - 1, r)
    report.check("tensor product has the homology of a product of %d spheres" % r, holds, witness)
    report.check("Euler characteristic", euler_characteristic(total) == homology_euler_characteristic(groups),
                 {"chain": euler_characteristic(total), "homology": homology_euler_characteristic(groups)})
    report.data["ranks"] = total.ranks()
    report.data["homology"] = [describe_homology(g) for g in groups]

    for tate in certificate.reports:
        report.check("degree %d projective over class %d" % (tate.degree, tate.subgroup.conjugacy_class_id),
                     tate.projective, tate.to_json())

    report.observe("subgroups of rank <= %d of this group only" % max(r, 1),
                   {"classes": [s.conjugacy_class_id for s in certificate.subgroups]})
    report.assume("A finite free complex of projective modules with this homology is realized by a free action "
                  "on a finite complex homotopy equivalent to the product of spheres.")
    _logger.info("Spherical classes of %s: %s" % (group.label, report.counts()))
    return report.finish()
