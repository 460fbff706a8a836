import argparse
import hashlib
import json
import logging
import sys
from collections import namedtuple

from grpcert import config
from grpcert.character.table import character_table
from grpcert.complex.spherical import find_spherical_classes
from grpcert.construction.abelian import verify_abelian
from grpcert.construction.amalgam import amalgam_obstruction
from grpcert.construction.isotropy import center_sphere_family
from grpcert.construction.rank3 import verify_rank3
from grpcert.construction.report import VerificationReport, jsonable
from grpcert.errors import GroupCertError, SearchExhausted, Unclassifiable
from grpcert.group.catalog import CATALOG_ENTRIES
from grpcert.group.structure import classify_subgroup, find_normal_Q
from grpcert.group.subgroups import all_subgroups, center, elementary_abelian_rank, subgroup_class_representatives
from grpcert.interface.group_spec import build_group, parse_group_spec
from grpcert.utils import resolve_threads

_logger = logging.getLogger(__name__)

RUN_CONFIG = namedtuple("RUN_CONFIG", ["threads", "order_cap", "subgroup_cap", "degree_bound", "bound", "output",
                                       "format"])

REPORT_FORMATS = ("json", "text")

# Exit codes: every check passed, some check failed, usage or input error.
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def run_config(threads=None, order_cap=None, subgroup_cap=None, degree_bound=None, bound=None, output=None,
               report_format=None):
    """
    Resolve the run configuration: explicit values first, then the environment, then config defaults.
    :param threads: Worker threads; default the GRPCERT_THREADS variable, then the machine parallelism.
    :param order_cap: Closure cap for permutation groups.
    :param subgroup_cap: Largest order for subgroup enumeration.
    :param degree_bound: Degree bound of the amalgam enumeration; None keeps the 2p^2 default.
    :param bound: Coefficient bound of the cocycle search.
    :param output: Report path; None writes to standard output.
    :param report_format: "json" or "text".
    :return: RUN_CONFIG named tuple.
    """
    threads = resolve_threads(threads)

    if not order_cap or order_cap < 1:
        order_cap = config.permutation_closure_order_cap

    if not subgroup_cap or subgroup_cap < 1:
        subgroup_cap = config.subgroup_enumeration_order_cap

    if bound is None or bound < 0:
        bound = config.cocycle_height_bound

    if not report_format:
        report_format = config.report_default_format
    if report_format not in REPORT_FORMATS:
        raise ValueError("Report format must be one of %s, but '%s' was provided." % (REPORT_FORMATS, report_format))

    return RUN_CONFIG(threads, order_cap, subgroup_cap, degree_bound, bound, output, report_format)


def _stable_document(report, run):
    document = report.to_dict(include_timing=False)
    document["schema_version"] = config.report_schema_version
    document["run_config"] = jsonable(run._asdict())
    return document


def report_digest(report, run):
    """
    sha256 of the report without its timing block; equal inputs give equal digests.
    """
    text = json.dumps(_stable_document(report, run), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def format_text(document):
    summary = document["summary"]
    lines = ["%s on %s: %d pass, %d fail, %d observation" % (document["claim"], document["group"], summary["pass"],
                                                              summary["fail"], summary["observation"])]
    for check in document["checks"]:
        line = "  [%s] %s" % (check["status"].upper(), check["name"])
        if check["status"] != "pass" and check["witness"] is not None:
            line += " %s" % json.dumps(check["witness"], sort_keys=True)
        lines.append(line)
    lines.extend("  assumed: %s" % assumption for assumption in document["assumptions"])
    lines.append("digest %s" % document["digest"])
    return "\n".join(lines) + "\n"


def emit_report(report, run):
    """
    Write the report as sorted-key JSON or text, with schema version, resolved run config, digest and timing.
    :return: The written document.
    :raise IOError: with the output path when the file cannot be written.
    """
    document = _stable_document(report, run)
    document["digest"] = report_digest(report, run)
    document["timing"] = jsonable(report.timing)

    text = json.dumps(document, sort_keys=True, indent=2) + "\n" if run.format == "json" else format_text(document)

    if run.output is None:
        sys.stdout.write(text)
    else:
        try:
            with open(run.output, "w") as output_file:
                output_file.write(text)
        except (IOError, OSError) as error:
            raise IOError("Cannot write the report to '%s': %s" % (run.output, error))
        _logger.info("Report written to %s." % run.output)
    return document


def _group(args, run):
    return build_group(parse_group_spec(args.group), order_cap=run.order_cap)


def _catalog_command(args, run):
    report = VerificationReport("catalog", "catalog")
    report.data["entries"] = [{"spec": spec, "description": description} for spec, description in CATALOG_ENTRIES]
    return report.finish()


def _subgroups_command(args, run):
    group = _group(args, run)
    report = VerificationReport("subgroups", group.label, {"classify": args.classify})
    subgroups = all_subgroups(group, threads=run.threads)
    representatives = subgroup_class_representatives(group)
    report.data["order"] = group.order
    report.data["subgroups"] = len(subgroups)
    report.data["rank"] = elementary_abelian_rank(group)
    report.data["classes"] = [{"class_id": record.conjugacy_class_id, "order": record.order, "rank": record.rank,
                               "size": sum(1 for s in subgroups if s.conjugacy_class_id == record.conjugacy_class_id),
                               "abelian": record.is_abelian, "normal": record.is_normal}
                              for record in representatives]

    if args.classify:
        Q = find_normal_Q(group)
        report.data["Q"] = Q.members.tolist()
        group_center = center(group)
        for record in representatives:
            if record.intersection_order(group_center) != 1:
                continue
            name = "classify class %d" % record.conjugacy_class_id
            try:
                classification = classify_subgroup(group, Q, record)
            except Unclassifiable as error:
                report.check(name, False, error.witness)
                continue
            report.check(name, True, {"tag": classification.tag, "order": record.order})
    return report.finish()


def _table_command(args, run):
    group = _group(args, run)
    table = character_table(group)
    report = VerificationReport("character_table", group.label)
    report.observe_table(table)
    report.check("sum of squared degrees is |G|", sum(d * d for d in table.degrees) == group.order,
                 {"degrees": table.degrees})
    report.check("one irreducible per class", len(table) == len(table.classes), {"irreducibles": len(table)})
    report.data["table"] = table.to_json()
    return report.finish()


def _verify_rank3_command(args, run):
    return verify_rank3(_group(args, run), sweep_all_Q=args.all_q, threads=run.threads)


def _verify_abelian_command(args, run):
    group = _group(args, run)
    model = center_sphere_family(group)
    return verify_abelian(group, model, rank=args.rank, sweep_injections=args.sweep_injections)


def _verify_amalgam_command(args, run):
    return amalgam_obstruction(args.p, run.degree_bound)


def _complex_demo_command(args, run):
    group = _group(args, run)
    try:
        return find_spherical_classes(group, args.n, args.rank, run.bound, run.threads)
    except SearchExhausted as error:
        report = VerificationReport("spherical_classes", group.label, {"n": args.n, "r": args.rank,
                                                                       "bound": run.bound})
        report.observe("search exhausted", error.witness)
        return report.finish()


def _add_common_args(parser):
    parser.add_argument("--verbose", action="store_true", help="Log progress at debug level.")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (env %s)."
                                                                  % config.threads_environment_variable)
    parser.add_argument("--order-cap", type=int, default=None, help="Closure cap for permutation groups.")
    parser.add_argument("--subgroup-cap", type=int, default=None, help="Largest order for subgroup enumeration.")
    parser.add_argument("--degree-bound", type=int, default=None, help="Degree bound of effective characters.")
    parser.add_argument("--bound", type=int, default=None, help="Coefficient bound of the cocycle search.")
    parser.add_argument("--output", default=None, help="Report file; standard output by default.")
    parser.add_argument("--format", choices=REPORT_FORMATS, default=None, help="Report format.")


def _add_group_arg(parser):
    parser.add_argument("--group", required=True, help="Group spec, e.g. extraspecial:3:5:3.")


def build_parser():
    parser = argparse.ArgumentParser(prog="grpcert", description="Certify free actions of finite p-groups on "
                                                                 "products of spheres.")
    commands = parser.add_subparsers(dest="command", required=True)

    catalog = commands.add_parser("catalog", help="Catalog of named groups.")
    catalog.add_argument("action", choices=["list"])
    _add_common_args(catalog)
    catalog.set_defaults(func=_catalog_command)

    subgroups = commands.add_parser("subgroups", help="Subgroup classes of a group.")
    _add_group_arg(subgroups)
    subgroups.add_argument("--classify", action="store_true", help="Classify subgroups meeting the center trivially.")
    _add_common_args(subgroups)
    subgroups.set_defaults(func=_subgroups_command)

    table = commands.add_parser("table", help="Character table of a group.")
    _add_group_arg(table)
    _add_common_args(table)
    table.set_defaults(func=_table_command)

    verify = commands.add_parser("verify", help="Verify a construction.")
    claims = verify.add_subparsers(dest="claim", required=True)

    rank3 = claims.add_parser("rank3", help="Rank 3 construction with cyclic isotropy.")
    _add_group_arg(rank3)
    rank3.add_argument("--all-q", action="store_true", help="Check every valid Q.")
    _add_common_args(rank3)
    rank3.set_defaults(func=_verify_rank3_command)

    abelian = claims.add_parser("abelian", help="Construction for abelian isotropy.")
    _add_group_arg(abelian)
    abelian.add_argument("--rank", type=int, default=None, help="Target rank; default rk_X of the model.")
    abelian.add_argument("--sweep-injections", action="store_true", help="Compare several injections.")
    _add_common_args(abelian)
    abelian.set_defaults(func=_verify_abelian_command)

    amalgam = claims.add_parser("amalgam", help="Obstruction for the amalgam of two extraspecial groups.")
    amalgam.add_argument("--p", type=int, required=True, help="Odd prime.")
    _add_common_args(amalgam)
    amalgam.set_defaults(func=_verify_amalgam_command)

    complex_ = commands.add_parser("complex", help="Algebraic chain complex constructions.")
    complex_commands = complex_.add_subparsers(dest="action", required=True)
    demo = complex_commands.add_parser("demo", help="Search spherical classes and certify projectivity.")
    _add_group_arg(demo)
    demo.add_argument("--n", type=int, required=True, help="Cohomological degree.")
    demo.add_argument("--rank", type=int, required=True, help="Number of spheres.")
    _add_common_args(demo)
    demo.set_defaults(func=_complex_demo_command)

    return parser


def cmd_dispatch(argv=None):
    """
    Run one command and write its report.
    :return: 0 when every check passed, 1 when a check failed, 2 for usage or input errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return EXIT_USAGE if error.code else EXIT_OK

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    caps = config.permutation_closure_order_cap, config.subgroup_enumeration_order_cap
    try:
        run = run_config(args.threads, args.order_cap, args.subgroup_cap, args.degree_bound, args.bound, args.output,
                         args.format)
        config.permutation_closure_order_cap = run.order_cap
        config.subgroup_enumeration_order_cap = run.subgroup_cap
        report = args.func(args, run)
        emit_report(report, run)
    except (GroupCertError, ValueError, IOError) as error:
        sys.stderr.write("grpcert: %s\n" % error)
        return EXIT_USAGE
    finally:
        config.permutation_closure_order_cap, config.subgroup_enumeration_order_cap = caps

    return EXIT_OK if report.passed else EXIT_FAILED


def main(argv=None):
    sys.exit(cmd_dispatch(argv))
