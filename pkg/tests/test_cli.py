import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from grpcert import config
from grpcert.character.class_function import ClassFunction
from grpcert.construction import rank3
from grpcert.construction.report import VerificationReport
from grpcert.interface.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, cmd_dispatch, emit_report, report_digest, run_config


class RunConfigTests(unittest.TestCase):

    def test_defaults(self):
        with mock.patch.dict(os.environ, {config.threads_environment_variable: "3"}):
            run = run_config()
        self.assertEqual(run.threads, 3)
        self.assertEqual(run.order_cap, config.permutation_closure_order_cap)
        self.assertEqual(run.subgroup_cap, config.subgroup_enumeration_order_cap)
        self.assertEqual(run.bound, config.cocycle_height_bound)
        self.assertEqual(run.format, config.report_default_format)
        self.assertIsNone(run.degree_bound)

    def test_flag_overrides_environment(self):
        with mock.patch.dict(os.environ, {config.threads_environment_variable: "3"}):
            self.assertEqual(run_config(threads=1).threads, 1)

    def test_bad_values(self):
        with mock.patch.dict(os.environ, {config.threads_environment_variable: "many"}):
            with self.assertRaises(ValueError):
                run_config()

        with self.assertRaises(ValueError):
            run_config(threads=0)

        with self.assertRaises(ValueError):
            run_config(threads=1, report_format="xml")


class CommandLineTests(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()
        self.output = os.path.join(self.directory, "report.json")
        self.caps = config.permutation_closure_order_cap, config.subgroup_enumeration_order_cap

    def tearDown(self):
        shutil.rmtree(self.directory)

    def run_command(self, *argv):
        """
        Run the command line writing to the temporary report file.
        :return: (exit code, report document or None).
        """
        code = cmd_dispatch(list(argv) + ["--output", self.output, "--threads", "1"])
        if not os.path.exists(self.output):
            return code, None
        with open(self.output) as input_file:
            document = json.load(input_file)
        os.remove(self.output)
        return code, document

    def test_catalog(self):
        code, document = self.run_command("catalog", "list")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(document["schema_version"], config.report_schema_version)
        self.assertTrue(any(entry["spec"] == "extraspecial:3:5:3" for entry in document["data"]["entries"]))
        self.assertEqual(len(document["digest"]), 64)
        self.assertEqual(document["run_config"]["threads"], 1)

    def test_subgroups(self):
        code, document = self.run_command("subgroups", "--group", "extraspecial:3:3:3")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(document["data"]["subgroups"], 19)
        self.assertEqual(len(document["data"]["classes"]), 11)
        self.assertEqual(document["data"]["rank"], 2)

    def test_classify_needs_rank3(self):
        code, document = self.run_command("subgroups", "--group", "extraspecial:3:3:3", "--classify")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIsNone(document)

    def test_table(self):
        code, document = self.run_command("table", "--group", "modular:3:3")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(sorted(document["data"]["table"]["degrees"]), [1] * 9 + [3] * 2)

    def test_table_orthogonality_skipped(self):
        with mock.patch.object(config, "character_table_verify_class_limit", 5):
            code, document = self.run_command("table", "--group", "modular:3:3")
        self.assertEqual(code, EXIT_OK)
        self.assertFalse(document["data"]["table"]["orthogonality_verified"])
        self.assertEqual([check["name"] for check in document["checks"] if check["status"] == "observation"],
                         ["orthogonality of the M(3,3) table not verified"])

    def test_verify_rank3_precondition(self):
        code, document = self.run_command("verify", "rank3", "--group", "extraspecial:3:3:3")
        self.assertEqual(code, EXIT_FAILED)
        self.assertEqual(document["checks"][0]["name"], "precondition")
        self.assertFalse(document["summary"]["passed"])

    def test_verify_rank3_corrupted_beta(self):
        code, document = self.run_command("verify", "rank3", "--group", "extraspecial:3:5:3")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(document["summary"]["passed"])

        original = rank3.beta_rank3

        def corrupted(group, Q):
            beta = original(group, Q)
            values = list(beta.values)
            values[-1] = values[-1] + 1
            return ClassFunction(group, values, name="corrupted beta")

        with mock.patch.object(rank3, "beta_rank3", corrupted):
            code, document = self.run_command("verify", "rank3", "--group", "extraspecial:3:5:3")
        self.assertEqual(code, EXIT_FAILED)
        self.assertFalse(document["summary"]["passed"])
        self.assertTrue(any("/" in check["witness"].get("multiplicity", "") for check in document["checks"]
                            if check["status"] == "fail"))

    def test_verify_abelian(self):
        code, document = self.run_command("verify", "abelian", "--group", "extraspecial:3:3:3")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(document["parameters"]["rank"], 1)

    def test_verify_amalgam_digest(self):
        code, first = self.run_command("verify", "amalgam", "--p", "3")
        self.assertEqual(code, EXIT_OK)
        code, second = self.run_command("verify", "amalgam", "--p", "3")
        self.assertEqual(first["digest"], second["digest"])
        self.assertIn("seconds", first["timing"])

        code, bounded = self.run_command("verify", "amalgam", "--p", "3", "--degree-bound", "6")
        self.assertEqual(code, EXIT_OK)
        self.assertNotEqual(bounded["digest"], first["digest"])
        self.assertEqual(bounded["data"]["effective_E"], 5)

    def test_complex_demo(self):
        code, document = self.run_command("complex", "demo", "--group", "cyclic:3", "--n", "2", "--rank", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(document["data"]["homology"], ["Z", "Z"])

    def test_complex_demo_exhausted(self):
        code, document = self.run_command("complex", "demo", "--group", "abelian:3,3", "--n", "2", "--rank", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual([check["name"] for check in document["checks"]], ["search exhausted"])
        self.assertEqual(document["checks"][0]["status"], "observation")

    def test_text_format(self):
        code, _ = self.run_command("verify", "amalgam", "--p", "3", "--format", "json")
        self.assertEqual(code, EXIT_OK)
        code = cmd_dispatch(["verify", "amalgam", "--p", "3", "--format", "text", "--output", self.output])
        self.assertEqual(code, EXIT_OK)
        with open(self.output) as input_file:
            text = input_file.read()
        self.assertTrue(text.startswith("amalgam_obstruction on "))
        self.assertIn("digest ", text)

    def test_usage_errors(self):
        self.assertEqual(cmd_dispatch(["verify"]), EXIT_USAGE)
        self.assertEqual(cmd_dispatch(["table"]), EXIT_USAGE)
        self.assertEqual(cmd_dispatch(["--help"]), EXIT_OK)

        code, document = self.run_command("table", "--group", "dihedral:8")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIsNone(document)

    def test_subgroup_cap(self):
        code, _ = self.run_command("subgroups", "--group", "cyclic:27", "--subgroup-cap", "9")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual((config.permutation_closure_order_cap, config.subgroup_enumeration_order_cap), self.caps)

        code, document = self.run_command("subgroups", "--group", "cyclic:27", "--order-cap", "50")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(document["run_config"]["order_cap"], 50)
        self.assertEqual((config.permutation_closure_order_cap, config.subgroup_enumeration_order_cap), self.caps)

    def test_unwritable_output(self):
        code = cmd_dispatch(["catalog", "list", "--output", os.path.join(self.directory, "missing", "report.json")])
        self.assertEqual(code, EXIT_USAGE)


class EmitReportTests(unittest.TestCase):

    def test_digest_ignores_timing(self):
        run = run_config(threads=1)
        report = VerificationReport("claim", "group")
        report.check("holds", True)
        first = report_digest(report, run)
        report.finish()
        self.assertEqual(report_digest(report, run), first)

        report.check("another", True)
        self.assertNotEqual(report_digest(report, run), first)

    def test_emit_to_file(self):
        directory = tempfile.mkdtemp()
        try:
            path = os.path.join(directory, "out.json")
            run = run_config(threads=1, output=path)
            report = VerificationReport("claim", "group").finish()
            document = emit_report(report, run)
            with open(path) as input_file:
                self.assertEqual(json.load(input_file), document)

            with self.assertRaises(IOError):
                emit_report(report, run_config(threads=1, output=os.path.join(directory, "no", "out.json")))
        finally:
            shutil.rmtree(directory)


if __name__ == '__main__':
    unittest.main()
