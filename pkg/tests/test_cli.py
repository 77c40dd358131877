"""
Tests para la interfaz de línea de comandos.
"""

import io
import json
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stdout

import numpy as np
import pytest

import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src import __version__
from src.cli import EXIT_OK, EXIT_USAGE, build_parser, main, spec_from_args
from src.report_generator import ReportGenerator
from src.utils.errors import UsageError


class TestCommandLine(unittest.TestCase):
    """Tests para el punto de entrada wshart."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_cdf_to_file(self):
        path = os.path.join(self.temp_dir, "cdf.csv")
        code = main(["cdf", "--N", "3", "--a", "0", "--t-grid", "0:1:5", "--out", path], environ={})
        self.assertEqual(code, EXIT_OK)
        loaded = ReportGenerator.load_table(path)
        self.assertEqual(loaded["meta"]["spec"]["N"], 3)
        self.assertEqual(loaded["meta"]["precision"]["mode"], "standard")
        t = loaded["table"]["t"].to_numpy()
        np.testing.assert_allclose(loaded["table"]["F_N"], np.exp(-3 * t), rtol=1e-12)

    def test_json_output_with_extended_precision(self):
        path = os.path.join(self.temp_dir, "limit.json")
        code = main(["limit", "--a", "2", "--x-grid", "0:2:3", "--bessel", "--precision", "extended",
                     "--digits", "40", "--format", "json", "--out", path], environ={})
        self.assertEqual(code, EXIT_OK)
        with open(path, "r", encoding="utf-8") as f:
            document = json.load(f)
        self.assertEqual(document["columns"], ["x", "f", "F_inf"])
        self.assertEqual(document["meta"]["precision"]["digits"], 40)
        self.assertEqual(document["meta"]["source"], "bessel")

    def test_precision_from_environment(self):
        args = build_parser().parse_args(["verify", "--N", "3", "--a", "1", "--t", "0.5"])
        spec = spec_from_args(args, environ={"WSHART_PRECISION": "extended", "WSHART_DIGITS": "50"})
        self.assertTrue(spec.precision.is_extended)
        self.assertEqual(spec.precision.digits, 50)

    def test_usage_errors(self):
        cases = [
            [],
            ["plot"],
            ["cdf", "--N", "3", "--a", "0"],
            ["cdf", "--N", "3", "--a", "0", "--t-grid", "1:0:5"],
            ["cdf", "--N", "three", "--a", "0", "--t-grid", "0:1:5"],
            ["mc", "--N", "3", "--a", "0.5"],
            ["limit", "--a", "1", "--digits", "40"],
        ]
        for argv in cases:
            with self.subTest(argv=argv):
                self.assertEqual(main(argv, environ={}), EXIT_USAGE)

    def test_invalid_environment(self):
        argv = ["cdf", "--N", "3", "--a", "0", "--t-grid", "0:1:2"]
        self.assertEqual(main(argv, environ={"WSHART_PRECISION": "quad"}), EXIT_USAGE)

    def test_spec_requires_command(self):
        with self.assertRaises(UsageError):
            spec_from_args(build_parser().parse_args([]), environ={})

    def test_verify_exit_code(self):
        path = os.path.join(self.temp_dir, "verify.csv")
        code = main(["verify", "--N", "3", "--a", "1", "--t", "0.5", "--out", path], environ={})
        self.assertEqual(code, EXIT_OK)
        table = ReportGenerator.load_table(path)["table"]
        self.assertTrue(table["passed"].all())

    def _captured(self, argv):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = main(argv, environ={})
        return code, buffer.getvalue()

    def test_help_and_version_exit_cleanly(self):
        for argv in (["--help"], ["cdf", "--help"], ["--version"]):
            with self.subTest(argv=argv):
                code, text = self._captured(argv)
                self.assertEqual(code, EXIT_OK)
                self.assertTrue(text)
        self.assertIn(__version__, self._captured(["--version"])[1])

    def test_repeated_runs_give_identical_stdout(self):
        for argv in (["cdf", "--N", "5", "--a", "1", "--t-grid", "0:1:11"],
                     ["limit", "--a", "1", "--x-grid", "0:2:5", "--format", "json"]):
            with self.subTest(command=argv[0]):
                first_code, first = self._captured(argv)
                second_code, second = self._captured(argv)
                self.assertEqual(first_code, EXIT_OK)
                self.assertEqual(second_code, EXIT_OK)
                self.assertTrue(first)
                self.assertEqual(first, second)

    @pytest.mark.slow
    def test_mc_run(self):
        path = os.path.join(self.temp_dir, "mc.csv")
        dump = os.path.join(self.temp_dir, "samples.csv")
        code = main(["mc", "--N", "2", "--a", "1", "--samples", "3000", "--seed", "5",
                     "--streams", "2", "--x-grid", "0.5:1.5:3", "--dump", dump, "--out", path],
                    environ={})
        self.assertEqual(code, EXIT_OK)
        loaded = ReportGenerator.load_table(path)
        self.assertEqual(loaded["meta"]["rng"], "philox4x64-sseq-b2000")
        self.assertEqual(len(loaded["table"]), 3)
        self.assertTrue(os.path.exists(dump))

    @pytest.mark.slow
    def test_mc_dump_is_reproducible(self):
        """Misma semilla: volcados idénticos byte a byte, con 1, 4 o 16 hilos."""
        outputs = {}
        for label, streams in (("first", "1"), ("second", "1"), ("four", "4"), ("sixteen", "16")):
            dump = os.path.join(self.temp_dir, f"{label}.bin")
            out = os.path.join(self.temp_dir, f"{label}.csv")
            code = main(["mc", "--N", "3", "--a", "1", "--samples", "4007", "--seed", "11",
                         "--streams", streams, "--x-grid", "0.5:1.5:3", "--dump", dump, "--out", out],
                        environ={})
            self.assertEqual(code, EXIT_OK)
            with open(dump, "rb") as f_dump, open(out, "rb") as f_out:
                outputs[label] = (f_dump.read(), f_out.read())
        self.assertEqual(outputs["first"], outputs["second"])
        self.assertEqual(outputs["first"][0], outputs["four"][0])
        self.assertEqual(outputs["first"][0], outputs["sixteen"][0])


if __name__ == '__main__':
    unittest.main()
