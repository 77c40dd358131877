"""
Tests para el generador de tablas y reportes.
"""

import io
import json
import os
import shutil
import tempfile
import unittest

import numpy as np
import pandas as pd

import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src import __version__
from src.report_generator import ReportGenerator


class TestReportGenerator(unittest.TestCase):
    """Tests para ReportGenerator."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.generator = ReportGenerator(reports_dir=os.path.join(self.temp_dir, "reports"))
        self.table = pd.DataFrame({"t": [0.0, 0.5], "F_N": [1.0, 0.1 + 0.2], "H_N": [0.0, np.nan]})
        self.meta = ReportGenerator.build_metadata({"command": "cdf", "N": 3}, {"mode": "standard"},
                                                   {"rng": None})

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_initialization(self):
        self.assertTrue(os.path.isdir(self.generator.reports_dir))

    def test_metadata(self):
        self.assertEqual(self.meta["version"], __version__)
        self.assertEqual(self.meta["spec"]["N"], 3)
        self.assertIn("rng", self.meta)

    def test_csv_layout(self):
        text = self.generator.render_table(self.table, self.meta, "csv")
        lines = text.splitlines()
        self.assertTrue(lines[0].startswith("# meta: "))
        self.assertEqual(json.loads(lines[0][len("# meta: "):])["spec"]["command"], "cdf")
        self.assertEqual(lines[1], "t,F_N,H_N")
        self.assertIn("0.30000000000000004", lines[3])

    def test_csv_round_trip(self):
        path = self.generator.write_table(self.table, self.meta, "csv",
                                          path=os.path.join(self.temp_dir, "out", "cdf.csv"))
        loaded = ReportGenerator.load_table(path)
        self.assertEqual(loaded["meta"]["version"], __version__)
        self.assertEqual(loaded["table"]["F_N"][1], 0.1 + 0.2)
        self.assertTrue(np.isnan(loaded["table"]["H_N"][1]))

    def test_json_layout(self):
        document = json.loads(self.generator.render_table(self.table, self.meta, "json"))
        self.assertEqual(document["columns"], ["t", "F_N", "H_N"])
        self.assertEqual(len(document["data"]), 2)
        self.assertIsNone(document["data"][1][2])
        self.assertIsNone(document["meta"]["rng"])

    def test_json_round_trip(self):
        path = self.generator.write_table(self.table, self.meta, "json",
                                          path=os.path.join(self.temp_dir, "cdf.json"))
        loaded = ReportGenerator.load_table(path)
        self.assertEqual(list(loaded["table"].columns), ["t", "F_N", "H_N"])
        self.assertEqual(loaded["meta"]["spec"]["command"], "cdf")

    def test_stream_output(self):
        stream = io.StringIO()
        self.assertIsNone(self.generator.write_table(self.table, self.meta, "csv", stream=stream))
        self.assertTrue(stream.getvalue().startswith("# meta: "))

    def test_output_is_deterministic(self):
        first = self.generator.render_table(self.table, self.meta, "json")
        second = self.generator.render_table(self.table, dict(reversed(list(self.meta.items()))), "json")
        self.assertEqual(first, second)

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            self.generator.render_table(self.table, self.meta, "xml")

    def _diagnostic_table(self):
        return pd.DataFrame({
            "x": [0.5, 1.0, 2.0],
            "empirical_survival": [0.95, 0.83, 0.0],
            "F_inf": [0.96, 0.84, 0.5],
            "diagnostic": [-0.3, -0.6, np.nan],
            "prediction": [-0.2, -0.5, -0.9],
            "std_error": [0.1, 0.2, np.nan],
            "insufficient": [False, False, True],
        })

    def test_write_summary(self):
        meta = ReportGenerator.build_metadata({"N": 20, "a": 1.0, "samples": 1000}, {},
                                              {"rng": "philox", "ks_distance": 0.01})
        path = self.generator.write_summary(self._diagnostic_table(), meta)
        with open(path, "r", encoding="utf-8") as f:
            content = f.read()
        self.assertIn("RESUMEN", content)
        self.assertIn("Puntos utilizables: 2 de 3", content)
        self.assertIn("z = -1.00", content)

    def test_plot_correction_diagnostic(self):
        report = self.generator.plot_correction_diagnostic(self._diagnostic_table(), 20, 1.0)
        self.assertTrue(os.path.exists(report["figure"]))
        self.assertEqual(self.generator.plot_correction_diagnostic(self._diagnostic_table(), 20, 1.0,
                                                                   save_plots=False), {})


if __name__ == '__main__':
    unittest.main()
