"""
Tests para el orquestador de comandos.
"""

import os
import shutil
import tempfile
import unittest
from unittest.mock import MagicMock

import numpy as np
import pandas as pd
import pytest

import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.montecarlo import WishartSampler
from src.op_engine import DistributionResult, RecurrenceEngine
from src.painleve import HardEdgeSolver, SoftEdgeSolver
from src.report_generator import ReportGenerator
from src.run_spec import RunSpec
from src.study_runner import StudyRunner
from src.utils.errors import ConditioningError


class TestStudyRunnerWithMocks(unittest.TestCase):
    """Tests del orquestador con dependencias simuladas."""

    def setUp(self):
        self.engine = MagicMock(spec=RecurrenceEngine)
        self.hard = MagicMock(spec=HardEdgeSolver)
        self.soft = MagicMock(spec=SoftEdgeSolver)
        self.sampler = MagicMock(spec=WishartSampler)
        self.runner = StudyRunner(self.engine, self.hard, self.soft, self.sampler, ReportGenerator())

    def _cdf_result(self, F, H):
        return DistributionResult(F=F, log_F=float(np.log(F)), H=H)

    def test_run_cdf(self):
        self.engine.compute_cdf.return_value = self._cdf_result(0.5, -0.25)
        spec = RunSpec(command="cdf", N=2, a=0.0, t_grid="0:1:2")
        result = self.runner.run(spec)

        self.assertEqual(list(result.table.columns), ["t", "F_N", "pdf", "H_N"])
        self.assertEqual(result.table.loc[0, "F_N"], 1.0)
        self.assertEqual(result.table.loc[0, "pdf"], 2.0)
        self.assertAlmostEqual(result.table.loc[1, "pdf"], 0.125, places=14)
        self.engine.compute_cdf.assert_called_once()
        self.assertEqual(result.meta["spec"]["command"], "cdf")
        self.assertIsNone(result.meta["rng"])
        self.assertEqual(result.meta["precision_used"], ["standard"])

    def test_pdf_at_origin_vanishes_for_positive_a(self):
        self.engine.compute_cdf.return_value = self._cdf_result(0.5, -0.25)
        result = self.runner.run_cdf(RunSpec(command="cdf", N=2, a=1.0, t_grid="0:0:1"))
        self.assertEqual(result.table.loc[0, "pdf"], 0.0)
        self.engine.compute_cdf.assert_not_called()

    def test_generate_sweep_combinations(self):
        combinations = self.runner.generate_sweep_combinations()
        self.assertEqual(len(combinations), 8 * 5 * 4)
        self.assertIn((8, 3.7, 2.0), combinations)

    def test_oracle_conditioning_failure_is_reported(self):
        self.engine.compute_cdf.return_value = self._cdf_result(0.5, -0.25)
        self.engine.hankel_oracle_cdf.side_effect = ConditioningError("mal condicionado", 2.0)
        result = self.runner.run(RunSpec(command="verify", sweep=True))
        self.assertFalse(result.passed)
        self.assertEqual(len(result.table), 160)
        self.assertTrue(result.table["residual"].isna().all())

    def test_oracle_sweep_passes(self):
        self.engine.compute_cdf.return_value = self._cdf_result(0.5, -0.25)
        self.engine.hankel_oracle_cdf.return_value = 0.5
        result = self.runner.run(RunSpec(command="verify", sweep=True))
        self.assertTrue(result.passed)
        self.assertEqual(result.meta["failed"], 0)


class TestStudyRunnerIntegration(unittest.TestCase):
    """Tests de integración con los componentes reales."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.runner = StudyRunner(RecurrenceEngine(), HardEdgeSolver(), SoftEdgeSolver(),
                                  WishartSampler(), ReportGenerator())

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_cdf_closed_form(self):
        """N = 1, a = 0: F = e^{-t}, pdf = e^{-t}."""
        result = self.runner.run(RunSpec(command="cdf", N=1, a=0.0, t_grid="0:2:5"))
        t = result.table["t"].to_numpy()
        np.testing.assert_allclose(result.table["F_N"], np.exp(-t), rtol=1e-12)
        np.testing.assert_allclose(result.table["pdf"], np.exp(-t), rtol=1e-10)

    def test_limit_bessel_matches_ode(self):
        ode = self.runner.run(RunSpec(command="limit", a=1.0, x_grid="0:4:9")).table
        bessel = self.runner.run(RunSpec(command="limit", a=1.0, x_grid="0:4:9", bessel=True)).table
        np.testing.assert_allclose(ode["F_inf"], bessel["F_inf"], atol=1e-6)

    def test_correction_scaling(self):
        result = self.runner.run(RunSpec(command="correction", N=40, a=1.0, x_grid="0.5:2:4"))
        table = result.table
        self.assertEqual(list(table.columns), ["x", "F_inf", "F_N_corrected", "F_N_exact",
                                               "diff_times_N"])
        self.assertLess(np.max(np.abs(table["F_N_exact"] - table["F_N_corrected"])),
                        np.max(np.abs(table["F_N_exact"] - table["F_inf"])))

    @pytest.mark.slow
    def test_correction_residual_shrinks_with_n(self):
        """N(F_N(x/N) - F_∞(x)) converge a (a/2)·x·F'_∞ = (a/2)·f·F_∞ al pasar de N = 50 a 200."""
        for a in (1.0, 2.0):
            limit = self.runner.run(RunSpec(command="limit", a=a, x_grid="0.5:3:6")).table
            target = 0.5 * a * (limit["f"] * limit["F_inf"]).to_numpy()
            diffs = {
                N: self.runner.run(RunSpec(command="correction", N=N, a=a, x_grid="0.5:3:6"))
                .table["diff_times_N"].to_numpy()
                for N in (50, 200)
            }
            coarse = np.abs(diffs[50] - target)
            fine = np.abs(diffs[200] - target)
            for i, x in enumerate(limit["x"]):
                with self.subTest(a=a, x=x):
                    self.assertLessEqual(fine[i], 0.5 * coarse[i] + 1e-6)
            self.assertLessEqual(np.max(fine) / np.max(np.abs(target)), 0.05)

    def test_verify_point(self):
        result = self.runner.run(RunSpec(command="verify", N=4, a=1.0, t=0.5))
        self.assertTrue(result.passed)
        self.assertTrue(result.table["check"].str.startswith("hankel_oracle").any())

    @pytest.mark.slow
    def test_mc_writes_reports(self):
        report_dir = os.path.join(self.temp_dir, "reports")
        dump = os.path.join(self.temp_dir, "samples.bin")
        spec = RunSpec(command="mc", N=3, a=1.0, n_samples=5000, seed=11, x_grid="0.5:2:4",
                       dump_path=dump, report_dir=report_dir)
        result = self.runner.run(spec)
        self.assertLess(result.meta["ks_distance"], 0.03)
        self.assertEqual(result.meta["rng"], "philox4x64-sseq-b2000")
        self.assertTrue(os.path.exists(dump))
        self.assertTrue(os.path.exists(os.path.join(report_dir, "summary.txt")))
        self.assertIsInstance(result.table, pd.DataFrame)


if __name__ == '__main__':
    unittest.main()
