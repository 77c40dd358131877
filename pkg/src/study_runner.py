"""
Orquestador de estudios: traduce una RunSpec validada en la tabla de cada comando
(cdf, limit, correction, softedge, mc, verify) y su bloque de metadatos.

Las dependencias (motor, solvers, muestreador y generador de reportes) se inyectan
en el constructor.
"""

import itertools
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from .limits import soft_edge_params
from .montecarlo import (
    RNG_ID,
    EmpiricalCDF,
    SamplerConfig,
    WishartSampler,
    correction_diagnostic,
    ks_distance,
    write_sample_csv,
    write_sample_dump,
)
from .op_engine import ModelParams, RecurrenceEngine
from .painleve import H1_CONVENTION, HardEdgeSolver, SoftEdgeSolver
from .report_generator import ReportGenerator
from .run_spec import RunSpec
from .utils.errors import ConditioningError
from .utils.precision import PrecisionContext

SWEEP_N = tuple(range(1, 9))
SWEEP_A = (0.0, 0.5, 1.0, 2.0, 3.7)
SWEEP_T = (0.1, 0.5, 1.0, 2.0)
ORACLE_THRESHOLD = 1e-8


@dataclass
class StudyResult:
    """Tabla producida por un comando, metadatos adicionales y veredicto."""

    table: pd.DataFrame
    meta: Dict = field(default_factory=dict)
    passed: bool = True


class StudyRunner:
    """
    Orquesta los comandos de la CLI.

    Arquitectura:
    - RecurrenceEngine: F_N exacta, identidades y oráculo de Hankel
    - HardEdgeSolver / SoftEdgeSolver: límites de escala
    - WishartSampler: muestreo de referencia
    - ReportGenerator: serialización y figuras
    """

    def __init__(self, engine: RecurrenceEngine, hard_solver: HardEdgeSolver,
                 soft_solver: SoftEdgeSolver, sampler: WishartSampler,
                 reporter: ReportGenerator, verbose: bool = False):
        """
        Inicializa el orquestador.

        Args:
            engine: Motor de recursión
            hard_solver: Solver del borde duro
            soft_solver: Solver del borde suave
            sampler: Muestreador Monte Carlo
            reporter: Generador de tablas y reportes
            verbose: Imprime el progreso en stderr
        """
        self.engine = engine
        self.hard = hard_solver
        self.soft = soft_solver
        self.sampler = sampler
        self.reporter = reporter
        self.verbose = verbose

    def _log(self, message: str):
        if self.verbose:
            print(message, file=sys.stderr)

    def run(self, spec: RunSpec) -> StudyResult:
        """Ejecuta el comando de la especificación y añade el bloque de metadatos."""
        result = getattr(self, f"run_{spec.command}")(spec)
        extra = {"rng": RNG_ID if spec.command == "mc" else None}
        extra.update(result.meta)
        result.meta = self.reporter.build_metadata(spec.to_dict(), spec.precision.describe(), extra)
        return result

    def run_cdf(self, spec: RunSpec) -> StudyResult:
        """Columnas t, F_N, pdf, H_N."""
        rows = []
        modes = set()
        for t in tqdm(spec.t_values, desc="F_N(t)", disable=not self.verbose, file=sys.stderr):
            t = float(t)
            if t == 0:
                pdf = float(spec.N) if spec.a == 0 else 0.0
                rows.append({"t": 0.0, "F_N": 1.0, "pdf": pdf, "H_N": 0.0})
                continue
            result = self.engine.compute_cdf(ModelParams(spec.N, spec.a, t), spec.precision,
                                             with_trace=False)
            modes.add(result.precision_mode)
            pdf = 0.0 if result.underflow else max(0.0, -result.F * result.H / t)
            rows.append({"t": t, "F_N": result.F, "pdf": pdf, "H_N": result.H})
        self._log(f"✅ F_N calculada en {len(rows)} puntos")
        return StudyResult(table=pd.DataFrame(rows, columns=["t", "F_N", "pdf", "H_N"]),
                           meta={"precision_used": sorted(modes)})

    def run_limit(self, spec: RunSpec) -> StudyResult:
        """Columnas x, f, F_inf (Painlevé III o forma cerrada de Bessel)."""
        grid = spec.x_values
        x_max = float(grid[-1])
        if spec.bessel:
            p3 = self.hard.bessel_solution(int(spec.a), x_max, spec.precision)
        else:
            p3 = self.hard.solve_p3(spec.a, x_max)
        f = np.asarray(p3.f_at(grid), dtype=float)
        F_inf = self.hard.limiting_cdf_grid(p3, grid)
        self._log(f"✅ Límite del borde duro ({p3.source}) en {grid.size} puntos")
        table = pd.DataFrame({"x": grid, "f": f, "F_inf": F_inf})
        return StudyResult(table=table, meta={"source": p3.source})

    def run_correction(self, spec: RunSpec) -> StudyResult:
        """Columnas x, F_inf, F_N_corrected, F_N_exact, diff_times_N."""
        grid = spec.x_values
        p3 = self.hard.solve_p3(spec.a, float(grid[-1]))
        rows = []
        for x in grid:
            x = float(x)
            corrected = self.hard.corrected_cdf(p3, spec.N, x)
            exact = self.engine.compute_cdf(ModelParams(spec.N, spec.a, x / spec.N), spec.precision,
                                            with_trace=False).F
            rows.append({
                "x": x,
                "F_inf": corrected["limiting"],
                "F_N_corrected": corrected["additive"],
                "F_N_exact": exact,
                "diff_times_N": spec.N * (exact - corrected["limiting"]),
            })
        columns = ["x", "F_inf", "F_N_corrected", "F_N_exact", "diff_times_N"]
        return StudyResult(table=pd.DataFrame(rows, columns=columns))

    def run_softedge(self, spec: RunSpec) -> StudyResult:
        """Columnas x, F2, h0_tilde, h1_tilde."""
        grid = spec.x_values
        p2 = self.soft.solve_p2_hastings_mcleod()
        p2 = self.soft.solve_h1_correction(p2, amplitude=spec.amplitude)
        table = pd.DataFrame({
            "x": grid,
            "F2": self.soft.tw2_cdf_grid(p2, grid),
            "h0_tilde": np.asarray(self.soft.h0_tilde(p2, grid), dtype=float),
            "h1_tilde": np.asarray(p2.h1_at(grid)[0], dtype=float),
        })
        meta = {"h1_amplitude": spec.amplitude, "h1_convention": H1_CONVENTION,
                "h1_status": "amplitud conjeturada"}
        if spec.ratio is not None:
            params = soft_edge_params(spec.ratio)
            meta["soft_edge"] = {"ratio": params.ratio, "x_minus": params.x_minus,
                                 "x_plus": params.x_plus, "m": params.m}
        return StudyResult(table=table, meta=meta)

    def run_mc(self, spec: RunSpec) -> StudyResult:
        """Muestreo, volcado opcional y diagnóstico de la corrección 1/N."""
        cfg = SamplerConfig(N=spec.N, M=spec.M, n_samples=spec.n_samples, seed=spec.seed,
                            n_streams=spec.n_streams, method=spec.method)
        samples = self.sampler.draw(cfg)
        if spec.dump_path:
            if spec.dump_path.endswith(".csv"):
                write_sample_csv(spec.dump_path, samples)
            else:
                write_sample_dump(spec.dump_path, samples, cfg)
            self._log(f"✅ Muestras guardadas en {spec.dump_path}")

        emp = EmpiricalCDF.from_samples(samples)
        exact = self.engine.tabulate_survival(spec.N, spec.a, float(emp.values[-1]),
                                              ctx=spec.precision)
        ks = ks_distance(emp, exact)
        grid = spec.x_values
        p3 = self.hard.solve_p3(spec.a, float(grid[-1]))
        table = correction_diagnostic(emp, spec.N, spec.a, p3, grid, self.hard)
        meta = {"ks_distance": ks, "n_samples": emp.n}
        self._log(f"📊 Distancia KS = {ks:.5f} con {emp.n} muestras")

        if spec.report_dir:
            reporter = ReportGenerator(reports_dir=spec.report_dir)
            full_meta = reporter.build_metadata(spec.to_dict(), spec.precision.describe(),
                                                {"rng": RNG_ID, **meta})
            reporter.plot_correction_diagnostic(table, spec.N, spec.a)
            reporter.write_summary(table, full_meta)
        return StudyResult(table=table, meta=meta)

    def _oracle_row(self, params: ModelParams, ctx: PrecisionContext,
                    oracle_ctx: PrecisionContext) -> Dict:
        name = f"hankel_oracle[N={params.N},a={params.a:g},t={params.t:g}]"
        value = self.engine.compute_cdf(params, ctx, with_trace=False).F
        try:
            oracle = self.engine.hankel_oracle_cdf(params, oracle_ctx)
        except ConditioningError as e:
            print(f"⚠️  {name}: {e}", file=sys.stderr)
            return {"check": name, "residual": float("nan"), "threshold": ORACLE_THRESHOLD,
                    "passed": False}
        residual = abs(value - oracle) / max(abs(oracle), 1e-300)
        return {"check": name, "residual": residual, "threshold": ORACLE_THRESHOLD,
                "passed": bool(residual <= ORACLE_THRESHOLD)}

    def generate_sweep_combinations(self) -> List[Tuple[int, float, float]]:
        """Malla del barrido de equivalencia con el oráculo (N, a, t)."""
        return list(itertools.product(SWEEP_N, SWEEP_A, SWEEP_T))

    def run_verify(self, spec: RunSpec) -> StudyResult:
        """Identidades algebraicas, residuos diferenciales y oráculo de Hankel."""
        ctx = spec.precision
        oracle_ctx = ctx if ctx.is_extended else PrecisionContext.extended()
        columns = ["check", "residual", "threshold", "passed"]

        if spec.sweep:
            combinations = self.generate_sweep_combinations()
            rows = [self._oracle_row(ModelParams(N, a, t), ctx, oracle_ctx)
                    for N, a, t in tqdm(combinations, desc="Barrido del oráculo",
                                        disable=not self.verbose, file=sys.stderr)]
            table = pd.DataFrame(rows, columns=columns)
        else:
            params = ModelParams(spec.N, spec.a, spec.t)
            trace = self.engine.build_trace(params, ctx)
            report = self.engine.validate_identities(trace, ctx)
            table = report.to_dataframe()
            if params.N <= 30:
                table = pd.concat([table, pd.DataFrame([self._oracle_row(params, ctx, oracle_ctx)],
                                                       columns=columns)], ignore_index=True)

        table["passed"] = table["passed"].astype(bool)
        passed = bool(table["passed"].all())
        failed = int((~table["passed"]).sum())
        if passed:
            print(f"✅ Verificación superada ({len(table)} comprobaciones)", file=sys.stderr)
        else:
            print(f"❌ Verificación fallida: {failed} de {len(table)} comprobaciones", file=sys.stderr)
        return StudyResult(table=table, meta={"checks": len(table), "failed": failed}, passed=passed)
