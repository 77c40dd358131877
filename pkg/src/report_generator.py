"""
Serialización de tablas de resultados (CSV con cabecera de metadatos o JSON),
lectura de vuelta y figura y resumen del diagnóstico Monte Carlo.
"""

import io
import json
import math
import os
import sys
from typing import Dict, Optional, TextIO

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
import seaborn as sns

from . import __version__


class ReportGenerator:
    """
    Clase para generar tablas y reportes de los cálculos.
    Escribe CSV/JSON con bloque de metadatos y las figuras de comparación
    Monte Carlo frente a la teoría.
    """

    def __init__(self, reports_dir: Optional[str] = None):
        """
        Inicializa el generador de reportes.

        Args:
            reports_dir: Directorio donde se guardarán figuras y resúmenes
        """
        self.reports_dir = reports_dir
        if reports_dir is not None:
            self.ensure_reports_dir()

        # Configuración de gráficos
        sns.set_theme(style="whitegrid")
        sns.set_palette("husl")

    def ensure_reports_dir(self):
        """Asegura que el directorio de reportes existe."""
        if self.reports_dir and not os.path.exists(self.reports_dir):
            os.makedirs(self.reports_dir)

    @staticmethod
    def build_metadata(spec_echo: Dict, precision: Dict, extra: Optional[Dict] = None) -> Dict:
        """
        Bloque de metadatos común a todas las salidas (sin marcas de tiempo).

        Args:
            spec_echo: Eco de la RunSpec
            precision: Descripción del contexto de precisión
            extra: Campos adicionales del comando (p. ej. identificador del RNG)
        """
        meta = {"version": __version__, "spec": spec_echo, "precision": precision}
        if extra:
            meta.update(extra)
        return meta

    @staticmethod
    def _json_safe(value):
        if isinstance(value, (np.bool_, bool)):
            return bool(value)
        if isinstance(value, (np.integer,)):
            return int(value)
        if isinstance(value, (float, np.floating)):
            value = float(value)
            return None if math.isnan(value) or math.isinf(value) else value
        if isinstance(value, dict):
            return {k: ReportGenerator._json_safe(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [ReportGenerator._json_safe(v) for v in value]
        return value

    def render_table(self, df: pd.DataFrame, meta: Dict, fmt: str = "csv") -> str:
        """
        Serializa una tabla con su bloque de metadatos.

        CSV: primera línea '# meta: {json}', cabecera y flotantes con 17 cifras.
        JSON: {"meta": ..., "columns": [...], "data": [[...]]}, claves ordenadas.
        """
        safe_meta = self._json_safe(meta)
        if fmt == "csv":
            buffer = io.StringIO()
            buffer.write("# meta: " + json.dumps(safe_meta, sort_keys=True) + "\n")
            df.to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
            return buffer.getvalue()
        if fmt == "json":
            rows = [[self._json_safe(v) for v in row] for row in df.itertuples(index=False)]
            document = {"meta": safe_meta, "columns": list(df.columns), "data": rows}
            return json.dumps(document, indent=2, sort_keys=True) + "\n"
        raise ValueError(f"Formato desconocido: {fmt!r}")

    def write_table(self, df: pd.DataFrame, meta: Dict, fmt: str = "csv",
                    path: Optional[str] = None, stream: Optional[TextIO] = None) -> Optional[str]:
        """
        Escribe la tabla en un archivo o en stdout.

        Returns:
            Ruta escrita, o None si se escribió en el flujo
        """
        text = self.render_table(df, meta, fmt)
        if path is None:
            (stream or sys.stdout).write(text)
            return None
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        return path

    @staticmethod
    def load_table(path: str) -> Dict:
        """
        Carga una tabla CSV o JSON escrita por write_table.

        Returns:
            Diccionario con 'meta' y 'table' (DataFrame)
        """
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
        if text.startswith("# meta: "):
            header, body = text.split("\n", 1)
            meta = json.loads(header[len("# meta: "):])
            return {"meta": meta, "table": pd.read_csv(io.StringIO(body), float_precision="round_trip")}
        document = json.loads(text)
        table = pd.DataFrame(document["data"], columns=document["columns"])
        return {"meta": document["meta"], "table": table}

    def plot_correction_diagnostic(self, table: pd.DataFrame, N: int, a: float,
                                   save_plots: bool = True) -> Dict:
        """
        Figura de comparación Monte Carlo.

        Izquierda: log F̂_N(x/N) frente a log F_∞(x).
        Derecha: N·log(F̂_N/F_∞) con barras de error frente a (a/2)f(x).

        Returns:
            Diccionario con la ruta de la figura (si se guardó)
        """
        usable = table[~table["insufficient"]]
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 5))

        ax1.plot(table["x"], np.log(table["F_inf"]), "-", label=r"$\log F_\infty(x)$")
        ax1.plot(usable["x"], np.log(usable["empirical_survival"]), "o",
                 label=r"$\log \hat F_N(x/N)$")
        ax1.set_xlabel("x")
        ax1.set_ylabel("log F")
        ax1.set_title(f"Supervivencia (N={N}, a={a:g})")
        ax1.legend()

        ax2.errorbar(usable["x"], usable["diagnostic"], yerr=usable["std_error"], fmt="o",
                     capsize=3, label=r"$N \log(\hat F_N / F_\infty)$")
        ax2.plot(table["x"], table["prediction"], "-", label=r"$(a/2) f(x)$")
        ax2.set_xlabel("x")
        ax2.set_title("Corrección 1/N")
        ax2.legend()
        fig.tight_layout()

        report = {}
        if save_plots and self.reports_dir:
            path = os.path.join(self.reports_dir, f"correction_N{N}_a{a:g}.png")
            fig.savefig(path, dpi=150, bbox_inches="tight")
            report["figure"] = path
            print(f"📊 Figura guardada en {path}", file=sys.stderr)
        plt.close(fig)
        return report

    def write_summary(self, table: pd.DataFrame, meta: Dict, filename: str = "summary.txt") -> str:
        """Crea un resumen en texto plano del diagnóstico Monte Carlo."""
        self.ensure_reports_dir()
        path = os.path.join(self.reports_dir, filename)
        usable = table[~table["insufficient"]]
        with open(path, "w", encoding="utf-8") as f:
            f.write("RESUMEN - AUTOVALOR MÍNIMO DE WISHART\n")
            f.write("=" * 50 + "\n\n")
            spec = meta.get("spec", {})
            f.write(f"N = {spec.get('N')}, a = {spec.get('a')}, muestras = {spec.get('samples')}\n")
            f.write(f"Generador: {meta.get('rng')}\n")
            if "ks_distance" in meta:
                f.write(f"Distancia KS frente a F_N exacta: {meta['ks_distance']:.6f}\n")
            f.write(f"Puntos utilizables: {len(usable)} de {len(table)}\n\n")
            if not usable.empty:
                z = (usable["diagnostic"] - usable["prediction"]) / usable["std_error"]
                f.write("DIAGNÓSTICO DE LA CORRECCIÓN 1/N:\n")
                for (_, row), score in zip(usable.iterrows(), z):
                    f.write(f"- x = {row['x']:.4f}: {row['diagnostic']:.5f} ± {row['std_error']:.5f}"
                            f" (predicción {row['prediction']:.5f}, z = {score:.2f})\n")
        return path
