"""
Distribución del autovalor mínimo de matrices de Wishart complejas

Cálculo exacto de F_N(t) por recursión de polinomios ortogonales, límites de
escala de Painlevé en los bordes duro y suave con sus correcciones 1/N, y
muestreo Monte Carlo de referencia.
"""

__version__ = "1.0.0"
__author__ = "GJoe2"
__email__ = "tu-email@ejemplo.com"
__license__ = "Apache 2.0"

# Importaciones principales para facilitar el uso
from .op_engine import ModelParams, RecurrenceEngine
from .painleve import HardEdgeSolver, ODESolverConfig, SoftEdgeSolver
from .montecarlo import SamplerConfig, WishartSampler
from .report_generator import ReportGenerator
from .study_runner import StudyRunner
from .utils.precision import PrecisionContext

__all__ = [
    "ModelParams",
    "RecurrenceEngine",
    "HardEdgeSolver",
    "SoftEdgeSolver",
    "ODESolverConfig",
    "SamplerConfig",
    "WishartSampler",
    "ReportGenerator",
    "StudyRunner",
    "PrecisionContext",
]
