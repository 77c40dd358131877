"""
Punto de entrada de línea de comandos.

Uso:
    wshart cdf --N 50 --a 0 --t-grid 0:0.1:41
    wshart limit --a 1 --x-grid 0:10:2001 [--bessel]
    wshart correction --N 200 --a 1 --x-grid 0.5:3:6
    wshart softedge --x-grid -8:8:321 [--ratio 3 --N 200] [--amplitude 1]
    wshart mc --N 50 --a 1 --samples 300000 --seed 7 --streams 8 [--dump out.bin]
    wshart verify --N 6 --a 2 --t 0.4 | wshart verify --sweep

Códigos de salida: 0 éxito, 1 fallo de validación o error numérico, 2 error de uso.
"""

import argparse
import sys
from typing import List, Optional

from . import __version__
from .montecarlo import SAMPLING_METHODS, WishartSampler
from .op_engine import RecurrenceEngine
from .painleve import HardEdgeSolver, SoftEdgeSolver
from .report_generator import ReportGenerator
from .run_spec import COMMANDS, OUTPUT_FORMATS, RunSpec, precision_from_flags
from .study_runner import StudyRunner
from .utils.errors import UsageError, WishartError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser que convierte los errores en UsageError en lugar de salir."""

    def error(self, message):
        raise UsageError(self.prog, message)


def build_parser() -> argparse.ArgumentParser:
    """Construye el parser con un subcomando por operación."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", choices=("standard", "extended"), default=None,
                        help="Precisión de cálculo (por defecto WSHART_PRECISION o standard)")
    common.add_argument("--digits", type=int, default=None, help="Dígitos en precisión extendida")
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default="csv",
                        help="Formato de salida")
    common.add_argument("--out", dest="output_path", default=None,
                        help="Archivo de salida (por defecto stdout)")
    common.add_argument("--verbose", action="store_true", help="Mensajes de progreso en stderr")

    parser = _ArgumentParser(prog="wshart",
                             description="Distribución del autovalor mínimo de matrices de Wishart complejas")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)

    cdf = subparsers.add_parser("cdf", parents=[common], help="F_N(t), densidad y H_N exactas")
    cdf.add_argument("--N", type=int, required=True, help="Tamaño de matriz")
    cdf.add_argument("--a", type=float, required=True, help="Exponente de Laguerre a = M - N")
    cdf.add_argument("--t-grid", required=True, help="Malla start:stop:count")

    limit = subparsers.add_parser("limit", parents=[common], help="f(x) y F_∞(x) del borde duro")
    limit.add_argument("--a", type=float, required=True)
    limit.add_argument("--x-grid", default=None)
    limit.add_argument("--bessel", action="store_true", help="Forma cerrada de Bessel (a entero)")

    correction = subparsers.add_parser("correction", parents=[common], help="Corrección 1/N del borde duro")
    correction.add_argument("--N", type=int, required=True)
    correction.add_argument("--a", type=float, required=True)
    correction.add_argument("--x-grid", default=None)

    softedge = subparsers.add_parser("softedge", parents=[common], help="F₂, h̃₀ y h̃₁ del borde suave")
    softedge.add_argument("--x-grid", default=None)
    softedge.add_argument("--ratio", type=float, default=None, help="Cociente a/N")
    softedge.add_argument("--N", type=int, default=None)
    softedge.add_argument("--amplitude", type=float, default=1.0,
                          help="Amplitud conjeturada A de la corrección h̃₁")

    mc = subparsers.add_parser("mc", parents=[common], help="Muestreo Monte Carlo y diagnósticos")
    mc.add_argument("--N", type=int, required=True)
    mc.add_argument("--a", type=float, required=True)
    mc.add_argument("--samples", dest="n_samples", type=int, default=300000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--streams", dest="n_streams", type=int, default=1)
    mc.add_argument("--method", choices=SAMPLING_METHODS, default="householder")
    mc.add_argument("--x-grid", default=None)
    mc.add_argument("--dump", dest="dump_path", default=None,
                    help="Volcado de muestras (binario, o CSV si termina en .csv)")
    mc.add_argument("--report-dir", default=None, help="Directorio para figura y resumen")

    verify = subparsers.add_parser("verify", parents=[common], help="Identidades y oráculos")
    verify.add_argument("--N", type=int, default=None)
    verify.add_argument("--a", type=float, default=None)
    verify.add_argument("--t", type=float, default=None)
    verify.add_argument("--sweep", action="store_true", help="Barrido del oráculo de Hankel")
    return parser


def spec_from_args(args: argparse.Namespace, environ=None) -> RunSpec:
    """Construye y valida la RunSpec a partir de los argumentos."""
    if args.command not in COMMANDS:
        raise UsageError("command", f"indique un comando: {', '.join(COMMANDS)}")
    values = vars(args)
    precision = precision_from_flags(values.pop("precision"), values.pop("digits"), environ)
    values.pop("verbose")
    return RunSpec(precision=precision, **values)


def run(spec: RunSpec, verbose: bool = False) -> int:
    """
    Ejecuta una RunSpec y escribe la tabla resultante.

    Returns:
        Código de salida
    """
    reporter = ReportGenerator()
    runner = StudyRunner(
        engine=RecurrenceEngine(verbose=verbose),
        hard_solver=HardEdgeSolver(verbose=verbose),
        soft_solver=SoftEdgeSolver(verbose=verbose),
        sampler=WishartSampler(verbose=verbose),
        reporter=reporter,
        verbose=verbose,
    )
    result = runner.run(spec)
    path = reporter.write_table(result.table, result.meta, spec.output_format, spec.output_path)
    if path and verbose:
        print(f"✅ Tabla escrita en {path}", file=sys.stderr)
    return EXIT_OK if result.passed else EXIT_FAILURE


def main(argv: Optional[List[str]] = None, environ=None) -> int:
    """Punto de entrada: devuelve el código de salida en lugar de terminar el proceso."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        verbose = bool(getattr(args, "verbose", False))
        spec = spec_from_args(args, environ)
    except UsageError as e:
        print(f"❌ Error de uso: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK
    try:
        return run(spec, verbose=verbose)
    except UsageError as e:
        print(f"❌ Error de uso: {e}", file=sys.stderr)
        return EXIT_USAGE
    except WishartError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
