"""
Suite de Tests Principal para wishart-smallest-eigenvalue
=========================================================

Ejecuta todos los tests del paquete agrupados por componente.

Categorías:
- Núcleo exacto: funciones especiales, precisión y recursión de polinomios ortogonales
- Límites de escala: Painlevé III/II y ensamblado de los bordes duro y suave
- Monte Carlo: muestreador, distribución empírica y diagnósticos
- CLI y reportes: especificación, orquestador, serialización y línea de comandos

Uso:
    python -m pytest tests/
    python -m pytest tests/ -m "not slow"
    python tests/run_all_tests.py [all|1-4]
"""

import unittest
import sys
import os

# Agregar el directorio principal al path
current_dir = os.path.dirname(os.path.abspath(__file__))
project_dir = os.path.dirname(current_dir)
if project_dir not in sys.path:
    sys.path.insert(0, project_dir)

from tests.test_special_functions import TestIncompleteGamma, TestBessel, TestAiry
from tests.test_precision import TestPrecisionContext, TestPrecisionFromFlags
from tests.test_op_engine import (TestModelParams, TestRecurrenceEngine, TestPrecisionEscalation,
                                  TestHankelOracle, TestIdentities)
from tests.test_painleve import TestODESolverConfig, TestP5Residual, TestHardEdgeSolver, TestSoftEdgeSolver
from tests.test_limits import (TestMarchenkoPastur, TestSoftEdgeScaling, TestSoftEdgeCdf,
                               TestHardEdgeExpansion, TestClassifyRegime)
from tests.test_montecarlo import (TestSamplerConfig, TestLinearAlgebra, TestWishartSampler,
                                   TestEmpiricalCDF, TestCorrectionDiagnostic, TestSampleDump)
from tests.test_run_spec import TestParseGrid, TestRunSpec
from tests.test_report_generator import TestReportGenerator
from tests.test_study_runner import TestStudyRunnerWithMocks, TestStudyRunnerIntegration
from tests.test_cli import TestCommandLine

CATEGORIES = {
    '1': ('Núcleo exacto', [TestIncompleteGamma, TestBessel, TestAiry, TestPrecisionContext,
                            TestPrecisionFromFlags, TestModelParams, TestRecurrenceEngine,
                            TestPrecisionEscalation, TestHankelOracle, TestIdentities]),
    '2': ('Límites de escala', [TestODESolverConfig, TestP5Residual, TestHardEdgeSolver,
                                TestSoftEdgeSolver, TestMarchenkoPastur, TestSoftEdgeScaling,
                                TestSoftEdgeCdf, TestHardEdgeExpansion, TestClassifyRegime]),
    '3': ('Monte Carlo', [TestSamplerConfig, TestLinearAlgebra, TestWishartSampler, TestEmpiricalCDF,
                          TestCorrectionDiagnostic, TestSampleDump]),
    '4': ('CLI y reportes', [TestParseGrid, TestRunSpec, TestReportGenerator, TestStudyRunnerWithMocks,
                             TestStudyRunnerIntegration, TestCommandLine]),
}


def build_suite(test_classes):
    """
    Crea una suite con las clases indicadas.

    Args:
        test_classes: Lista de clases de test

    Returns:
        unittest.TestSuite: Suite de tests
    """
    loader = unittest.TestLoader()
    suite = unittest.TestSuite()
    for test_class in test_classes:
        suite.addTests(loader.loadTestsFromTestCase(test_class))
    return suite


def run_test_category(category_name, test_classes):
    """
    Ejecuta una categoría específica de tests.

    Returns:
        unittest.TestResult: Resultado de los tests
    """
    print(f"\n{'='*60}")
    print(f"🧪 EJECUTANDO TESTS: {category_name}")
    print(f"{'='*60}")
    runner = unittest.TextTestRunner(verbosity=2)
    return runner.run(build_suite(test_classes))


def run_all_tests():
    """
    Ejecuta todos los tests del proyecto.

    Returns:
        bool: True si todos los tests pasaron
    """
    print("🚀 INICIANDO SUITE COMPLETA DE TESTS")
    print("=" * 80)

    all_classes = [cls for _, classes in CATEGORIES.values() for cls in classes]
    result = unittest.TextTestRunner(verbosity=2).run(build_suite(all_classes))

    print("\n" + "=" * 80)
    print("📋 RESUMEN FINAL DE TESTS")
    print("=" * 80)
    print(f"Tests ejecutados: {result.testsRun}")
    print(f"Exitosos: {result.testsRun - len(result.failures) - len(result.errors)}")
    print(f"Fallas: {len(result.failures)}")
    print(f"Errores: {len(result.errors)}")

    if result.failures:
        print(f"\n❌ FALLAS DETECTADAS ({len(result.failures)}):")
        for test, error in result.failures:
            print(f"   - {test}: {error.split('AssertionError:')[-1].strip()}")

    if result.errors:
        print(f"\n🚨 ERRORES DETECTADOS ({len(result.errors)}):")
        for test, error in result.errors:
            print(f"   - {test}: {error.strip().splitlines()[-1]}")

    success = result.wasSuccessful()
    if success:
        print("\n✅ TODOS LOS TESTS PASARON EXITOSAMENTE!")
    else:
        print("\n❌ ALGUNOS TESTS FALLARON. Revisar detalles arriba.")
    print("=" * 80)
    return success


if __name__ == '__main__':
    arg = sys.argv[1].lower() if len(sys.argv) > 1 else 'all'
    if arg == 'all':
        success = run_all_tests()
    elif arg in CATEGORIES:
        category_name, test_classes = CATEGORIES[arg]
        success = run_test_category(category_name, test_classes).wasSuccessful()
    else:
        print("❌ Argumento inválido. Uso: python run_all_tests.py [all|1-4]")
        success = False
    sys.exit(0 if success else 1)
