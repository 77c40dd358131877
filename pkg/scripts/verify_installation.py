#!/usr/bin/env python3
"""
Script para verificar que wishart-smallest-eigenvalue esté correctamente instalado
"""

import math
import platform
import sys


def test_imports():
    """Verificar que todas las importaciones funcionen"""
    try:
        print("🔍 Verificando importaciones...")

        version = sys.version_info
        if version < (3, 12):
            print(f"❌ Python {version.major}.{version.minor} es muy antiguo. Se requiere 3.12+")
            return False
        print(f"✅ Python {version.major}.{version.minor}.{version.micro}")

        import numpy, scipy, mpmath, pandas  # noqa: F401
        print("✅ numpy, scipy, mpmath y pandas importados correctamente")

        try:
            from wishart_smallest_eigenvalue import RecurrenceEngine  # noqa: F401
            print("✅ Paquete instalado")
        except ImportError:
            from src.op_engine import RecurrenceEngine  # noqa: F401
            print("✅ Usando código fuente")

        print("\n🎉 ¡Instalación exitosa! Todos los componentes se importan correctamente.")
        return True

    except ImportError as e:
        print(f"❌ Error de importación: {e}")
        print("\n💡 Posibles soluciones:")
        print("   1. Verificar que Python >= 3.12")
        print("   2. Reinstalar: pip install --force-reinstall -e .")
        return False


def test_basic_functionality():
    """Comprueba F_N(t) = e^{-t} para N = 1, a = 0."""
    try:
        print("\n🔧 Probando funcionalidad básica...")
        try:
            from wishart_smallest_eigenvalue import ModelParams, RecurrenceEngine
        except ImportError:
            from src.op_engine import ModelParams, RecurrenceEngine

        value = RecurrenceEngine().compute_cdf(ModelParams(1, 0.0, 0.5)).F
        if abs(value - math.exp(-0.5)) > 1e-12:
            print(f"❌ F_1(0.5) = {value}, se esperaba {math.exp(-0.5)}")
            return False
        print("✅ Recursión exacta verificada")
        return True

    except Exception as e:
        print(f"❌ Error en test de funcionalidad: {e}")
        return False


def show_system_info():
    """Mostrar información del sistema útil para debugging"""
    print("\n📋 Información del Sistema:")
    print(f"   Sistema: {platform.system()} {platform.release()}")
    print(f"   Python: {sys.version}")
    print(f"   Ejecutable: {sys.executable}")

    for name in ("numpy", "scipy", "mpmath", "pandas", "matplotlib"):
        try:
            module = __import__(name)
            print(f"   {name}: {module.__version__}")
        except ImportError:
            print(f"   {name}: No instalado")


if __name__ == "__main__":
    print("🚀 Verificando instalación de wishart-smallest-eigenvalue\n")

    show_system_info()

    if not test_imports():
        print("\n🔧 Por favor corrige los problemas de importación primero.")
        print("\n📚 Consulta la documentación: docs/installation.md")
        sys.exit(1)
    if not test_basic_functionality():
        print("\n⚠️  Importaciones OK pero hay problemas de funcionalidad.")
        sys.exit(1)
    print("\n✨ Todo perfecto! El sistema está listo para usar.")
    sys.exit(0)
