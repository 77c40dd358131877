"""
Jerarquía de excepciones del sistema.

Todas las excepciones numéricas heredan de WishartError para que la CLI pueda
capturarlas en un único punto y traducirlas a códigos de salida.
"""

from typing import Dict, Optional


class WishartError(Exception):
    """Error base del paquete."""


class DomainError(WishartError, ValueError):
    """Parámetro fuera del dominio matemático admitido."""


class PrecisionUnattainableError(WishartError):
    """No se pudo certificar la precisión solicitada."""


class DegenerateRecursionError(WishartError):
    """La recursión produjo R_{k+1} no positivo o por debajo del umbral."""

    def __init__(self, message: str, k: int):
        super().__init__(message)
        self.k = k


class ConditioningError(WishartError):
    """Determinante con menos dígitos certificados que el mínimo exigido."""

    def __init__(self, message: str, certified_digits: float):
        super().__init__(message)
        self.certified_digits = certified_digits


class BranchLossError(WishartError):
    """El radicando de Painlevé III se volvió negativo más allá de la tolerancia."""

    def __init__(self, message: str, x: float):
        super().__init__(message)
        self.x = x


class ODEIntegrationError(WishartError):
    """Fallo del integrador (paso mínimo, no convergencia del BVP)."""

    def __init__(self, message: str, diagnostics: Optional[Dict] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class GridExceededError(WishartError, ValueError):
    """Evaluación fuera de la malla de una solución."""


class CrossoverRegimeError(WishartError):
    """Régimen intermedio a ~ N^{1/3}, sin límite de escala disponible."""


class UsageError(WishartError):
    """Error de uso de la CLI asociado a una opción concreta."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag
