"""
Utilidades numéricas compartidas
================================

Módulos disponibles:
- errors: Jerarquía de excepciones del paquete
- precision: Contexto de precisión estándar/extendida
- special_functions: Gamma incompleta, Bessel y auxiliares de Laguerre
"""

from .errors import (
    BranchLossError,
    ConditioningError,
    CrossoverRegimeError,
    DegenerateRecursionError,
    DomainError,
    GridExceededError,
    ODEIntegrationError,
    PrecisionUnattainableError,
    UsageError,
    WishartError,
)
from .precision import PrecisionContext

__all__ = [
    'WishartError',
    'DomainError',
    'PrecisionUnattainableError',
    'DegenerateRecursionError',
    'ConditioningError',
    'BranchLossError',
    'ODEIntegrationError',
    'GridExceededError',
    'CrossoverRegimeError',
    'UsageError',
    'PrecisionContext',
]
