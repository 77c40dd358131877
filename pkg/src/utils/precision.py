"""
Contexto de precisión y aritméticas intercambiables.

La precisión estándar usa floats de IEEE-754; la extendida usa una instancia
propia de ``mpmath.MPContext`` por llamada, de modo que dos hilos con distinta
precisión nunca comparten estado.
"""

import math
import os
import sys
from dataclasses import dataclass, replace
from typing import Mapping, Optional

import mpmath

from .errors import DomainError

STANDARD = "standard"
EXTENDED = "extended"
PRECISION_MODES = (STANDARD, EXTENDED)

DEFAULT_EXTENDED_DIGITS = 32
MAX_SUPPORTED_DIGITS = 300


class FloatArithmetic:
    """
    Aritmética de doble precisión con la interfaz mínima de ``mpmath.MPContext``.

    Sólo expone lo que usan los núcleos numéricos: constructor ``mpf``,
    funciones elementales y ``loggamma``.
    """

    dps = 15
    eps = sys.float_info.epsilon
    pi = math.pi
    inf = math.inf

    @staticmethod
    def mpf(x) -> float:
        return float(x)

    log = staticmethod(math.log)
    exp = staticmethod(math.exp)
    sqrt = staticmethod(math.sqrt)
    log1p = staticmethod(math.log1p)
    expm1 = staticmethod(math.expm1)
    fabs = staticmethod(math.fabs)
    loggamma = staticmethod(math.lgamma)
    fsum = staticmethod(math.fsum)


@dataclass(frozen=True)
class PrecisionContext:
    """
    Configuración de precisión de un cálculo.

    Args:
        mode: 'standard' (doble) o 'extended' (mpmath)
        digits: dígitos decimales objetivo (>= 15; en modo estándar siempre 15)
        tolerance: tolerancia de truncamiento de series, en (0, 1e-10]
        max_digits: tope de dígitos al escalar automáticamente
    """

    mode: str = STANDARD
    digits: int = 15
    tolerance: float = 1e-15
    max_digits: int = 256

    def __post_init__(self):
        if self.mode not in PRECISION_MODES:
            raise DomainError(f"Modo de precisión desconocido: {self.mode!r}")
        if int(self.digits) != self.digits or self.digits < 15:
            raise DomainError(f"digits debe ser un entero >= 15, recibido {self.digits}")
        if not 0.0 < self.tolerance <= 1e-10:
            raise DomainError(f"tolerance debe estar en (0, 1e-10], recibido {self.tolerance}")
        if not self.digits <= self.max_digits <= MAX_SUPPORTED_DIGITS:
            raise DomainError(
                f"max_digits debe estar entre digits ({self.digits}) y {MAX_SUPPORTED_DIGITS}"
            )
        if self.mode == STANDARD and self.digits != 15:
            object.__setattr__(self, "digits", 15)

    @classmethod
    def standard(cls, tolerance: float = 1e-15) -> "PrecisionContext":
        return cls(mode=STANDARD, digits=15, tolerance=tolerance)

    @classmethod
    def extended(cls, digits: int = DEFAULT_EXTENDED_DIGITS, max_digits: int = 256) -> "PrecisionContext":
        return cls(mode=EXTENDED, digits=digits, tolerance=1e-15, max_digits=max(max_digits, digits))

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "PrecisionContext":
        """
        Construye el contexto a partir de WSHART_PRECISION y WSHART_DIGITS.

        Returns:
            Contexto estándar si la variable no está definida
        """
        environ = os.environ if environ is None else environ
        mode = environ.get("WSHART_PRECISION", STANDARD).strip().lower() or STANDARD
        if mode not in PRECISION_MODES:
            raise DomainError(f"WSHART_PRECISION inválido: {mode!r} (use standard|extended)")
        if mode == STANDARD:
            return cls.standard()
        digits = int(environ.get("WSHART_DIGITS", DEFAULT_EXTENDED_DIGITS))
        return cls.extended(digits=digits)

    @property
    def is_extended(self) -> bool:
        return self.mode == EXTENDED

    @property
    def series_tolerance(self) -> float:
        """Tolerancia relativa efectiva para truncar series y fracciones continuas."""
        if self.is_extended:
            return min(self.tolerance, 10.0 ** (-self.digits))
        return self.tolerance

    def arithmetic(self):
        """Devuelve una aritmética nueva (FloatArithmetic o MPContext) para este contexto."""
        if not self.is_extended:
            return FloatArithmetic()
        ctx = mpmath.MPContext()
        ctx.dps = self.digits
        return ctx

    def with_digits(self, digits: int) -> "PrecisionContext":
        """Copia en modo extendido con otros dígitos."""
        return replace(self, mode=EXTENDED, digits=int(digits),
                       max_digits=max(self.max_digits, int(digits)))

    def escalated(self) -> "PrecisionContext":
        """Contexto extendido al que se escala desde el modo estándar."""
        if self.is_extended:
            return self
        return replace(self, mode=EXTENDED, digits=DEFAULT_EXTENDED_DIGITS)

    def describe(self) -> dict:
        return {"mode": self.mode, "digits": self.digits, "tolerance": self.tolerance}
