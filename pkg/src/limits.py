"""
Contabilidad de los límites de escala: densidad de Marchenko-Pastur, constantes
y cambios de variable del borde suave, coeficientes de la expansión del borde
duro y ensamblado de la CDF del borde suave.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from scipy.integrate import quad

from .painleve import PIIISolution, PIISolution, SoftEdgeSolver
from .utils.errors import CrossoverRegimeError, DomainError, GridExceededError

HARD_EDGE_FACTOR = 1.0
SOFT_EDGE_FACTOR = 4.0


@dataclass(frozen=True)
class SoftEdgeParams:
    """
    Constantes del borde suave para el cociente ratio = a/N.

    x_∓ = (√(1+ratio) ∓ 1)², m = (1+ratio)^{1/6} / (√(1+ratio) - 1)^{4/3}.
    """

    ratio: float
    x_minus: float
    x_plus: float
    m: float

    @property
    def c(self) -> float:
        """Cociente N/M = 1/(1+ratio)."""
        return 1.0 / (1.0 + self.ratio)


def mp_density(x, c: float):
    """
    Densidad de Marchenko-Pastur √((x-x₋)(x₊-x))/(2πx) en [x₋, x₊], cero fuera.

    Args:
        x: Punto o arreglo de puntos
        c: Cociente N/M en (0, 1]

    Returns:
        Densidad (mismo formato que x)
    """
    if not 0 < c <= 1:
        raise DomainError(f"c debe estar en (0, 1], recibido {c}")
    x_minus = (c ** -0.5 - 1) ** 2
    x_plus = (c ** -0.5 + 1) ** 2
    values = np.asarray(x, dtype=float)
    inside = (values > x_minus) & (values < x_plus) & (values > 0)
    with np.errstate(invalid="ignore", divide="ignore"):
        density = np.where(
            inside,
            np.sqrt(np.abs((values - x_minus) * (x_plus - values))) / (2 * np.pi * values),
            0.0,
        )
    return float(density) if density.ndim == 0 else density


def soft_edge_params(ratio: float) -> SoftEdgeParams:
    """Constantes x₋, x₊ y m para ratio > 0."""
    if not ratio > 0:
        raise DomainError(
            f"ratio debe ser > 0 (recibido {ratio}); el régimen de borde duro usa Painlevé III"
        )
    root = math.sqrt(1.0 + ratio)
    return SoftEdgeParams(
        ratio=float(ratio),
        x_minus=(root - 1.0) ** 2,
        x_plus=(root + 1.0) ** 2,
        m=(1.0 + ratio) ** (1.0 / 6.0) / (root - 1.0) ** (4.0 / 3.0),
    )


def soft_edge_coordinate(N: int, params: SoftEdgeParams, t: float) -> float:
    """Variable de escala x = m(N x₋ - t) / N^{1/3}."""
    if N < 1:
        raise DomainError(f"N debe ser >= 1, recibido {N}")
    return params.m * (N * params.x_minus - t) / N ** (1.0 / 3.0)


def soft_edge_time(N: int, params: SoftEdgeParams, x: float) -> float:
    """Inversa t(x) = N x₋ - x N^{1/3} / m (ubicación de λ_min)."""
    if N < 1:
        raise DomainError(f"N debe ser >= 1, recibido {N}")
    return N * params.x_minus - x * N ** (1.0 / 3.0) / params.m


def soft_edge_cdf(N: int, params: SoftEdgeParams, t: float, p2: PIISolution,
                  A: Optional[float] = None, solver: Optional[SoftEdgeSolver] = None) -> float:
    """
    F_N(t) en el borde suave.

    Sin A devuelve el valor dominante F₂(x). Con A devuelve la forma corregida
    (amplitud conjeturada) log F = -∫ₓ^{x_max} (h̃₀ + A N^{-1/3} h̃₁) du, que se
    obtiene de H_N ≈ -(m x₋)(h̃₀ N^{2/3} + A h̃₁ N^{1/3}) con t ≈ N x₋.

    Args:
        N: Tamaño de matriz
        params: Constantes del borde suave
        t: Punto de evaluación
        p2: Solución de Hastings-McLeod (con h̃₁ si A != 0)
        A: Amplitud conjeturada de la corrección
        solver: SoftEdgeSolver a reutilizar

    Returns:
        Probabilidad en [0, 1]
    """
    solver = solver or SoftEdgeSolver()
    x = soft_edge_coordinate(N, params, t)
    if x < p2.x_min or x > p2.x_max:
        raise GridExceededError(f"x = {x:.6g} fuera de la malla [{p2.x_min}, {p2.x_max}]")
    if A is None or A == 0:
        return solver.tw2_cdf(p2, x)
    weight = A * N ** (-1.0 / 3.0)

    def integrand(u):
        return float(solver.h0_tilde(p2, u)) + weight * float(p2.h1_unit_at(u)[0])

    integral, _ = quad(integrand, x, p2.x_max, epsabs=1e-14, epsrel=1e-12, limit=500)
    return min(1.0, math.exp(-integral))


def hard_edge_expansion(p3: PIIISolution, a: float, N: int, x: float) -> Dict[str, float]:
    """
    Coeficientes de la expansión en 1/N de R_N, S_N y ζ_N en el borde duro.

    r₀ = xf' - f, s₁ = -xf', r₁ = (a/2)x²f'', s₂ = -((a+1)/2)x²f''.

    Returns:
        Diccionario con r0, s1, r1, s2, R_N_approx, S_N_approx, zeta_N_approx
    """
    if abs(a - p3.a) > 1e-12:
        raise DomainError(f"La solución corresponde a a={p3.a}, no a a={a}")
    if N < 1:
        raise DomainError(f"N debe ser >= 1, recibido {N}")
    if x == 0:
        r0 = s1 = r1 = s2 = f = fp = 0.0
    else:
        f, fp, fpp = (float(v[0]) for v in p3.evaluate(x))
        r0 = x * fp - f
        s1 = -x * fp
        r1 = 0.5 * a * x * x * fpp
        s2 = -0.5 * (a + 1) * x * x * fpp
    return {
        "r0": r0,
        "s1": s1,
        "r1": r1,
        "s2": s2,
        "R_N_approx": N * (N + a) + r0 + r1 / N,
        "S_N_approx": 2 * N + a + 1 + s1 / N + s2 / N ** 2,
        "zeta_N_approx": -N * (N + a) + f + a / (2.0 * N) * x * fp,
    }


def classify_regime(N: int, a: Optional[float] = None, ratio: Optional[float] = None,
                    hard_factor: float = HARD_EDGE_FACTOR,
                    soft_factor: float = SOFT_EDGE_FACTOR) -> str:
    """
    Decide el régimen de escala: 'hard' (a fijo) o 'soft' (a = ratio·N).

    Args:
        N: Tamaño de matriz
        a: Exponente de Laguerre (excluyente con ratio)
        ratio: Cociente a/N (excluyente con a)
        hard_factor: Borde duro si a < hard_factor·N^{1/3}
        soft_factor: Borde suave si a > soft_factor·N^{1/3}

    Returns:
        'hard' o 'soft'
    """
    if (a is None) == (ratio is None):
        raise DomainError("Indique exactamente uno de a o ratio")
    if N < 1:
        raise DomainError(f"N debe ser >= 1, recibido {N}")
    effective = a if a is not None else ratio * N
    if effective < 0:
        raise DomainError(f"a debe ser >= 0, recibido {effective}")
    scale = N ** (1.0 / 3.0)
    if effective < hard_factor * scale:
        return "hard"
    if effective > soft_factor * scale:
        return "soft"
    raise CrossoverRegimeError(
        f"a = {effective:.4g} está en el régimen de transición a ~ N^(1/3) = {scale:.4g} (N={N})"
    )
