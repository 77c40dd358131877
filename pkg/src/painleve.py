"""
Capa de ecuaciones diferenciales: Painlevé III (borde duro), forma cerrada
con determinantes de Bessel, Painlevé II de Hastings-McLeod (borde suave),
Tracy-Widom F₂, la corrección lineal h̃₁ y el residuo de la σ-forma de
Painlevé V.
"""

import math
import sys
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad, solve_bvp, solve_ivp

from .utils.errors import (
    BranchLossError,
    ConditioningError,
    DomainError,
    GridExceededError,
    ODEIntegrationError,
)
from .utils.precision import PrecisionContext
from .utils.special_functions import airy_pair, bessel_i

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(8)
MAX_BRANCH_FLIPS = 20


@dataclass(frozen=True)
class ODESolverConfig:
    """
    Parámetros de los integradores.

    Args:
        method: Método de solve_ivp (Runge-Kutta embebido)
        rtol, atol: Tolerancias relativas y absolutas
        n_points: Puntos de la malla uniforme de reporte
        x0: Punto de lanzamiento de la serie de Painlevé III
        x_min, x_max: Dominio del borde suave
        p2_method: 'shooting' (integración hacia atrás) o 'collocation' (solve_bvp)
        bvp_tol, bvp_max_nodes: Control de solve_bvp
        shooting_rtol: Tolerancia de la integración hacia atrás de Painlevé II
        h1_amplitude: Amplitud A de la corrección h̃₁
        radicand_tolerance: Tolerancia relativa para radicandos negativos
    """

    method: str = "DOP853"
    rtol: float = 1e-10
    atol: float = 1e-12
    n_points: int = 2001
    x0: float = 1e-6
    x_min: float = -8.0
    x_max: float = 10.0
    p2_method: str = "shooting"
    bvp_tol: float = 1e-10
    bvp_max_nodes: int = 200000
    shooting_rtol: float = 1e-13
    h1_amplitude: float = 1.0
    radicand_tolerance: float = 1e-8

    def __post_init__(self):
        if self.x_min < -8.0 or self.x_max > 10.0 or self.x_min >= self.x_max:
            raise DomainError(f"Dominio de borde suave inválido [{self.x_min}, {self.x_max}]")
        if self.p2_method not in ("shooting", "collocation"):
            raise DomainError(f"p2_method desconocido: {self.p2_method!r}")
        if self.n_points < 2:
            raise DomainError("n_points debe ser >= 2")


def _readonly(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.flags.writeable = False
    return array


def _gauss_cumulative(func: Callable, grid: np.ndarray) -> np.ndarray:
    """∫_{grid[0]}^{grid[i]} func por Gauss-Legendre de 8 puntos en cada intervalo."""
    if grid.size < 2:
        return np.zeros(grid.size)
    left, right = grid[:-1], grid[1:]
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    nodes = mid[:, None] + half[:, None] * GAUSS_NODES[None, :]
    values = func(nodes.ravel()).reshape(nodes.shape)
    pieces = half * (values @ GAUSS_WEIGHTS)
    return np.concatenate([[0.0], np.cumsum(pieces)])


def _refined_cumulative(func: Callable, grid: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Como _gauss_cumulative, subdividiendo con los nodos de ``reference`` interiores a grid."""
    inner = reference[(reference > grid[0]) & (reference < grid[-1])]
    nodes = np.union1d(grid, inner)
    cumulative = _gauss_cumulative(func, nodes)
    return cumulative[np.searchsorted(nodes, grid)]


def p5_residual(H, H_prime, H_second, t: float, N: int, a: float) -> float:
    """
    Residuo normalizado de la σ-forma de Painlevé V para H_N.

    (tH'')² - 4(H')²(H - N(N+a) - tH') - ((2N+a-t)H' + H)², dividido por el
    mayor de los tres términos en valor absoluto.
    """
    if not t > 0:
        raise DomainError("p5_residual requiere t > 0")
    lhs = (t * H_second) ** 2
    first = 4 * H_prime ** 2 * (H - N * (N + a) - t * H_prime)
    second = ((2 * N + a - t) * H_prime + H) ** 2
    scale = max(abs(float(lhs)), abs(float(first)), abs(float(second)))
    if scale == 0.0:
        return 0.0
    return float((lhs - first - second) / scale)


# ----------------------------------------------------------------------
# Borde duro: Painlevé III
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PIIISolution:
    """f(x) del borde duro y sus derivadas sobre una malla uniforme."""

    a: float
    grid: np.ndarray
    f: np.ndarray
    f_prime: np.ndarray
    f_doubleprime: np.ndarray
    x0: float
    source: str = "painleve"
    _evaluator: Optional[Callable] = field(default=None, repr=False, compare=False)
    _f_evaluator: Optional[Callable] = field(default=None, repr=False, compare=False)

    @property
    def x_max(self) -> float:
        return float(self.grid[-1])

    def evaluate(self, x):
        """(f, f', f'') en puntos arbitrarios de [0, x_max]."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0) or np.any(x > self.x_max * (1 + 1e-12)):
            raise GridExceededError(f"x fuera de [0, {self.x_max}]")
        return self._evaluator(x)

    def f_at(self, x):
        """f en puntos arbitrarios (arreglo de al menos una dimensión)."""
        if self._f_evaluator is None:
            return self.evaluate(x)[0]
        x = np.asarray(x, dtype=float)
        if np.any(x < 0) or np.any(x > self.x_max * (1 + 1e-12)):
            raise GridExceededError(f"x fuera de [0, {self.x_max}]")
        return self._f_evaluator(x)

    def residual(self) -> np.ndarray:
        """Residuo de (xf'')² + 4f'(1+f')(xf'-f) - (af')² relativo a (af')² + 1e-30."""
        x = self.grid[1:]
        f, fp, fpp = self.f[1:], self.f_prime[1:], self.f_doubleprime[1:]
        raw = (x * fpp) ** 2 + 4 * fp * (1 + fp) * (x * fp - f) - (self.a * fp) ** 2
        return np.abs(raw) / ((self.a * fp) ** 2 + 1e-30)


def _series_coefficient(a: float) -> float:
    return math.exp(-(math.lgamma(a + 1) + math.lgamma(a + 2)))


def _p3_series(a: float, x: np.ndarray):
    """
    Serie f ≈ -c x^{a+1} (1 - 2x/(a+2)), c = 1/(Γ(a+1)Γ(a+2)), y sus derivadas.

    El coeficiente de orden x sale del balance de x^{2a+1} en la ecuación
    (válido para a > 0). Las soluciones -C x^{a+1} forman una familia de un
    parámetro, así que omitirlo desplaza C en O(x₀).
    """
    if a == 0:
        return -x, -np.ones_like(x), np.zeros_like(x)
    c = _series_coefficient(a)
    f = -c * x ** (a + 1) * (1 - 2 * x / (a + 2))
    fp = -c * x ** a * (a + 1 - 2 * x)
    with np.errstate(divide="ignore", invalid="ignore"):
        if a == 1:
            fpp = -2 * c * (1 - 2 * x)
        elif a > 1:
            fpp = -c * (a + 1) * x ** (a - 1) * (a - 2 * x)
        else:
            fpp = np.where(x > 0, -c * (a + 1) * x ** (a - 1) * (a - 2 * x), np.nan)
    return f, fp, fpp


def _radicand(x, f, fp, a):
    return (a * fp) ** 2 - 4 * fp * (1 + fp) * (x * fp - f)


class HardEdgeSolver:
    """
    Resolución del borde duro: Painlevé III para f(x) y F_∞(x) = exp(∫₀ˣ f(u)/u du).
    """

    def __init__(self, config: Optional[ODESolverConfig] = None, verbose: bool = False):
        """
        Inicializa el solver.

        Args:
            config: Configuración de los integradores
            verbose: Imprime mensajes de estado en stderr
        """
        self.config = config or ODESolverConfig()
        self.verbose = verbose

    def _log(self, message: str):
        if self.verbose:
            print(message, file=sys.stderr)

    def _rhs(self, a: float, sign: float):
        tolerance = self.config.radicand_tolerance

        def rhs(x, y):
            f, fp = y
            rad = _radicand(x, f, fp, a)
            if rad < 0:
                scale = (a * fp) ** 2 + abs(4 * fp * (1 + fp) * (x * fp - f))
                if rad < -tolerance * scale:
                    raise BranchLossError(
                        f"Radicando de Painlevé III negativo ({rad:.3e}) en x = {x:.6g}", float(x)
                    )
                rad = 0.0
            return [fp, sign * math.sqrt(rad) / x]

        return rhs

    def solve_p3(self, a: float, x_max: float, x0: Optional[float] = None) -> PIIISolution:
        """
        Integra Painlevé III con la rama de la raíz seguida de forma continua.

        Args:
            a: Exponente de Laguerre, >= 0
            x_max: Extremo derecho (<= 50)
            x0: Punto de lanzamiento (por defecto el de la configuración)

        Returns:
            PIIISolution sobre una malla uniforme de n_points puntos
        """
        if not a >= 0:
            raise DomainError(f"a debe ser >= 0, recibido {a}")
        if not 0 < x_max <= 50:
            raise DomainError(f"x_max debe estar en (0, 50], recibido {x_max}")
        cfg = self.config
        grid = np.linspace(0.0, x_max, cfg.n_points)
        x0 = cfg.x0 if x0 is None else x0

        if a == 0:
            def exact(x):
                x = np.atleast_1d(np.asarray(x, dtype=float))
                return -x, -np.ones_like(x), np.zeros_like(x)

            f, fp, fpp = exact(grid)
            return PIIISolution(a=0.0, grid=_readonly(grid), f=_readonly(f), f_prime=_readonly(fp),
                                f_doubleprime=_readonly(fpp), x0=x0, _evaluator=exact)

        f0, fp0, _ = _p3_series(a, np.array(x0))
        y0 = np.array([float(f0), float(fp0)])
        atol = cfg.atol * np.maximum(np.minimum(np.abs(y0), 1.0), 1e-300)

        segments: List[Tuple[float, float, object, float]] = []
        sign = -1.0
        start = x0
        for _ in range(MAX_BRANCH_FLIPS):
            event = lambda x, y: _radicand(x, y[0], y[1], a)
            event.terminal = True
            event.direction = -1
            sol = solve_ivp(self._rhs(a, sign), (start, x_max), y0, method=cfg.method,
                            rtol=cfg.rtol, atol=atol, dense_output=True, events=[event])
            if sol.status == -1:
                print(f"❌ Painlevé III (a={a}): {sol.message}", file=sys.stderr)
                raise ODEIntegrationError(f"Fallo de integración de Painlevé III: {sol.message}",
                                          {"a": a, "x": float(sol.t[-1])})
            segments.append((start, float(sol.t[-1]), sol.sol, sign))
            if sol.status == 0:
                break
            start = float(sol.t_events[0][0])
            y0 = np.array(sol.y_events[0][0], dtype=float)
            sign = -sign
            self._log(f"🔁 Painlevé III (a={a}): cambio de rama en x = {start:.6g}")
        else:
            raise BranchLossError(f"Demasiados cambios de rama en Painlevé III (a={a})", start)

        def evaluator(x):
            x = np.atleast_1d(np.asarray(x, dtype=float))
            f_s, fp_s, fpp_s = _p3_series(a, x)
            f, fp, fpp = f_s.copy(), fp_s.copy(), fpp_s.copy()
            for lo, hi, dense, branch in segments:
                mask = (x >= lo) & (x <= hi + 1e-12 * max(1.0, hi))
                if not np.any(mask):
                    continue
                values = dense(np.minimum(x[mask], hi))
                xs = x[mask]
                f[mask], fp[mask] = values[0], values[1]
                rad = np.maximum(_radicand(xs, values[0], values[1], a), 0.0)
                fpp[mask] = branch * np.sqrt(rad) / xs
            return f, fp, fpp

        f, fp, fpp = evaluator(grid)
        self._log(f"✅ Painlevé III resuelto (a={a}, x_max={x_max}, {len(segments)} tramo(s))")
        return PIIISolution(a=float(a), grid=_readonly(grid), f=_readonly(f), f_prime=_readonly(fp),
                            f_doubleprime=_readonly(fpp), x0=x0, _evaluator=evaluator)

    def launch_drift(self, a: float, x_max: float) -> float:
        """Deriva máxima de f entre lanzamientos en x₀ y x₀/10."""
        base = self.solve_p3(a, x_max)
        shifted = self.solve_p3(a, x_max, x0=self.config.x0 / 10.0)
        return float(np.max(np.abs(base.f - shifted.f)))

    def bessel_det_f(self, a: int, x: float, ctx: Optional[PrecisionContext] = None) -> float:
        """
        Forma cerrada para a entero: f(x) = -x det[I_{j-k+2}(2√x)] / det[I_{j-k}(2√x)].

        Args:
            a: Entero en 0..10
            x: Punto de evaluación, >= 0
            ctx: Contexto de precisión

        Returns:
            f(x) <= 0
        """
        if int(a) != a or not 0 <= a <= 10:
            raise DomainError(f"bessel_det_f requiere a entero en 0..10, recibido {a}")
        if x < 0:
            raise DomainError(f"bessel_det_f requiere x >= 0, recibido {x}")
        a = int(a)
        if a == 0:
            return -float(x)
        if x == 0:
            return 0.0
        ctx = ctx or PrecisionContext()
        ar = ctx.arithmetic()
        z = 2 * ar.sqrt(ar.mpf(x))
        values = {n: bessel_i(n, z, ctx) for n in range(0, a + 2)}
        numerator = [[values[abs(j - k + 2)] for k in range(a)] for j in range(a)]
        denominator = [[values[abs(j - k)] for k in range(a)] for j in range(a)]
        if ctx.is_extended:
            num_det = ar.det(ar.matrix(numerator))
            den_matrix = ar.matrix(denominator)
            den_det = ar.det(den_matrix)
            lost = float(ar.log10(ar.cond(den_matrix))) if a > 1 else 0.0
        else:
            num_det = np.linalg.det(np.array(numerator, dtype=float))
            den_array = np.array(denominator, dtype=float)
            den_det = np.linalg.det(den_array)
            lost = float(np.log10(np.linalg.cond(den_array))) if a > 1 else 0.0
        certified = ctx.digits - lost
        if certified < 8 or den_det == 0:
            raise ConditioningError(
                f"Determinante de Bessel con {certified:.1f} dígitos certificados (a={a}, x={x})",
                certified,
            )
        return float(-x * num_det / den_det)

    def bessel_solution(self, a: int, x_max: float, ctx: Optional[PrecisionContext] = None,
                        n_points: Optional[int] = None) -> PIIISolution:
        """
        PIIISolution construida con la forma cerrada de Bessel.

        Las derivadas se obtienen con diferencias centradas de 5 puntos; cerca
        del origen se usa el término dominante de la serie.
        """
        n_points = n_points or self.config.n_points
        grid = np.linspace(0.0, x_max, n_points)
        h = 1e-3

        def f_only(x):
            return np.array([self.bessel_det_f(a, float(v), ctx) for v in np.atleast_1d(x)])

        def evaluator(x):
            x = np.atleast_1d(np.asarray(x, dtype=float))
            f = f_only(x)
            f_s, fp, fpp = _p3_series(float(a), x)
            inner = x >= 2 * h
            if np.any(inner):
                xs = x[inner]
                fm2, fm1 = f_only(xs - 2 * h), f_only(xs - h)
                fp1, fp2 = f_only(xs + h), f_only(xs + 2 * h)
                fp[inner] = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
                fpp[inner] = (-fp2 + 16 * fp1 - 30 * f[inner] + 16 * fm1 - fm2) / (12 * h * h)
            return f, fp, fpp

        f, fp, fpp = evaluator(grid)
        return PIIISolution(a=float(a), grid=_readonly(grid), f=_readonly(f), f_prime=_readonly(fp),
                            f_doubleprime=_readonly(fpp), x0=self.config.x0, source="bessel",
                            _evaluator=evaluator, _f_evaluator=f_only)

    @staticmethod
    def _log_head(p3: PIIISolution, x: float) -> float:
        """∫₀^{min(x, x₀)} f(u)/u du con la serie de lanzamiento."""
        upper = min(x, p3.x0)
        a = p3.a
        c = _series_coefficient(a)
        return -c * upper ** (a + 1) / (a + 1) + 2 * c * upper ** (a + 2) / ((a + 2) ** 2)

    def _check_x(self, p3: PIIISolution, x: float):
        if x < 0 or x > p3.x_max * (1 + 1e-12):
            raise GridExceededError(f"x = {x} fuera de la malla [0, {p3.x_max}]")

    def log_limiting_cdf(self, p3: PIIISolution, x: float) -> float:
        """log F_∞(x) por cuadratura adaptativa de f(u)/u."""
        self._check_x(p3, x)
        if x == 0:
            return 0.0
        if p3.a == 0:
            return -float(x)
        total = self._log_head(p3, x)
        if x > p3.x0:
            integral, _ = quad(lambda u: float(p3.f_at(u)[0]) / u, p3.x0, x,
                               epsabs=1e-14, epsrel=1e-12, limit=400)
            total += integral
        return total

    def limiting_cdf(self, p3: PIIISolution, x: float) -> float:
        """F_∞(x) = exp(∫₀ˣ f(u)/u du)."""
        return math.exp(self.log_limiting_cdf(p3, x))

    def limiting_cdf_grid(self, p3: PIIISolution, grid=None) -> np.ndarray:
        """
        F_∞ sobre una malla creciente (por defecto la de la solución).

        Integra f(u)/u de forma acumulada desde 0 con Gauss-Legendre por tramos.
        """
        grid = np.asarray(p3.grid if grid is None else grid, dtype=float)
        if np.any(np.diff(grid) <= 0):
            raise ValueError("La malla debe ser estrictamente creciente")
        self._check_x(p3, float(grid[0]))
        self._check_x(p3, float(grid[-1]))
        if p3.a == 0:
            return np.exp(-grid)
        nodes = grid if grid[0] == 0 else np.concatenate([[0.0], grid])

        def integrand(u):
            return p3.f_at(u) / u

        cumulative = _refined_cumulative(integrand, nodes, np.asarray(p3.grid))
        if grid[0] != 0:
            cumulative = cumulative[1:]
        return np.exp(cumulative)

    def corrected_cdf(self, p3: PIIISolution, N: int, x: float) -> Dict[str, float]:
        """
        Corrección 1/N del borde duro.

        Returns:
            Diccionario con 'limiting', 'additive' (F_∞ + (a/2N) f F_∞),
            'exponential' (exp(∫f/u + (a/2N) f)) y 'rescaled' (F_∞(x(1 + a/2N)),
            NaN si el punto reescalado sale de la malla)
        """
        if int(N) != N or N < 1:
            raise DomainError(f"N debe ser un entero >= 1, recibido {N}")
        log_F = self.log_limiting_cdf(p3, x)
        F_inf = math.exp(log_F)
        f = float(p3.f_at(x)[0]) if x > 0 else 0.0
        shift = p3.a / (2.0 * N)
        rescaled_x = x * (1 + shift)
        rescaled = self.limiting_cdf(p3, rescaled_x) if rescaled_x <= p3.x_max else float("nan")
        return {
            "limiting": F_inf,
            "additive": F_inf + shift * f * F_inf,
            "exponential": math.exp(log_F + shift * f),
            "rescaled": rescaled,
        }


# ----------------------------------------------------------------------
# Borde suave: Painlevé II, Tracy-Widom y corrección h̃₁
# ----------------------------------------------------------------------

H1_CONVENTION = (
    "h1_tilde(x_max) = A * x_max^(-1/2) * exp(-(4/3) x_max^(3/2)), con h1_tilde' sembrada "
    "por el modo decreciente de la EDO lineal; A es la amplitud libre (conjeturada)"
)


@dataclass(frozen=True)
class PIISolution:
    """Solución de Hastings-McLeod y cantidades derivadas sobre la malla."""

    grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    h0_tilde: np.ndarray
    h1_tilde: Optional[np.ndarray] = None
    h1_amplitude_convention: str = H1_CONVENTION
    h1_amplitude: float = 1.0
    method: str = "shooting"
    diagnostics: Dict = field(default_factory=dict, compare=False)
    _q_eval: Optional[Callable] = field(default=None, repr=False, compare=False)
    _h1_eval: Optional[Callable] = field(default=None, repr=False, compare=False)

    @property
    def x_min(self) -> float:
        return float(self.grid[0])

    @property
    def x_max(self) -> float:
        return float(self.grid[-1])

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        span = self.x_max - self.x_min
        if np.any(x < self.x_min - 1e-12 * span) or np.any(x > self.x_max + 1e-12 * span):
            raise GridExceededError(f"x fuera de [{self.x_min}, {self.x_max}]")
        return np.clip(x, self.x_min, self.x_max)

    def q_at(self, x):
        """(q, q') en puntos arbitrarios de la malla."""
        return self._q_eval(self._check(x))

    @property
    def has_h1(self) -> bool:
        return self._h1_eval is not None

    def h1_unit_at(self, x):
        """(h̃₁, h̃₁') con amplitud unidad; requiere solve_h1_correction."""
        if self._h1_eval is None:
            raise ValueError("h̃₁ no calculada; ejecute solve_h1_correction primero")
        return self._h1_eval(self._check(x))

    def h1_at(self, x):
        """(h̃₁, h̃₁') escalados por la amplitud A."""
        unit, unit_prime = self.h1_unit_at(x)
        return self.h1_amplitude * unit, self.h1_amplitude * unit_prime


def _h0_from_q(x, q, qp):
    return qp ** 2 - q ** 4 - x * q ** 2


class SoftEdgeSolver:
    """
    Borde suave: Hastings-McLeod, h̃₀, F₂ y la corrección lineal h̃₁.
    """

    def __init__(self, config: Optional[ODESolverConfig] = None, verbose: bool = False):
        """
        Inicializa el solver.

        Args:
            config: Configuración de los integradores
            verbose: Imprime mensajes de estado en stderr
        """
        self.config = config or ODESolverConfig()
        self.verbose = verbose

    def _log(self, message: str):
        if self.verbose:
            print(message, file=sys.stderr)

    @staticmethod
    def _p2_rhs(x, y):
        return [y[1], x * y[0] + 2 * y[0] ** 3]

    def shooting_solution(self, config: Optional[ODESolverConfig] = None):
        """
        Integración hacia atrás desde x_max con q = Ai, q' = Ai'.

        Returns:
            Salida densa (callable x -> [q, q'])
        """
        cfg = config or self.config
        ai, dai = airy_pair(cfg.x_max)
        y0 = np.array([float(ai), float(dai)])
        sol = solve_ivp(self._p2_rhs, (cfg.x_max, cfg.x_min), y0, method=cfg.method,
                        rtol=cfg.shooting_rtol, atol=1e-14 * np.abs(y0), dense_output=True)
        if not sol.success:
            print(f"❌ Painlevé II (disparo): {sol.message}", file=sys.stderr)
            raise ODEIntegrationError(f"Fallo en el disparo de Painlevé II: {sol.message}",
                                      {"x": float(sol.t[-1])})
        return sol.sol

    def _collocation(self, cfg: ODESolverConfig, guess_eval: Callable):
        ai, dai = airy_pair(cfg.x_max)
        ai, dai = float(ai), float(dai)
        mesh = np.linspace(cfg.x_min, cfg.x_max, 801)

        def fun(x, y):
            return np.vstack([y[1], x * y[0] + 2 * y[0] ** 3])

        def fun_jac(x, y):
            jac = np.zeros((2, 2, x.size))
            jac[0, 1] = 1.0
            jac[1, 0] = x + 6 * y[0] ** 2
            return jac

        def bc(ya, yb):
            return np.array([yb[0] - ai, yb[1] - dai])

        result = solve_bvp(fun, bc, mesh, guess_eval(mesh), fun_jac=fun_jac,
                           tol=cfg.bvp_tol, max_nodes=cfg.bvp_max_nodes)
        diagnostics = {
            "status": int(result.status),
            "message": result.message,
            "iterations": int(result.niter),
            "nodes": int(result.x.size),
            "max_rms_residual": float(np.max(result.rms_residuals)),
        }
        if result.status != 0:
            print(f"❌ Painlevé II (colocación) no convergió: {diagnostics}", file=sys.stderr)
            raise ODEIntegrationError(f"solve_bvp no convergió: {result.message}", diagnostics)
        return result.sol, diagnostics

    def solve_p2_hastings_mcleod(self, config: Optional[ODESolverConfig] = None) -> PIISolution:
        """
        Resuelve q'' = xq + 2q³ con q(x_max) = Ai(x_max), q'(x_max) = Ai'(x_max).

        Con p2_method='collocation' la solución del disparo sirve de punto de
        partida para solve_bvp; con 'shooting' se usa directamente.

        Returns:
            PIISolution con q, q' y h̃₀ sobre la malla
        """
        cfg = config or self.config
        shooting = self.shooting_solution(cfg)
        diagnostics = {"method": cfg.p2_method}
        q_eval = shooting
        if cfg.p2_method == "collocation":
            q_eval, bvp_diagnostics = self._collocation(cfg, shooting)
            diagnostics.update(bvp_diagnostics)

        def evaluate(x):
            values = np.asarray(q_eval(np.asarray(x, dtype=float)))
            return values[0], values[1]

        grid = np.linspace(cfg.x_min, cfg.x_max, cfg.n_points)
        q, qp = evaluate(grid)
        if np.any(q <= 0):
            raise ODEIntegrationError("La solución de Painlevé II perdió positividad", diagnostics)
        self._log(f"✅ Hastings-McLeod resuelto en [{cfg.x_min}, {cfg.x_max}] ({cfg.p2_method})")
        return PIISolution(grid=_readonly(grid), q=_readonly(q), q_prime=_readonly(qp),
                           h0_tilde=_readonly(_h0_from_q(grid, q, qp)), method=cfg.p2_method,
                           diagnostics=diagnostics, _q_eval=evaluate)

    def h0_tilde(self, p2: PIISolution, x) -> float:
        """h̃₀(x) = ∫ₓ^∞ q² = q'² - q⁴ - xq² (forma cerrada)."""
        q, qp = p2.q_at(x)
        return _h0_from_q(np.asarray(x, dtype=float), q, qp)

    def _tail_h0(self, p2: PIISolution) -> float:
        """∫_{x_max}^∞ q² ≈ Ai'(x_max)² - x_max Ai(x_max)²."""
        ai, dai = airy_pair(p2.x_max)
        return float(dai) ** 2 - p2.x_max * float(ai) ** 2

    def tw2_cdf(self, p2: PIISolution, s: float, route: str = "identity") -> float:
        """
        F₂(s) = exp(-∫ₛ^∞ h̃₀(u) du).

        Args:
            p2: Solución de Hastings-McLeod
            s: Punto de evaluación dentro de la malla
            route: 'identity' (integra h̃₀ cerrada) o 'quadrature' (∫(x-s)q²)
        """
        p2._check(s)
        if route == "identity":
            integrand = lambda u: float(self.h0_tilde(p2, u))
        elif route == "quadrature":
            integrand = lambda u: (u - s) * float(p2.q_at(u)[0]) ** 2
        else:
            raise ValueError(f"Ruta desconocida: {route!r}")
        if s >= p2.x_max:
            return 1.0
        integral, _ = quad(integrand, s, p2.x_max, epsabs=1e-14, epsrel=1e-12, limit=500)
        return math.exp(-integral)

    def tw2_cdf_grid(self, p2: PIISolution, grid=None) -> np.ndarray:
        """F₂ sobre una malla creciente (integración acumulada de h̃₀ desde x_max)."""
        grid = np.asarray(p2.grid if grid is None else grid, dtype=float)
        if np.any(np.diff(grid) <= 0):
            raise ValueError("La malla debe ser estrictamente creciente")
        p2._check(grid)
        nodes = grid if grid[-1] == p2.x_max else np.concatenate([grid, [p2.x_max]])
        cumulative = _refined_cumulative(lambda u: self.h0_tilde(p2, u), nodes, np.asarray(p2.grid))
        remaining = cumulative[-1] - cumulative
        return np.exp(-remaining[: grid.size])

    def identity_residual(self, p2: PIISolution, x_range: Tuple[float, float] = (-8.0, 8.0)) -> float:
        """Máxima discrepancia entre h̃₀ cerrada y ∫ₓ^∞ q² por cuadratura."""
        grid = np.asarray(p2.grid)
        cumulative = _gauss_cumulative(lambda u: p2.q_at(u)[0] ** 2, grid)
        quadrature = cumulative[-1] - cumulative + self._tail_h0(p2)
        closed = np.asarray(p2.h0_tilde)
        mask = (grid >= x_range[0]) & (grid <= x_range[1])
        scale = np.maximum(1.0, np.abs(closed[mask]))
        return float(np.max(np.abs(closed[mask] - quadrature[mask]) / scale))

    def h0_residual(self, p2: PIISolution) -> float:
        """Residuo de (h̃₀'')² + 4h̃₀'((h̃₀')² - xh̃₀' + h̃₀) = 0 con h̃₀' = -q², h̃₀'' = -2qq'."""
        x, q, qp, h0 = (np.asarray(v) for v in (p2.grid, p2.q, p2.q_prime, p2.h0_tilde))
        d1, d2 = -q ** 2, -2 * q * qp
        t1 = d2 ** 2
        t2 = 4 * d1 * (d1 ** 2 - x * d1 + h0)
        scale = np.maximum(np.abs(t1), np.abs(t2)) + 1e-300
        return float(np.max(np.abs(t1 + t2) / scale))

    @staticmethod
    def _h1_coefficients(x, q, qp):
        """Coeficientes (c₀, c₁, h̃₀'') de la EDO lineal, dividida por h̃₀''."""
        h0 = _h0_from_q(x, q, qp)
        d1 = -q ** 2
        d2 = -2 * q * qp
        return 2 * d1, 2 * (h0 + d1 * (3 * d1 - 2 * x)), d2

    def solve_h1_correction(self, p2: PIISolution, config: Optional[ODESolverConfig] = None,
                            amplitude: Optional[float] = None) -> PIISolution:
        """
        Resuelve 2h̃₁h̃₀' + 2(h̃₀ + h̃₀'(3h̃₀' - 2x))h̃₁' + h̃₀''h̃₁'' = 0 hacia atrás.

        La solución se calcula con amplitud unidad y se escala por A, de modo
        que la dependencia en A es exactamente lineal.

        Args:
            p2: Solución de Hastings-McLeod
            config: Configuración (tolerancias y amplitud por defecto)
            amplitude: Amplitud A (por defecto config.h1_amplitude)

        Returns:
            Nueva PIISolution con h1_tilde rellenado
        """
        cfg = config or self.config
        amplitude = cfg.h1_amplitude if amplitude is None else float(amplitude)
        x_top = p2.x_max
        degenerate = []

        def rhs(x, y):
            q, qp = p2.q_at(x)
            c0, c1, d2 = self._h1_coefficients(x, float(q), float(qp))
            if abs(d2) < 1e-300:
                degenerate.append(float(x))
                d2 = math.copysign(1e-300, d2) if d2 != 0 else 1e-300
            return [y[1], -(c0 * y[0] + c1 * y[1]) / d2]

        seed = x_top ** -0.5 * math.exp(-4.0 / 3.0 * x_top ** 1.5)
        # modo decreciente de la EDO: h̃₁'/h̃₁ ≈ -2√x - 1/x
        slope = -(2.0 * math.sqrt(x_top) + 1.0 / x_top)
        y0 = np.array([seed, seed * slope])
        sol = solve_ivp(rhs, (x_top, p2.x_min), y0, method=cfg.method, rtol=cfg.rtol,
                        atol=cfg.atol * np.abs(y0), dense_output=True)
        if not sol.success:
            print(f"❌ Corrección h̃₁: {sol.message}", file=sys.stderr)
            raise ODEIntegrationError(f"La EDO de h̃₁ no convergió: {sol.message}",
                                      {"x": float(sol.t[-1])})
        if degenerate:
            warnings.warn(f"Coeficiente h̃₀'' ≈ 0 en {len(degenerate)} evaluaciones "
                          f"(primera en x = {degenerate[0]:.4g})", RuntimeWarning)

        dense = sol.sol

        def h1_eval(x):
            values = np.asarray(dense(np.asarray(x, dtype=float)))
            return values[0], values[1]

        unit, _ = h1_eval(np.asarray(p2.grid))
        self._log(f"✅ Corrección h̃₁ resuelta (A = {amplitude})")
        return replace(p2, h1_tilde=_readonly(amplitude * unit), h1_amplitude=amplitude,
                       _h1_eval=h1_eval)

    def h1_residual(self, p2: PIISolution, x_range: Tuple[float, float] = (-2.0, 6.0),
                    n_points: int = 401) -> float:
        """Residuo de la EDO de h̃₁ relativo al mayor término, con h̃₁'' por diferencias."""
        x = np.linspace(x_range[0], x_range[1], n_points)
        step = 1e-4
        h1, h1p = p2.h1_at(x)
        h1pp = (p2.h1_at(x + step)[1] - p2.h1_at(x - step)[1]) / (2 * step)
        q, qp = p2.q_at(x)
        c0, c1, d2 = self._h1_coefficients(x, q, qp)
        terms = np.vstack([c0 * h1, c1 * h1p, d2 * h1pp])
        scale = np.max(np.abs(terms), axis=0) + 1e-300
        return float(np.max(np.abs(terms.sum(axis=0)) / scale))
