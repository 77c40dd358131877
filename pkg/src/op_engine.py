"""
Motor de recursión de polinomios ortogonales semiclásicos.

Calcula F_N(t) = Prob(λ_min >= t) para el ensamble de Wishart-Laguerre complejo
a partir de los coeficientes (h_k, R_k, S_k, ζ_k) del sistema de polinomios
ortogonales con peso e^{-λ} λ^a en [t, ∞), avanzando en k con las relaciones
de Laguerre-Freud sumadas.
"""

import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator

from .painleve import p5_residual
from .utils.errors import (
    ConditioningError,
    DegenerateRecursionError,
    DomainError,
    PrecisionUnattainableError,
)
from .utils.precision import PrecisionContext
from .utils.special_functions import log_regularized_upper_gamma, log_upper_incomplete_gamma

LOG_FLOAT_MIN = math.log(sys.float_info.min)
MIN_CERTIFIED_DIGITS = 8.0


@dataclass(frozen=True)
class ModelParams:
    """Terna (N, a, t): tamaño de matriz, exponente de Laguerre y punto de evaluación."""

    N: int
    a: float
    t: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N debe ser un entero >= 1, recibido {self.N}")
        if not self.a >= 0:
            raise DomainError(f"a debe ser >= 0, recibido {self.a}")
        if not self.t >= 0:
            raise DomainError(f"t debe ser >= 0, recibido {self.t}")
        object.__setattr__(self, "N", int(self.N))

    def with_t(self, t: float) -> "ModelParams":
        return ModelParams(self.N, self.a, t)

    def to_dict(self) -> Dict:
        return {"N": self.N, "a": self.a, "t": self.t}


@dataclass(frozen=True)
class OPState:
    """Coeficientes del índice k; los valores viven en la aritmética de la traza."""

    k: int
    log_h: object
    R: object
    S: object
    zeta: object
    sum_S: object
    sum_S2: object
    sum_R: object


@dataclass(frozen=True)
class RecurrenceTrace:
    """Estados k = 0..N junto con la precisión con la que se obtuvieron."""

    params: ModelParams
    states: Tuple[OPState, ...]
    precision: PrecisionContext

    @property
    def theta(self) -> List:
        a = self.params.a
        return [2 * s.k + 1 - s.S + a for s in self.states]

    @property
    def omega(self) -> List:
        return [-s.R - s.zeta for s in self.states]

    def to_dataframe(self) -> pd.DataFrame:
        """Traza en floats, una fila por índice k."""
        return pd.DataFrame({
            "k": [s.k for s in self.states],
            "log_h": [float(s.log_h) for s in self.states],
            "R": [float(s.R) for s in self.states],
            "S": [float(s.S) for s in self.states],
            "zeta": [float(s.zeta) for s in self.states],
            "theta": [float(v) for v in self.theta],
            "omega": [float(v) for v in self.omega],
        })


@dataclass(frozen=True)
class DistributionResult:
    F: float
    log_F: float
    H: Optional[float] = None
    trace: Optional[RecurrenceTrace] = None
    precision_mode: str = "standard"
    underflow: bool = False


@dataclass
class IdentityReport:
    """Residuos relativos máximos por identidad y umbrales de aceptación."""

    params: ModelParams
    residuals: Dict[str, float] = field(default_factory=dict)
    thresholds: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.residuals[name] <= self.thresholds[name] for name in self.residuals)

    def failures(self) -> List[str]:
        return [name for name in self.residuals if not self.residuals[name] <= self.thresholds[name]]

    def to_dataframe(self) -> pd.DataFrame:
        rows = [
            {"check": name, "residual": value, "threshold": self.thresholds[name],
             "passed": bool(value <= self.thresholds[name])}
            for name, value in self.residuals.items()
        ]
        return pd.DataFrame(rows, columns=["check", "residual", "threshold", "passed"])


def _relative(residual, *terms) -> float:
    scale = max(abs(float(term)) for term in terms)
    if scale == 0.0:
        return abs(float(residual))
    return abs(float(residual)) / scale


def _native_pair(trace: "RecurrenceTrace"):
    """(a, t) convertidos a la aritmética de la traza."""
    ar = trace.precision.arithmetic()
    return ar.mpf(trace.params.a), ar.mpf(trace.params.t)


def _fd_first(values: Sequence, h: float):
    fm2, fm1, _, fp1, fp2 = values
    return (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)


def _fd_second(values: Sequence, h: float):
    fm2, fm1, f0, fp1, fp2 = values
    return (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)


class RecurrenceEngine:
    """
    Motor de la recursión de Laguerre-Freud con escalado automático de precisión.

    Política: se corre en doble; si algún residuo algebraico supera
    ``standard_threshold`` o R_{k+1} <= 0, se repite en precisión extendida y se
    duplican los dígitos hasta ``max_digits`` del contexto; si aún falla se
    lanza PrecisionUnattainableError.
    """

    def __init__(self, r_floor: float = 1e-300, standard_threshold: float = 1e-7,
                 extended_threshold: float = 1e-12, verbose: bool = False):
        """
        Inicializa el motor.

        Args:
            r_floor: Umbral por debajo del cual R_{k+1} se considera degenerado
            standard_threshold: Residuo máximo aceptado en doble precisión
            extended_threshold: Residuo máximo aceptado en precisión extendida
            verbose: Imprime mensajes de estado en stderr
        """
        self.r_floor = r_floor
        self.standard_threshold = standard_threshold
        self.extended_threshold = extended_threshold
        self.verbose = verbose

    def _log(self, message: str):
        if self.verbose:
            print(message, file=sys.stderr)

    # ------------------------------------------------------------------
    # Estados individuales
    # ------------------------------------------------------------------

    def _initial_state(self, ar, ctx: PrecisionContext, A, T) -> OPState:
        nu = A + 1
        log_h0 = ar.mpf(log_upper_incomplete_gamma(nu, T, ctx))
        if T == 0:
            ratio = ar.mpf(0)
        else:
            ratio = ar.exp(nu * ar.log(T) - T - log_h0)
        zero = ar.mpf(0)
        return OPState(k=0, log_h=log_h0, R=zero, S=ratio + nu, zeta=zero,
                       sum_S=zero, sum_S2=zero, sum_R=zero)

    def _advance(self, ar, state: OPState, A, T) -> OPState:
        k = state.k
        S, R = state.S, state.R
        R_next = 2 * state.sum_S - R - S * (S - A - T - 2 * k - 2) - T * (2 * k + 1 + A)
        if not R_next > self.r_floor:
            raise DegenerateRecursionError(
                f"R_{k + 1} = {float(R_next):.3e} no es positivo (precisión agotada)", k + 1
            )
        sum_S = state.sum_S + S
        sum_S2 = state.sum_S2 + S * S
        rhs = 2 * state.sum_R + sum_S2 - T * sum_S
        S_next = rhs / R_next - S + 3 + A + T + 2 * k
        return OPState(k=k + 1, log_h=state.log_h + ar.log(R_next), R=R_next, S=S_next,
                       zeta=-sum_S, sum_S=sum_S, sum_S2=sum_S2, sum_R=state.sum_R + R_next)

    def init_state(self, a: float, t: float, ctx: Optional[PrecisionContext] = None) -> OPState:
        """
        Estado k = 0: h₀ = Γ(1+a, t), S₀ = e^{-t} t^{a+1}/Γ(1+a, t) + a + 1, R₀ = ζ₀ = 0.

        Args:
            a: Exponente de Laguerre, >= 0
            t: Punto de truncamiento, >= 0
            ctx: Contexto de precisión

        Returns:
            OPState de índice 0 con sumas nulas
        """
        if not a >= 0:
            raise DomainError(f"a debe ser >= 0, recibido {a}")
        if not t >= 0:
            raise DomainError(f"t debe ser >= 0, recibido {t}")
        ctx = ctx or PrecisionContext()
        ar = ctx.arithmetic()
        return self._initial_state(ar, ctx, ar.mpf(a), ar.mpf(t))

    def advance(self, state: OPState, a: float, t: float,
                ctx: Optional[PrecisionContext] = None) -> OPState:
        """Avanza un índice con las relaciones de Laguerre-Freud sumadas."""
        ctx = ctx or PrecisionContext()
        ar = ctx.arithmetic()
        coerced = OPState(
            k=state.k, log_h=ar.mpf(state.log_h), R=ar.mpf(state.R), S=ar.mpf(state.S),
            zeta=ar.mpf(state.zeta), sum_S=ar.mpf(state.sum_S), sum_S2=ar.mpf(state.sum_S2),
            sum_R=ar.mpf(state.sum_R),
        )
        return self._advance(ar, coerced, ar.mpf(a), ar.mpf(t))

    # ------------------------------------------------------------------
    # Trazas completas
    # ------------------------------------------------------------------

    def _zero_table(self, params: ModelParams, ctx: PrecisionContext) -> RecurrenceTrace:
        """Tabla cerrada en t = 0: R_k = k(k+a), S_k = 2k+a+1, h_k = Γ(k+a+1) k!."""
        ar = ctx.arithmetic()
        A = ar.mpf(params.a)
        states = []
        sum_S = sum_S2 = sum_R = ar.mpf(0)
        for k in range(params.N + 1):
            R = k * (k + A)
            S = 2 * k + 1 + A
            sum_R += R
            states.append(OPState(
                k=k, log_h=ar.loggamma(k + 1 + A) + ar.loggamma(ar.mpf(k + 1)),
                R=R, S=S, zeta=-sum_S, sum_S=sum_S, sum_S2=sum_S2, sum_R=sum_R,
            ))
            sum_S += S
            sum_S2 += S * S
        return RecurrenceTrace(params=params, states=tuple(states), precision=ctx)

    def _run_recursion(self, params: ModelParams, ctx: PrecisionContext) -> RecurrenceTrace:
        if params.t == 0:
            return self._zero_table(params, ctx)
        ar = ctx.arithmetic()
        A, T = ar.mpf(params.a), ar.mpf(params.t)
        state = self._initial_state(ar, ctx, A, T)
        states = [state]
        for _ in range(params.N):
            state = self._advance(ar, state, A, T)
            states.append(state)
        return RecurrenceTrace(params=params, states=tuple(states), precision=ctx)

    def algebraic_residual(self, trace: RecurrenceTrace) -> float:
        """Máximo de los residuos de ω_k² = R_k θ_k θ_{k-1} y de la relación cuadrática."""
        return max(self._omega_squared_residual(trace), self._quadratic_residual(trace))

    def build_trace(self, params: ModelParams,
                    ctx: Optional[PrecisionContext] = None) -> RecurrenceTrace:
        """
        Construye la traza k = 0..N aplicando la política de escalado de precisión.

        Args:
            params: Parámetros del modelo
            ctx: Contexto inicial (estándar por defecto)

        Returns:
            RecurrenceTrace certificada por las identidades algebraicas
        """
        ctx = ctx or PrecisionContext()
        if params.t == 0:
            return self._zero_table(params, ctx)

        if not ctx.is_extended:
            try:
                trace = self._run_recursion(params, ctx)
                residual = self.algebraic_residual(trace)
                if residual <= self.standard_threshold:
                    return trace
                reason = f"residuo algebraico {residual:.2e}"
            except DegenerateRecursionError as e:
                reason = str(e)
            self._log(f"⚠️  {params.to_dict()}: escalando a precisión extendida ({reason})")
            ctx = ctx.escalated()

        digits = ctx.digits
        while True:
            current = ctx.with_digits(digits)
            try:
                trace = self._run_recursion(params, current)
                residual = self.algebraic_residual(trace)
                if residual <= self.extended_threshold:
                    return trace
                reason = f"residuo algebraico {residual:.2e} con {digits} dígitos"
            except DegenerateRecursionError as e:
                reason = f"{e} con {digits} dígitos"
            if 2 * digits > ctx.max_digits:
                break
            digits *= 2
            self._log(f"🔁 {params.to_dict()}: reintentando con {digits} dígitos ({reason})")

        print(f"❌ Precisión inalcanzable para {params.to_dict()}: {reason}", file=sys.stderr)
        raise PrecisionUnattainableError(
            f"No se pudo certificar la recursión para {params.to_dict()}: {reason}"
        )

    # ------------------------------------------------------------------
    # Distribución
    # ------------------------------------------------------------------

    def _log_cdf(self, trace: RecurrenceTrace):
        """log F_N = Σ_k [log h_k(t) - log h_k(0)], acumulado como cocientes R_i / (i(i+a))."""
        params = trace.params
        ctx = trace.precision
        ar = ctx.arithmetic()
        A = ar.mpf(params.a)
        N = params.N
        log_F = N * ar.mpf(log_regularized_upper_gamma(A + 1, ar.mpf(params.t), ctx))
        for state in trace.states[1:N]:
            i = state.k
            log_F += (N - i) * ar.log(state.R / (i * (i + A)))
        return log_F

    @staticmethod
    def _H_from_trace(trace: RecurrenceTrace):
        """H_N = N(N+a) + ζ_N = Σ_{i<N} θ_i, sin diferenciación numérica."""
        theta = trace.theta
        total = theta[0] * 0
        for value in theta[:trace.params.N]:
            total += value
        return total

    def compute_cdf(self, params: ModelParams, ctx: Optional[PrecisionContext] = None,
                    with_trace: bool = True) -> DistributionResult:
        """
        Calcula F_N(t) y H_N(t).

        Args:
            params: Parámetros del modelo
            ctx: Contexto de precisión inicial
            with_trace: Adjunta la traza completa al resultado

        Returns:
            DistributionResult; F = 0 con underflow=True si log F cae bajo el menor float
        """
        trace = self.build_trace(params, ctx)
        if params.t == 0:
            return DistributionResult(F=1.0, log_F=0.0, H=0.0, trace=trace if with_trace else None,
                                      precision_mode=trace.precision.mode)
        log_F = float(self._log_cdf(trace))
        H = float(self._H_from_trace(trace))
        underflow = log_F < LOG_FLOAT_MIN
        F = 0.0 if underflow else min(1.0, math.exp(log_F))
        return DistributionResult(F=F, log_F=min(log_F, 0.0), H=H,
                                  trace=trace if with_trace else None,
                                  precision_mode=trace.precision.mode, underflow=underflow)

    def compute_H(self, params: ModelParams, ctx: Optional[PrecisionContext] = None) -> float:
        """H_N = t ∂ₜ log F_N a partir de ζ_N de la traza."""
        if params.t == 0:
            return 0.0
        return float(self._H_from_trace(self.build_trace(params, ctx)))

    def compute_H_prime(self, params: ModelParams, ctx: Optional[PrecisionContext] = None) -> float:
        """∂ₜH_N exacto: t ∂ₜH_N = ζ_N + R_N = -ω_N."""
        if params.t <= 0:
            raise DomainError("compute_H_prime requiere t > 0")
        trace = self.build_trace(params, ctx)
        return float(-trace.omega[params.N] / params.t)

    def pdf_smallest(self, params: ModelParams, ctx: Optional[PrecisionContext] = None) -> float:
        """Densidad p_N(t) = -F_N(t) H_N(t) / t."""
        if params.t <= 0:
            raise DomainError("pdf_smallest requiere t > 0")
        result = self.compute_cdf(params, ctx, with_trace=False)
        if result.underflow:
            return 0.0
        return max(0.0, -result.F * result.H / params.t)

    def tabulate_survival(self, N: int, a: float, t_max: float, n_grid: int = 801,
                          ctx: Optional[PrecisionContext] = None) -> Callable:
        """
        Interpolante PCHIP de log F_N sobre [0, t_max].

        Returns:
            Función vectorizada t -> F_N(t); más allá de t_max extrapola
            linealmente en log.
        """
        grid = np.linspace(0.0, t_max, n_grid)
        log_values = np.array([
            self.compute_cdf(ModelParams(N, a, float(t)), ctx, with_trace=False).log_F
            for t in grid
        ])
        log_values = np.maximum(log_values, LOG_FLOAT_MIN)
        interpolant = PchipInterpolator(grid, log_values, extrapolate=False)
        tail_slope = (log_values[-1] - log_values[-2]) / (grid[-1] - grid[-2])

        def survival(t):
            t = np.asarray(t, dtype=float)
            inside = np.clip(t, 0.0, t_max)
            log_s = interpolant(inside)
            log_s = np.where(t > t_max, log_values[-1] + tail_slope * (t - t_max), log_s)
            return np.exp(np.minimum(log_s, 0.0))

        return survival

    # ------------------------------------------------------------------
    # Oráculo de Hankel
    # ------------------------------------------------------------------

    def _log_hankel_det(self, ar, ctx: PrecisionContext, N: int, log_moments: List):
        """log det[μ_{i+j}] con equilibrado diagonal y dígitos certificados."""
        diag = [log_moments[2 * i] for i in range(N)]
        scaled = [[ar.exp(log_moments[i + j] - (diag[i] + diag[j]) / 2) for j in range(N)]
                  for i in range(N)]
        if ctx.is_extended:
            matrix = ar.matrix(scaled)
            det = ar.det(matrix)
            lost = float(ar.log10(ar.cond(matrix))) if N > 1 else 0.0
        else:
            matrix = np.array(scaled, dtype=float)
            sign, logdet = np.linalg.slogdet(matrix)
            det = sign * math.exp(logdet) if sign != 0 else 0.0
            lost = float(np.log10(np.linalg.cond(matrix))) if N > 1 else 0.0
        certified = ctx.digits - lost
        if not det > 0 or certified < MIN_CERTIFIED_DIGITS:
            raise ConditioningError(
                f"Determinante de Hankel con {certified:.1f} dígitos certificados (N={N})",
                certified,
            )
        return ar.log(det) + sum(diag)

    def hankel_oracle_cdf(self, params: ModelParams,
                          ctx: Optional[PrecisionContext] = None) -> float:
        """
        Oráculo independiente: F_N(t) = det[Γ(i+j+a+1, t)] / det[Γ(i+j+a+1)].

        Args:
            params: Parámetros del modelo (N <= 12 en doble, N <= 30 en extendida)
            ctx: Contexto de precisión

        Returns:
            F_N(t) como float
        """
        ctx = ctx or PrecisionContext()
        limit = 30 if ctx.is_extended else 12
        if params.N > limit:
            raise DomainError(f"El oráculo de Hankel admite N <= {limit} en modo {ctx.mode}")
        ar = ctx.arithmetic()
        A, T = ar.mpf(params.a), ar.mpf(params.t)
        size = 2 * params.N - 1
        log_mu_t = [ar.mpf(log_upper_incomplete_gamma(m + 1 + A, T, ctx)) for m in range(size)]
        log_mu_0 = [ar.loggamma(m + 1 + A) for m in range(size)]
        log_F = (self._log_hankel_det(ar, ctx, params.N, log_mu_t)
                 - self._log_hankel_det(ar, ctx, params.N, log_mu_0))
        return float(ar.exp(log_F))

    # ------------------------------------------------------------------
    # Identidades
    # ------------------------------------------------------------------

    @staticmethod
    def _omega_squared_residual(trace: RecurrenceTrace) -> float:
        theta, omega = trace.theta, trace.omega
        worst = 0.0
        for k in range(1, trace.params.N + 1):
            lhs = omega[k] ** 2
            rhs = trace.states[k].R * theta[k] * theta[k - 1]
            worst = max(worst, _relative(lhs - rhs, lhs, rhs))
        return worst

    @staticmethod
    def _quadratic_residual(trace: RecurrenceTrace) -> float:
        theta, omega = trace.theta, trace.omega
        a, t = _native_pair(trace)
        worst = 0.0
        for k in range(1, trace.params.N + 1):
            zeta = trace.states[k].zeta
            th, om = theta[k], omega[k]
            t1 = om ** 2
            t2 = th * (th - 2 * k - a + t) * om
            t3 = th * k * t * (k + a)
            t4 = th * (th + t) * zeta
            worst = max(worst, _relative(t1 - t2 - t3 - t4, t1, t2, t3, t4))
        return worst

    @staticmethod
    def _omega_pair_residuals(trace: RecurrenceTrace) -> Tuple[float, float]:
        theta, omega = trace.theta, trace.omega
        _, t = _native_pair(trace)
        states = trace.states
        N = trace.params.N
        worst_sum = worst_diff = 0.0
        for k in range(N):
            lhs = omega[k + 1] + omega[k]
            rhs = (t - states[k].S) * theta[k]
            worst_sum = max(worst_sum, _relative(lhs - rhs, omega[k + 1], omega[k], rhs))
        for k in range(1, N):
            lhs = (t - states[k].S) * (omega[k] - omega[k + 1])
            r1 = theta[k - 1] * states[k].R
            r2 = theta[k + 1] * states[k + 1].R
            worst_diff = max(worst_diff, _relative(lhs - r1 + r2, lhs, r1, r2))
        return worst_sum, worst_diff

    @staticmethod
    def _laguerre_freud_residuals(trace: RecurrenceTrace) -> Tuple[float, float]:
        """Par de Laguerre-Freud de segundo orden, usado sólo como validador."""
        a, t = _native_pair(trace)
        R = [s.R for s in trace.states]
        S = [s.S for s in trace.states]
        worst_R = worst_S = 0.0
        for k in range(trace.params.N - 1):
            lhs = R[k + 2] - R[k]
            p1 = S[k + 1] * (2 * k + 4 - S[k + 1] + a + t)
            p2 = S[k] * (2 * k - S[k] + a + t)
            worst_R = max(worst_R, _relative(lhs - p1 + p2 + 2 * t, R[k + 2], R[k], p1, p2))
            lhs = S[k + 1] * (S[k + 1] - t)
            q1 = R[k + 1] * (2 * k + 1 - S[k + 1] - S[k] + a + t)
            q2 = R[k + 2] * (2 * k + 5 - S[k + 2] - S[k + 1] + a + t)
            worst_S = max(worst_S, _relative(lhs - q1 + q2, lhs, q1, q2))
        return worst_R, worst_S

    def _algebraic_sigma_residual(self, trace: RecurrenceTrace) -> float:
        """σ-forma de Painlevé V con H' y H'' exactos a partir de la traza; 0 si t = 0 o θ_N = 0."""
        params = trace.params
        N, t = params.N, params.t
        theta, omega = trace.theta, trace.omega
        if t == 0 or theta[N] == 0:
            return 0.0
        R_N = trace.states[N].R
        H = self._H_from_trace(trace)
        H_prime = -omega[N] / t
        H_second = (R_N * theta[N] - omega[N] ** 2 / theta[N]) / (t * t)
        return abs(p5_residual(H, H_prime, H_second, t, N, params.a))

    def _shifted_traces(self, trace: RecurrenceTrace, h: float) -> List[RecurrenceTrace]:
        params = trace.params
        return [
            trace if j == 0 else self._run_recursion(params.with_t(params.t + j * h), trace.precision)
            for j in (-2, -1, 0, 1, 2)
        ]

    def validate_identities(self, trace: RecurrenceTrace, ctx: Optional[PrecisionContext] = None,
                            step: Optional[float] = None) -> IdentityReport:
        """
        Evalúa el conjunto de identidades algebraicas y diferenciales sobre una traza.

        Args:
            trace: Traza completa hasta N
            ctx: No se usa para recalcular la traza; las re-ejecuciones en t ± h
                 usan la precisión de la propia traza
            step: Paso de diferencias finitas (por defecto min(1e-3, t/4))

        Returns:
            IdentityReport con residuos y umbrales
        """
        params = trace.params
        algebraic_threshold = self.extended_threshold * 1e3 if trace.precision.is_extended \
            else self.standard_threshold
        report = IdentityReport(params=params)

        def record(name: str, value: float, threshold: float):
            report.residuals[name] = float(value)
            report.thresholds[name] = threshold

        record("omega_squared", self._omega_squared_residual(trace), algebraic_threshold)
        record("quadratic_relation", self._quadratic_residual(trace), algebraic_threshold)
        omega_sum, omega_diff = self._omega_pair_residuals(trace)
        record("omega_sum", omega_sum, algebraic_threshold)
        record("omega_difference", omega_diff, algebraic_threshold)
        lf_R, lf_S = self._laguerre_freud_residuals(trace)
        record("laguerre_freud_R", lf_R, algebraic_threshold)
        record("laguerre_freud_S", lf_S, algebraic_threshold)

        if params.t <= 0:
            return report

        record("sigma_form_algebraic", self._algebraic_sigma_residual(trace), algebraic_threshold)

        h = step if step is not None else min(1e-3, params.t / 4.0)
        traces = self._shifted_traces(trace, h)
        t = params.t
        N = params.N

        ar = trace.precision.arithmetic()
        worst_s1 = worst_s2 = 0.0
        for k in range(N):
            S_values = [tr.states[k].S for tr in traces]
            dS = _fd_first(S_values, h)
            S_k, R_k, R_next = trace.states[k].S, trace.states[k].R, trace.states[k + 1].R
            worst_s1 = max(worst_s1, _relative(S_k - R_next + R_k - t * dS, S_k, R_next, R_k, t * dS))
            logR_values = [ar.log(tr.states[k + 1].R) for tr in traces]
            dlogR = _fd_first(logR_values, h)
            S_next = trace.states[k + 1].S
            worst_s2 = max(worst_s2, _relative(2 - S_next + S_k - t * dlogR, 2, S_next, S_k))
        record("schlesinger_S", worst_s1, 1e-4)
        record("schlesinger_R", worst_s2, 1e-4)

        H_values = [self._H_from_trace(tr) for tr in traces]
        H_prime = _fd_first(H_values, h)
        H_second = _fd_second(H_values, h)
        record("sigma_form_fd", abs(p5_residual(H_values[2], H_prime, H_second, t, N, params.a)), 1e-4)

        log_F_values = [self._log_cdf(tr) for tr in traces]
        dlogF = _fd_first(log_F_values, h)
        record("zeta_consistency", abs(float(H_values[2] - t * dlogF)), 1e-5)
        return report
