"""
Núcleo de funciones especiales.

Gamma incompleta superior (serie / fracción continua), log-gamma, Bessel I de
orden entero (serie ascendente) y Airy Ai (Maclaurin con dígitos de guarda /
expansión asintótica). Todas las funciones son puras y aceptan un
PrecisionContext; el resultado es un float en modo estándar y un ``mpf`` del
contexto en modo extendido.
"""

import math
from typing import Optional, Tuple

import mpmath

from .errors import DomainError, PrecisionUnattainableError
from .precision import PrecisionContext

MAX_ITERATIONS = 20000

# Cambio de Maclaurin a la expansión asintótica de Ai
AIRY_SWITCHOVER = 8.0
AIRY_RANGE = (-10.0, 20.0)


def _context(ctx: Optional[PrecisionContext]) -> PrecisionContext:
    return ctx if ctx is not None else PrecisionContext()


def log_gamma(x: float, ctx: Optional[PrecisionContext] = None):
    """
    Logaritmo de la función gamma para x > 0.

    Args:
        x: Argumento real positivo
        ctx: Contexto de precisión

    Returns:
        log Γ(x) en la aritmética del contexto
    """
    if x <= 0:
        raise DomainError(f"log_gamma requiere x > 0, recibido {x}")
    ar = _context(ctx).arithmetic()
    return ar.loggamma(ar.mpf(x))


def _log_lower_series(ar, nu, x, tol):
    """log γ(ν, x) por la serie x^ν e^{-x} Σ x^k / (ν(ν+1)...(ν+k))."""
    term = 1 / nu
    total = term
    for n in range(1, MAX_ITERATIONS):
        term *= x / (nu + n)
        total += term
        if ar.fabs(term) <= ar.fabs(total) * tol:
            return nu * ar.log(x) - x + ar.log(total)
    raise PrecisionUnattainableError(f"Serie de gamma incompleta sin converger (nu={nu}, x={x})")


def _log_upper_fraction(ar, nu, x, tol):
    """log Γ(ν, x) por la fracción continua de Legendre (Lentz modificado)."""
    tiny = ar.mpf(1e-300)
    b = x + 1 - nu
    c = 1 / tiny
    d = 1 / b if b != 0 else 1 / tiny
    h = d
    for i in range(1, MAX_ITERATIONS):
        an = -i * (i - nu)
        b += 2
        d = an * d + b
        if ar.fabs(d) < tiny:
            d = tiny
        c = b + an / c
        if ar.fabs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if ar.fabs(delta - 1) <= tol:
            return nu * ar.log(x) - x + ar.log(h)
    raise PrecisionUnattainableError(f"Fracción continua sin converger (nu={nu}, x={x})")


def _log_upper(ar, nu, x, tol):
    nu = ar.mpf(nu)
    x = ar.mpf(x)
    if x == 0:
        return ar.loggamma(nu)
    if x < nu + 1:
        lg = ar.loggamma(nu)
        ratio = ar.exp(_log_lower_series(ar, nu, x, tol) - lg)
        if ratio >= 1:
            raise PrecisionUnattainableError(
                f"Cancelación total en Γ(ν,x) = Γ(ν) - γ(ν,x) (nu={nu}, x={x})"
            )
        return lg + ar.log1p(-ratio)
    return _log_upper_fraction(ar, nu, x, tol)


def log_upper_incomplete_gamma(nu: float, x: float, ctx: Optional[PrecisionContext] = None):
    """
    log Γ(ν, x) sin desbordamiento (útil para ν grandes, p. ej. momentos de Hankel).

    Args:
        nu: Parámetro de forma, > 0
        x: Límite inferior de integración, >= 0
        ctx: Contexto de precisión

    Returns:
        log Γ(ν, x)
    """
    if nu <= 0:
        raise DomainError(f"Gamma incompleta requiere nu > 0, recibido {nu}")
    if x < 0:
        raise DomainError(f"Gamma incompleta requiere x >= 0, recibido {x}")
    ctx = _context(ctx)
    ar = ctx.arithmetic()
    return _log_upper(ar, nu, x, ctx.series_tolerance)


def upper_incomplete_gamma(nu: float, x: float, ctx: Optional[PrecisionContext] = None):
    """
    Γ(ν, x) = ∫ₓ^∞ y^{ν-1} e^{-y} dy.

    Serie para x < ν + 1 y fracción continua en caso contrario.
    """
    ctx = _context(ctx)
    log_value = log_upper_incomplete_gamma(nu, x, ctx)
    return ctx.arithmetic().exp(log_value)


def log_regularized_upper_gamma(nu: float, x: float, ctx: Optional[PrecisionContext] = None):
    """log Q(ν, x) = log Γ(ν, x) - log Γ(ν)."""
    ctx = _context(ctx)
    ar = ctx.arithmetic()
    return log_upper_incomplete_gamma(nu, x, ctx) - ar.loggamma(ar.mpf(nu))


def bessel_i(n: int, x: float, ctx: Optional[PrecisionContext] = None):
    """
    Bessel modificada I_n(x) de orden entero por la serie ascendente.

    Args:
        n: Orden entero (los negativos se reflejan con I_{-n} = I_n)
        x: Argumento real, >= 0
        ctx: Contexto de precisión

    Returns:
        I_n(x) >= 0
    """
    if x < 0:
        raise DomainError(f"bessel_i requiere x >= 0, recibido {x}")
    n = abs(int(n))
    ctx = _context(ctx)
    ar = ctx.arithmetic()
    if x == 0:
        return ar.mpf(1 if n == 0 else 0)

    half = ar.mpf(x) / 2
    term = ar.mpf(1)
    for k in range(1, n + 1):
        term *= half / k
    total = term
    quarter = half * half
    tol = ctx.series_tolerance
    for k in range(1, MAX_ITERATIONS):
        term *= quarter / (k * (n + k))
        total += term
        if term <= total * tol:
            return total
    raise PrecisionUnattainableError(f"Serie de Bessel sin converger (n={n}, x={x})")


def _airy_maclaurin(x: float, dps: int) -> Tuple[object, object, mpmath.MPContext]:
    """Ai y Ai' por la serie de Maclaurin con dps dígitos de trabajo."""
    mp = mpmath.MPContext()
    mp.dps = dps
    X = mp.mpf(x)
    x3 = X ** 3
    c1 = 1 / (mp.cbrt(9) * mp.gamma(mp.mpf(2) / 3))
    c2 = 1 / (mp.cbrt(3) * mp.gamma(mp.mpf(1) / 3))

    t, u = mp.mpf(1), X
    f, g = t, u
    fp_sum, gp_sum = mp.mpf(0), u
    threshold = mp.mpf(10) ** (-dps)
    for k in range(1, MAX_ITERATIONS):
        t *= x3 / ((3 * k - 1) * (3 * k))
        u *= x3 / ((3 * k) * (3 * k + 1))
        f += t
        g += u
        fp_sum += 3 * k * t
        gp_sum += (3 * k + 1) * u
        if abs(t) + abs(u) <= threshold * (abs(f) + abs(g)) and k > 2:
            break
    else:
        raise PrecisionUnattainableError(f"Serie de Airy sin converger en x={x}")

    if X == 0:
        fp, gp = mp.mpf(0), mp.mpf(1)
    else:
        fp, gp = fp_sum / X, gp_sum / X
    return c1 * f - c2 * g, c1 * fp - c2 * gp, mp


def _airy_asymptotic(x: float, dps: int):
    """Ai y Ai' por la expansión asintótica para x grande."""
    mp = mpmath.MPContext()
    mp.dps = dps
    X = mp.mpf(x)
    zeta = 2 * X ** mp.mpf(1.5) / 3
    prefactor = mp.exp(-zeta) / (2 * mp.sqrt(mp.pi))
    u = mp.mpf(1)
    sum_ai, sum_dai = mp.mpf(1), mp.mpf(1)
    previous = mp.inf
    threshold = mp.mpf(10) ** (-dps)
    for k in range(1, 200):
        u *= mp.mpf((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / ((2 * k - 1) * 216 * k)
        v = -mp.mpf(6 * k + 1) / (6 * k - 1) * u
        scale = (-1) ** k / zeta ** k
        term = u * scale
        if abs(term) >= previous:
            break
        sum_ai += term
        sum_dai += v * scale
        previous = abs(term)
        if previous <= threshold:
            break
    ai = prefactor * sum_ai / X ** mp.mpf(0.25)
    dai = -prefactor * X ** mp.mpf(0.25) * sum_dai
    return ai, dai, mp


def airy_pair(x: float, ctx: Optional[PrecisionContext] = None):
    """
    Devuelve (Ai(x), Ai'(x)) en el rango [-10, 20].

    Para x < 8 se usa Maclaurin con dígitos de guarda proporcionales a la
    cancelación e^{2ζ}, ζ = (2/3)|x|^{3/2}; para x >= 8 la expansión asintótica.
    """
    lo, hi = AIRY_RANGE
    if not lo <= x <= hi:
        raise DomainError(f"airy_ai sólo está definida en [{lo}, {hi}], recibido {x}")
    ctx = _context(ctx)
    ar = ctx.arithmetic()
    zeta = 2.0 * abs(x) ** 1.5 / 3.0
    if x < AIRY_SWITCHOVER:
        guard = int(math.ceil(2.0 * zeta / math.log(10.0))) + 10
        ai, dai, _ = _airy_maclaurin(x, ctx.digits + guard)
    else:
        ai, dai, _ = _airy_asymptotic(x, ctx.digits + 5)
    return ar.mpf(ai), ar.mpf(dai)


def airy_ai(x: float, ctx: Optional[PrecisionContext] = None):
    """Función de Airy Ai(x) con error absoluto <= 1e-10 en [-10, 20]."""
    return airy_pair(x, ctx)[0]


def airy_ai_prime(x: float, ctx: Optional[PrecisionContext] = None):
    """Derivada Ai'(x), necesaria para la condición de contorno de Painlevé II."""
    return airy_pair(x, ctx)[1]
