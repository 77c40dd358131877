"""
Muestreador de referencia: matrices de Wishart complejas, autovalor mínimo,
distribuciones empíricas y diagnósticos de comparación con la teoría.

Cada muestra es función pura de (semilla, bloque, índice dentro del bloque):
el bloque b usa Philox con SeedSequence(seed, spawn_key=(b,)), por lo que el
número de hilos sólo cambia quién calcula cada bloque, nunca los valores.
"""

import math
import struct
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from .painleve import HardEdgeSolver, PIIISolution
from .utils.errors import DomainError, PrecisionUnattainableError

BLOCK_SIZE = 2000
CHUNK_SIZE = 250
RNG_ID = "philox4x64-sseq-b2000"
DUMP_MAGIC = b"WSHMIN01"
DUMP_HEADER = struct.Struct("<8sQQQQ24s")
SAMPLING_METHODS = ("householder", "lapack")
BISECTION_RTOL = 1e-10
MAX_BISECTION_STEPS = 400


@dataclass(frozen=True)
class SamplerConfig:
    """
    Configuración del muestreo.

    Args:
        N: Número de columnas de X (tamaño de W = X†X)
        M: Número de filas, M >= N (a = M - N)
        n_samples: Total de muestras, independiente de n_streams
        seed: Semilla de 64 bits sin signo
        n_streams: Hilos de trabajo
        method: 'householder' (bidiagonalización + bisección) o 'lapack'
    """

    N: int
    M: int
    n_samples: int
    seed: int = 0
    n_streams: int = 1
    method: str = "householder"

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"N debe ser >= 1, recibido {self.N}")
        if self.M < self.N:
            raise DomainError(f"M debe ser >= N (M={self.M}, N={self.N})")
        if self.n_samples < 1:
            raise DomainError("n_samples debe ser >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed debe ser un entero de 64 bits sin signo")
        if self.n_streams < 1:
            raise DomainError("n_streams debe ser >= 1")
        if self.method not in SAMPLING_METHODS:
            raise DomainError(f"Método desconocido: {self.method!r}")

    @property
    def a(self) -> int:
        return self.M - self.N

    @property
    def n_blocks(self) -> int:
        return -(-self.n_samples // BLOCK_SIZE)

    def to_dict(self) -> Dict:
        return {"N": self.N, "M": self.M, "a": self.a, "n_samples": self.n_samples,
                "seed": self.seed, "n_streams": self.n_streams, "method": self.method,
                "rng": RNG_ID}


@dataclass(frozen=True)
class EmpiricalCDF:
    """Muestras ordenadas de λ_min y estimadores empíricos."""

    values: np.ndarray

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalCDF":
        values = np.sort(np.asarray(samples, dtype=float))
        if values.size == 0:
            raise DomainError("Se requiere al menos una muestra")
        values.flags.writeable = False
        return cls(values=values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def survival(self, t):
        """Proporción de muestras >= t."""
        below = np.searchsorted(self.values, t, side="left")
        result = (self.n - below) / self.n
        return float(result) if np.ndim(result) == 0 else result

    def cdf(self, t):
        """Proporción de muestras < t."""
        return 1.0 - self.survival(t)

    def mean(self) -> float:
        return float(np.mean(self.values))

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame({"sample": self.values})


def _householder_vectors(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Reflectores de Householder por lotes: H x = β e₁ con |β| = ‖x‖.

    Returns:
        (v, 2/(v*v), ‖x‖) con v = x - β e₁
    """
    norm = np.linalg.norm(x, axis=1)
    alpha = x[:, 0]
    phase = np.where(np.abs(alpha) > 0, alpha / np.where(alpha == 0, 1, np.abs(alpha)), 1.0)
    v = x.copy()
    v[:, 0] = alpha + phase * norm
    vnorm2 = np.sum(np.abs(v) ** 2, axis=1)
    scale = np.where(vnorm2 > 0, 2.0 / np.where(vnorm2 == 0, 1, vnorm2), 0.0)
    return v, scale, norm


def bidiagonalize(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bidiagonalización de Householder de un lote de matrices complejas M×N (M >= N).

    Las fases de la bidiagonal se absorben con escalados unitarios diagonales,
    así que basta devolver los módulos.

    Args:
        X: Arreglo (B, M, N)

    Returns:
        (d, e): diagonal (B, N) y superdiagonal (B, N-1), reales >= 0
    """
    A = np.array(X, dtype=complex, copy=True)
    B, M, N = A.shape
    d = np.zeros((B, N))
    e = np.zeros((B, max(N - 1, 0)))
    for j in range(N):
        v, scale, norm = _householder_vectors(A[:, j:, j])
        block = A[:, j:, j:]
        projection = np.matmul(v.conj()[:, None, :], block)[:, 0, :]
        block -= scale[:, None, None] * v[:, :, None] * projection[:, None, :]
        d[:, j] = norm
        if j < N - 1:
            w, scale, norm = _householder_vectors(A[:, j, j + 1:].conj())
            block = A[:, j:, j + 1:]
            projection = np.matmul(block, w[:, :, None])[:, :, 0]
            block -= scale[:, None, None] * projection[:, :, None] * w.conj()[:, None, :]
            e[:, j] = norm
    return d, e


def smallest_singular_value(d: np.ndarray, e: np.ndarray, rtol: float = BISECTION_RTOL) -> np.ndarray:
    """
    σ_min de bidiagonales reales por bisección sobre la tridiagonal de Golub-Kahan.

    La tridiagonal de diagonal nula y subdiagonal (d₁, e₁, d₂, …, d_N) tiene
    autovalores ±σᵢ; el número de autovalores menores que x, menos N, cuenta
    los σᵢ < x (secuencia de Sturm).
    """
    B, N = d.shape
    offdiag = np.empty((B, 2 * N - 1))
    offdiag[:, 0::2] = d
    offdiag[:, 1::2] = e
    squared = offdiag ** 2
    tiny = np.finfo(float).tiny

    columns = d ** 2
    columns[:, 1:] += e ** 2
    lo = np.zeros(B)
    hi = np.sqrt(np.min(columns, axis=1))

    def count_below(x):
        q = -x
        count = (q < 0).astype(int)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            for i in range(2 * N - 1):
                q = np.where(q == 0, -tiny, q)
                q = -x - squared[:, i] / q
                count += q < 0
        return count - N

    for _ in range(MAX_BISECTION_STEPS):
        active = (hi - lo) > rtol * lo
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        below = count_below(mid) >= 1
        hi = np.where(active & below, mid, hi)
        lo = np.where(active & ~below, mid, lo)
    else:
        raise PrecisionUnattainableError("La bisección de σ_min no convergió")
    return 0.5 * (lo + hi)


class WishartSampler:
    """
    Muestreador de λ_min para W = X†X con X de M×N gaussiana compleja
    (partes real e imaginaria de media 0 y varianza 1/2).
    """

    def __init__(self, verbose: bool = False):
        """
        Inicializa el muestreador.

        Args:
            verbose: Muestra barra de progreso y mensajes en stderr
        """
        self.verbose = verbose

    @staticmethod
    def block_generator(seed: int, block: int) -> np.random.Generator:
        """Generador del bloque: función pura de (seed, block)."""
        return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))

    @staticmethod
    def _min_eig(X: np.ndarray, method: str) -> np.ndarray:
        if method == "lapack":
            return np.linalg.svd(X, compute_uv=False)[:, -1] ** 2
        d, e = bidiagonalize(X)
        return smallest_singular_value(d, e) ** 2

    def _sample_block(self, cfg: SamplerConfig, block: int) -> np.ndarray:
        size = min(BLOCK_SIZE, cfg.n_samples - block * BLOCK_SIZE)
        rng = self.block_generator(cfg.seed, block)
        pieces = []
        shape = (CHUNK_SIZE, cfg.M, cfg.N)
        for start in range(0, size, CHUNK_SIZE):
            X = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * math.sqrt(0.5)
            pieces.append(self._min_eig(X[: size - start], cfg.method))
        return np.concatenate(pieces)

    def draw(self, cfg: SamplerConfig) -> np.ndarray:
        """
        Muestras de λ_min en orden de índice.

        Args:
            cfg: Configuración del muestreo

        Returns:
            Arreglo de n_samples valores > 0
        """
        blocks = range(cfg.n_blocks)
        with ThreadPoolExecutor(max_workers=cfg.n_streams) as executor:
            results = list(tqdm(executor.map(lambda b: self._sample_block(cfg, b), blocks),
                                total=cfg.n_blocks, desc=f"Muestreo N={cfg.N} M={cfg.M}",
                                disable=not self.verbose, file=sys.stderr))
        samples = np.concatenate(results)
        if not np.all(samples > 0):
            print(f"❌ Muestras no positivas en {cfg.to_dict()}", file=sys.stderr)
            raise PrecisionUnattainableError("Se obtuvo un λ_min no positivo")
        if self.verbose:
            print(f"✅ {cfg.n_samples} muestras generadas ({cfg.method}, {cfg.n_streams} hilo(s))",
                  file=sys.stderr)
        return samples

    def sample_min_eig(self, cfg: SamplerConfig) -> EmpiricalCDF:
        """Distribución empírica de λ_min."""
        return EmpiricalCDF.from_samples(self.draw(cfg))


def ks_distance(emp: EmpiricalCDF, exact: Callable) -> float:
    """
    Estadístico de Kolmogorov-Smirnov entre la supervivencia empírica y la exacta.

    Se evalúa a ambos lados de cada salto de la función escalonada.
    """
    if emp.n == 0:
        raise DomainError("EmpiricalCDF vacía")
    exact_values = np.asarray(exact(emp.values), dtype=float) * np.ones(emp.n)
    index = np.arange(emp.n)
    at_jump = (emp.n - index) / emp.n
    after_jump = (emp.n - index - 1) / emp.n
    return float(max(np.max(np.abs(at_jump - exact_values)), np.max(np.abs(after_jump - exact_values))))


def correction_diagnostic(emp: EmpiricalCDF, N: int, a: float, p3: PIIISolution, grid,
                          solver: Optional[HardEdgeSolver] = None,
                          min_count: int = 50) -> pd.DataFrame:
    """
    Diagnóstico de la corrección 1/N: N·log(F̂_N(x/N)/F_∞(x)) frente a (a/2)f(x).

    Args:
        emp: Distribución empírica
        N: Tamaño de matriz
        a: Exponente de Laguerre
        p3: Solución de Painlevé III para a
        grid: Puntos x
        solver: HardEdgeSolver a reutilizar
        min_count: Mínimo de muestras por encima de x/N para usar el punto

    Returns:
        DataFrame con x, empirical_survival, F_inf, diagnostic, prediction,
        std_error e insufficient
    """
    solver = solver or HardEdgeSolver()
    rows = []
    for x in np.asarray(grid, dtype=float):
        survival = emp.survival(x / N)
        F_inf = solver.limiting_cdf(p3, float(x))
        f = float(p3.f_at(x)[0]) if x > 0 else 0.0
        insufficient = survival * emp.n < min_count or survival >= 1.0
        if insufficient:
            diagnostic = std_error = float("nan")
        else:
            diagnostic = N * math.log(survival / F_inf)
            std_error = N * math.sqrt(survival * (1 - survival) / emp.n) / survival
        rows.append({
            "x": float(x),
            "empirical_survival": survival,
            "F_inf": F_inf,
            "diagnostic": diagnostic,
            "prediction": 0.5 * a * f,
            "std_error": std_error,
            "insufficient": bool(insufficient),
        })
    table = pd.DataFrame(rows)
    flagged = int(table["insufficient"].sum())
    if flagged:
        print(f"⚠️  {flagged} punto(s) con muestras insuficientes en el diagnóstico", file=sys.stderr)
    return table


def write_sample_dump(path: Union[str, Path], samples: np.ndarray, cfg: SamplerConfig) -> Path:
    """Volcado binario: cabecera de 64 bytes y float64 little-endian."""
    path = Path(path)
    samples = np.asarray(samples, dtype="<f8")
    header = DUMP_HEADER.pack(DUMP_MAGIC, cfg.N, cfg.M, samples.size, cfg.seed,
                              RNG_ID.encode("ascii"))
    with open(path, "wb") as handle:
        handle.write(header)
        handle.write(samples.tobytes())
    return path


def read_sample_dump(path: Union[str, Path]) -> Tuple[Dict, np.ndarray]:
    """
    Lee un volcado binario de muestras.

    Returns:
        (cabecera, muestras) con la cabecera como diccionario N, M, n, seed, rng
    """
    data = Path(path).read_bytes()
    if len(data) < DUMP_HEADER.size:
        raise ValueError(f"Volcado truncado: {path}")
    magic, N, M, n, seed, rng = DUMP_HEADER.unpack_from(data)
    if magic != DUMP_MAGIC:
        raise ValueError(f"Firma de volcado inválida en {path}: {magic!r}")
    samples = np.frombuffer(data, dtype="<f8", offset=DUMP_HEADER.size)
    if samples.size != n:
        raise ValueError(f"El volcado declara {n} muestras y contiene {samples.size}")
    header = {"N": N, "M": M, "n": n, "seed": seed, "rng": rng.rstrip(b"\0").decode("ascii")}
    return header, samples.astype(float)


def write_sample_csv(path: Union[str, Path], samples: np.ndarray) -> Path:
    """Exporta las muestras a CSV (columna 'sample')."""
    path = Path(path)
    pd.DataFrame({"sample": np.asarray(samples, dtype=float)}).to_csv(
        path, index=False, float_format="%.17g")
    return path
