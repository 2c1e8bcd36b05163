"""Finite constellations approximating a standard normal, and their
chi-square divergence through an AWGN channel.

Four real constellations are provided (equilattice, quantile, random walk,
Gauss-Hermite).  Each has mean 0 and variance 1 exactly, so the derived
complex product constellation matches the first two moments of the thermal
state it emulates.  The chi-square divergence of the constellation's AWGN
output from the Gaussian output is computed two independent ways: a Hermite
moment series and a closed-form kernel double sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf
from scipy.linalg import eigh_tridiagonal
from scipy.special import comb
from scipy.stats import norm

from .errors import NumericFailure

KINDS = ("equilattice", "quantile", "random_walk", "gauss_hermite")

_KERNEL_DPS = 50  # digits for the kernel double sum; chi2 can be ~1e-30


@dataclass(frozen=True)
class RealConstellation:
    """Finite set of real points with probabilities approximating N(0, 1)."""

    points: np.ndarray
    probs: np.ndarray
    kind: str
    m: int


@dataclass(frozen=True)
class ComplexConstellation:
    """m^2 complex points emulating the P function of a thermal state with
    mean photon number ``N``."""

    points: np.ndarray
    probs: np.ndarray
    N: float


def _finalize(points: np.ndarray, probs: np.ndarray, kind: str) -> RealConstellation:
    points = np.asarray(points, dtype=float)
    probs = np.asarray(probs, dtype=float)
    order = np.argsort(points)
    points, probs = points[order], probs[order]
    points.setflags(write=False)
    probs.setflags(write=False)
    return RealConstellation(points=points, probs=probs, kind=kind, m=len(points))


def _check_m(m: int) -> None:
    if m < 2:
        raise ValueError(f"constellation needs m >= 2 points, got {m}")


def make_equilattice(m: int) -> RealConstellation:
    """m equally-spaced, equally-likely points with unit variance."""
    _check_m(m)
    delta = math.sqrt(12.0 / (m * m - 1.0))
    points = delta * (np.arange(m) - (m - 1) / 2.0)
    probs = np.full(m, 1.0 / m)
    return _finalize(points, probs, "equilattice")


def make_quantile(m: int) -> RealConstellation:
    """Midpoint-quantile points of the standard normal, equally likely,
    rescaled by a single factor so the variance is exactly 1."""
    _check_m(m)
    raw = norm.ppf((2.0 * np.arange(1, m + 1) - 1.0) / (2.0 * m))
    raw = (raw - raw[::-1]) / 2.0  # enforce exact symmetry
    probs = np.full(m, 1.0 / m)
    var = float(probs @ raw**2)
    return _finalize(raw / math.sqrt(var), probs, "quantile")


def make_random_walk(m: int) -> RealConstellation:
    """Positions of an (m-1)-step symmetric random walk, rescaled to unit
    variance; probabilities are exact binomial weights."""
    _check_m(m)
    j = np.arange(m)
    points = (2.0 * j - (m - 1)) / math.sqrt(m - 1)
    weights = np.array([comb(m - 1, int(i), exact=True) for i in j], dtype=float)
    probs = weights / 2.0 ** (m - 1)
    return _finalize(points, probs, "random_walk")


def make_gauss_hermite(m: int) -> RealConstellation:
    """Gauss-Hermite nodes and weights for the standard normal weight
    (probabilists' convention), via the Jacobi-matrix eigenproblem."""
    _check_m(m)
    try:
        nodes, vecs = eigh_tridiagonal(np.zeros(m), np.sqrt(np.arange(1.0, m)))
    except np.linalg.LinAlgError as e:  # pragma: no cover - scipy is robust here
        raise NumericFailure("Gauss-Hermite eigensolver did not converge") from e
    weights = vecs[0] ** 2
    # restore exact +/- symmetry (eigensolver output is symmetric only to
    # machine precision)
    nodes = (nodes - nodes[::-1]) / 2.0
    weights = (weights + weights[::-1]) / 2.0
    weights /= weights.sum()
    return _finalize(nodes, weights, "gauss_hermite")


def make_constellation(kind: str, m: int) -> RealConstellation:
    """Dispatch on the constellation kind name."""
    makers = {
        "equilattice": make_equilattice,
        "quantile": make_quantile,
        "random_walk": make_random_walk,
        "gauss_hermite": make_gauss_hermite,
    }
    if kind not in makers:
        raise ValueError(f"unknown constellation kind {kind!r}; choose from {KINDS}")
    return makers[kind](m)


def _normalized_moment_stream(c: RealConstellation):
    """Yield (k, E[he_k], max_j he_k(x_j)^2) for k = 0, 1, 2, ... where
    he_k = He_k / sqrt(k!) is the orthonormal Hermite polynomial.

    Evaluated in extended precision: the moments of symmetric constellations
    cancel catastrophically for large k.
    """
    x = c.points.astype(np.longdouble)
    p = c.probs.astype(np.longdouble)
    h_prev = np.ones_like(x)
    h = x.copy()
    yield 0, np.longdouble(1.0), np.longdouble(1.0)
    k = 1
    while True:
        yield k, p @ h, np.max(h * h)
        h_prev, h = h, (x * h - np.sqrt(np.longdouble(k)) * h_prev) / np.sqrt(
            np.longdouble(k + 1)
        )
        k += 1


def hermite_moment(c: RealConstellation, k: int) -> float:
    """E[He_k(X)] for probabilists' Hermite polynomials.

    Internally uses the orthonormal recurrence in 80-bit precision and scales
    back by sqrt(k!); overflows to inf for k beyond roughly 300.
    """
    if k < 0:
        raise ValueError(f"Hermite order must be >= 0, got {k}")
    for kk, mom, _ in _normalized_moment_stream(c):
        if kk == k:
            scale = np.exp(np.longdouble(0.5) * np.longdouble(math.lgamma(k + 1)))
            return float(mom * scale)


def classical_chi2_series(c: RealConstellation, s: float, tol: float = 1e-30,
                          kmax: int = 100_000) -> float:
    """chi^2 of the constellation's AWGN(s) output from the Gaussian output,
    by the Hermite moment series.

    The series is sum_{k>=1} (s/(1+s))^k E[he_k]^2 with nonnegative terms, so
    the running sum is a lower bound; summation stops once the geometric
    envelope (s/(1+s))^k max_j he_k(x_j)^2 stays below ``tol`` for 5
    consecutive orders.
    """
    if s <= 0.0:
        raise ValueError(f"signal-to-noise ratio s must be > 0, got {s}")
    if tol <= 0.0:
        raise ValueError(f"tolerance must be > 0, got {tol}")
    r = np.longdouble(s) / np.longdouble(1.0 + s)
    total = np.longdouble(0.0)
    rk = np.longdouble(1.0)
    below = 0
    for k, mom, hmax in _normalized_moment_stream(c):
        if k == 0:
            continue
        rk *= r
        term = rk * mom * mom
        if not np.isfinite(term):
            raise NumericFailure(f"chi-square series term overflowed at order {k}")
        total += term
        if rk * hmax < tol:
            below += 1
            if below >= 5:
                return float(total)
        else:
            below = 0
        if k >= kmax:
            raise NumericFailure(f"chi-square series did not converge by order {kmax}")


def classical_chi2_kernel(c: RealConstellation, s: float) -> float:
    """The same chi^2 by the closed-form kernel double sum
    1 + chi^2 = sum_ij p_i p_j K_s(x_i, x_j).

    Evaluated in high precision: the sum is O(1) while chi^2 itself can be
    as small as 1e-30, so the trailing -1 cancels catastrophically in double.
    The -1 is absorbed term by term as sum_ij p_i p_j (K - 1), which removes
    the (sum p)^2 - 1 rounding offset of the stored probabilities; that
    offset is linear in the input rounding while every other term enters
    squared.
    """
    if s <= 0.0:
        raise ValueError(f"signal-to-noise ratio s must be > 0, got {s}")
    with mp.workdps(_KERNEL_DPS):
        ss = mpf(s)
        pref = (1 + ss) / mp.sqrt(1 + 2 * ss)
        a = ss / (2 * (1 + 2 * ss))
        x = [mpf(v) for v in c.points]
        p = [mpf(v) for v in c.probs]
        total = mpf(0)
        for i in range(c.m):
            for j in range(i, c.m):
                xi, xj = x[i], x[j]
                kij = pref * mp.exp(-a * (ss * (xi - xj) ** 2 - 2 * xi * xj)) - 1
                w = p[i] * p[j]
                total += w * kij if i == j else 2 * w * kij
        return float(total)


def product_constellation(c: RealConstellation, N: float) -> ComplexConstellation:
    """Complex constellation sqrt(N/2) (x_j + i x_k) with product weights,
    emulating the P function of a thermal state of mean photon number N."""
    if N <= 0.0:
        raise ValueError(f"mean photon number N must be > 0, got {N}")
    scale = math.sqrt(N / 2.0)
    zx, zy = np.meshgrid(c.points, c.points, indexing="ij")
    points = scale * (zx + 1j * zy).ravel()
    probs = np.outer(c.probs, c.probs).ravel()
    points.setflags(write=False)
    probs.setflags(write=False)
    return ComplexConstellation(points=points, probs=probs, N=float(N))
