"""Truncated Fock-space numerics: coherent and thermal states, displacement
operators, entropies, relative entropy, and the direct quantum chi-square.

All constructors work at a caller-chosen truncation dimension and record the
actual trace deficit; ``default_dim`` gives a conservative choice.  Factorials
and powers are handled in the log domain throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import NumericFailure, SupportError, TruncationError, TruncationWarning

EIG_FLOOR = 1e-14


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian PSD matrix on a truncated Fock space, trace within
    ``truncation_tol`` of 1."""

    matrix: np.ndarray
    dim: int
    truncation_tol: float


def default_dim(mu: float) -> int:
    """Truncation dimension for states of mean photon number up to ``mu``:
    mu + 8 sigma headroom + 20.  Poisson/geometric tails make this
    conservative."""
    return math.ceil(mu + 8.0 * math.sqrt(mu + 1.0) + 20.0)


def coherent_state(z: complex, dim: int) -> np.ndarray:
    """Number-basis amplitudes of the coherent state |z>, length ``dim``.

    a_n = exp(-|z|^2/2) z^n / sqrt(n!), built by a stable multiplicative
    recurrence; |a_n|^2 is Poisson with mean |z|^2.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if abs(z) ** 2 > dim:
        warnings.warn(
            f"coherent state with |z|^2 = {abs(z)**2:.1f} at dim = {dim}: "
            "severe truncation", TruncationWarning, stacklevel=2)
    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0
    if dim > 1:
        n = np.arange(1, dim)
        amps[1:] = np.cumprod(z / np.sqrt(n))
    amps *= math.exp(-abs(z) ** 2 / 2.0)
    return amps


def thermal_state(N: float, dim: int) -> DensityOperator:
    """Thermal state of mean photon number ``N``: diagonal geometric weights
    (1/(N+1)) (N/(N+1))^n."""
    if N < 0.0:
        raise ValueError(f"mean photon number must be >= 0, got {N}")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if N == 0.0:
        diag = np.zeros(dim)
        diag[0] = 1.0
        tol = 0.0
    else:
        ratio = N / (N + 1.0)
        diag = np.exp(np.arange(dim) * math.log(ratio)) / (N + 1.0)
        tol = ratio ** dim
    return DensityOperator(matrix=np.diag(diag.astype(complex)), dim=dim,
                           truncation_tol=tol)


def annihilation_matrix(dim: int) -> np.ndarray:
    """Truncated annihilation operator: sqrt(n) at (n-1, n)."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1).astype(complex)


def _laguerre_lower_triangle(alpha: complex, dim: int) -> np.ndarray:
    """Entries <m|D(alpha)|n> for m >= n via the associated-Laguerre closed
    form, combined in the log domain.  Returns a dim x dim lower-triangular
    complex array."""
    x = abs(alpha) ** 2
    n_idx = np.arange(dim)
    # L[n, k] = L_n^{(k)}(x) by the three-term recurrence, vectorized over k.
    k = np.arange(dim, dtype=np.longdouble)
    xl = np.longdouble(x)
    lag = np.zeros((dim, dim), dtype=np.longdouble)
    lag[0] = 1.0
    if dim > 1:
        lag[1] = 1.0 + k - xl
    for n in range(1, dim - 1):
        lag[n + 1] = ((2 * n + 1 + k - xl) * lag[n] - (n + k) * lag[n - 1]) / (n + 1)

    gl = gammaln(n_idx + 1.0)
    out = np.zeros((dim, dim), dtype=complex)
    log_abs_alpha = math.log(abs(alpha)) if alpha != 0 else -math.inf
    phase = alpha / abs(alpha) if alpha != 0 else 1.0
    for kk in range(dim):  # offset m - n
        n = n_idx[: dim - kk]
        m = n + kk
        # log magnitude of sqrt(n!/m!) |alpha|^k e^{-x/2}
        logpref = (0.5 * (gl[n] - gl[m]) + kk * log_abs_alpha - x / 2.0
                   ).astype(np.longdouble)
        lvals = lag[n, kk]
        with np.errstate(divide="ignore"):
            loglag = np.log(np.abs(lvals))
        mag = np.exp(logpref + loglag).astype(float)
        vals = np.sign(lvals).astype(float) * mag * phase ** kk
        if kk == 0 and alpha == 0:
            vals = np.ones(dim)
        out[m, n] = vals
    return out


def displacement_operator(alpha: complex, dim: int) -> np.ndarray:
    """Matrix of D(alpha) on the truncated space, via the Laguerre closed
    form; unitary on the retained subspace up to truncation error."""
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if abs(alpha) ** 2 > dim:
        warnings.warn(
            f"displacement with |alpha|^2 = {abs(alpha)**2:.1f} at dim = {dim}: "
            "severe truncation", TruncationWarning, stacklevel=2)
    lower = _laguerre_lower_triangle(alpha, dim)
    # D(alpha)_{mn} = conj(D(-alpha)_{nm}) since D(alpha)^dag = D(-alpha)
    upper = _laguerre_lower_triangle(-alpha, dim).conj().T
    out = lower + upper
    out[np.diag_indices(dim)] -= np.diag(upper)  # diagonal counted twice
    return out


def displaced_thermal(alpha: complex, Nbar: float, dim: int) -> DensityOperator:
    """D(alpha) tau_Nbar D(alpha)^dag.  Pure-coherent special case for
    Nbar = 0 avoids building the displacement matrix."""
    if Nbar < 0.0:
        raise ValueError(f"mean photon number must be >= 0, got {Nbar}")
    if Nbar == 0.0:
        v = coherent_state(alpha, dim)
        mat = np.outer(v, v.conj())
    else:
        D = displacement_operator(alpha, dim)
        p = thermal_state(Nbar, dim).matrix.real.diagonal()
        scaled = D * np.sqrt(p)[np.newaxis, :]
        mat = scaled @ scaled.conj().T
    mat = (mat + mat.conj().T) / 2.0
    deficit = max(0.0, 1.0 - float(np.trace(mat).real))
    return DensityOperator(matrix=mat, dim=dim, truncation_tol=deficit)


def _eigvals(rho: DensityOperator) -> np.ndarray:
    mat = (rho.matrix + rho.matrix.conj().T) / 2.0
    try:
        return np.linalg.eigvalsh(mat)
    except np.linalg.LinAlgError as e:
        raise NumericFailure("eigensolver failed") from e


def von_neumann_entropy(rho: DensityOperator) -> float:
    """-sum lambda log2 lambda over eigenvalues above the floor, in bits."""
    lam = _eigvals(rho)
    lam = lam[lam > EIG_FLOOR]
    return float(-(lam * np.log2(lam)).sum())


def relative_entropy(rho: DensityOperator, sigma: DensityOperator,
                     support_tol: float = 1e-9) -> float:
    """D(rho || sigma) = Tr[rho (log2 rho - log2 sigma)], bits.

    Raises ``SupportError`` if rho carries more than ``support_tol`` weight
    on sigma's numerical null space.
    """
    if rho.dim != sigma.dim:
        raise ValueError("operators must share the truncation dimension")
    mat_r = (rho.matrix + rho.matrix.conj().T) / 2.0
    mat_s = (sigma.matrix + sigma.matrix.conj().T) / 2.0
    try:
        lam_r, U = np.linalg.eigh(mat_r)
        lam_s, V = np.linalg.eigh(mat_s)
    except np.linalg.LinAlgError as e:
        raise NumericFailure("eigensolver failed") from e

    overlap = np.abs(U.conj().T @ V) ** 2  # |<u_i|v_j>|^2
    lam_r_pos = np.clip(lam_r, 0.0, None)
    null_mass = float(lam_r_pos @ overlap[:, lam_s <= EIG_FLOOR].sum(axis=1))
    if null_mass > support_tol:
        raise SupportError(
            f"rho has mass {null_mass:.2e} outside sigma's numerical support")

    keep_r = lam_r > EIG_FLOOR
    keep_s = lam_s > EIG_FLOOR
    tr_rho_log_rho = float(np.sum(lam_r[keep_r] * np.log2(lam_r[keep_r])))
    tr_rho_log_sigma = float(
        lam_r[keep_r] @ overlap[np.ix_(keep_r, keep_s)] @ np.log2(lam_s[keep_s]))
    return tr_rho_log_rho - tr_rho_log_sigma


def quantum_chi2_direct(rho: DensityOperator, Nprime: float,
                        dim: int | None = None) -> float:
    """chi^2(rho, tau_N') = Tr[(rho tau_N'^{-1/2})^2] - 1 by direct summation
    in the number basis.

    tau^{-1/2} is diagonal with exponentially growing entries, so the sum is
    reliable only when rho's truncation tail is well below the growth; a
    ``TruncationError`` is raised if the per-level contributions are still
    growing at the cutoff.
    """
    if Nprime <= 0.0:
        raise ValueError(f"N' must be > 0, got {Nprime}")
    dim = rho.dim if dim is None else min(dim, rho.dim)
    t = math.sqrt((Nprime + 1.0) / Nprime)
    logw = np.arange(dim) * math.log(t)
    w = np.exp(logw)
    absq = np.abs(rho.matrix[:dim, :dim]) ** 2
    contrib = w * (absq @ w)  # per-row weighted contribution
    total = (Nprime + 1.0) * float(contrib.sum())
    tail = contrib[-5:]
    if np.argmax(contrib) >= dim - 5 and tail[-1] > 1e-12 * contrib.sum():
        raise TruncationError(
            "chi-square terms still growing at the truncation cutoff; "
            "increase dim or reduce N'")
    result = total - 1.0
    if result < -1e-10:
        raise NumericFailure(f"chi-square came out negative: {result}")
    return result
