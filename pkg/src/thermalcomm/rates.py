"""Channel-output ensembles over a constellation and the resulting rates.

Ensemble average states are assembled in truncated Fock space; conditional
entropies are evaluated analytically (every conditional output is a displaced
thermal state of the same width, hence the same entropy g(width)), so only
the mixture entropy needs an eigendecomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (ChannelParams, DisplacedThermalSpec, g_entropy,
                      output_state_B, output_state_E)
from .constellations import ComplexConstellation
from .fock import (DensityOperator, coherent_state, default_dim,
                   displaced_thermal, relative_entropy, thermal_state,
                   von_neumann_entropy)


@dataclass(frozen=True)
class Ensemble:
    """Probability-weighted displaced-thermal output ensemble on one side of
    the channel (``side`` is "B" for the receiver, "E" for the environment)."""

    probs: np.ndarray
    specs: tuple[DisplacedThermalSpec, ...]
    side: str
    params: ChannelParams


@dataclass(frozen=True)
class BipartiteStateVector:
    """Index-register x mode-register pure state; ``amplitudes`` has shape
    (number of constellation points, Fock dimension)."""

    amplitudes: np.ndarray


def build_ensemble(p: ChannelParams, Q: ComplexConstellation, side: str) -> Ensemble:
    """Map each constellation point through the channel to the given side."""
    if side == "B":
        specs = tuple(output_state_B(p, z) for z in Q.points)
    elif side == "E":
        specs = tuple(output_state_E(p, z) for z in Q.points)
    else:
        raise ValueError(f"side must be 'B' or 'E', got {side!r}")
    return Ensemble(probs=Q.probs, specs=specs, side=side, params=p)


def ensemble_dim(e: Ensemble) -> int:
    """Conservative truncation dimension for the ensemble average state."""
    width = e.specs[0].width
    mu = max(abs(s.center) ** 2 for s in e.specs) + width
    return default_dim(mu)


def ensemble_average_state(e: Ensemble, dim: int | None = None) -> DensityOperator:
    """sum_j q_j theta_j at the given truncation dimension.

    All widths in an ensemble are equal; the zero-width (coherent) case is
    assembled from amplitude columns directly.
    """
    if dim is None:
        dim = ensemble_dim(e)
    width = e.specs[0].width
    if width == 0.0:
        cols = np.stack(
            [np.sqrt(q) * coherent_state(s.center, dim)
             for q, s in zip(e.probs, e.specs)], axis=1)
        mat = cols @ cols.conj().T
    else:
        mat = np.zeros((dim, dim), dtype=complex)
        for q, s in zip(e.probs, e.specs):
            mat += q * displaced_thermal(s.center, width, dim).matrix
    mat = (mat + mat.conj().T) / 2.0
    deficit = max(0.0, 1.0 - float(np.trace(mat).real))
    return DensityOperator(matrix=mat, dim=dim, truncation_tol=deficit)


def holevo_rate(p: ChannelParams, Q: ComplexConstellation,
                dim: int | None = None) -> float:
    """Classical rate I(Z_m : B_m) = H(rho_m^B) - g(Nc), bits per mode."""
    rho = ensemble_average_state(build_ensemble(p, Q, "B"), dim)
    return von_neumann_entropy(rho) - g_entropy(p.Nc)


def quantum_rate(p: ChannelParams, Q: ComplexConstellation,
                 dim: int | None = None) -> float:
    """Quantum rate I(Z_m : B) - I(Z_m : E), bits per mode."""
    rho_b = ensemble_average_state(build_ensemble(p, Q, "B"), dim)
    rho_e = ensemble_average_state(build_ensemble(p, Q, "E"), dim)
    hb = von_neumann_entropy(rho_b) - g_entropy(p.Nc)
    he = von_neumann_entropy(rho_e) - g_entropy(p.k * p.k * p.N0)
    return hb - he


def delta_B(p: ChannelParams, Q: ComplexConstellation,
            dim: int | None = None) -> tuple[float, float]:
    """The B-side gap, both as an entropy difference g(N') - H(rho_m^B) and
    as the relative entropy D(rho_m^B || tau_N'); the two agree up to
    truncation error."""
    rho = ensemble_average_state(build_ensemble(p, Q, "B"), dim)
    entropy_form = g_entropy(p.Nprime) - von_neumann_entropy(rho)
    tau = thermal_state(p.Nprime, rho.dim)
    relent_form = relative_entropy(rho, tau)
    return entropy_form, relent_form


def delta_E(p: ChannelParams, Q: ComplexConstellation,
            dim: int | None = None) -> float:
    """The E-side gap g(E-output photon number) - H(rho_m^E); nonnegative."""
    rho = ensemble_average_state(build_ensemble(p, Q, "E"), dim)
    mu_e = (1.0 - p.k * p.k) * p.N + p.k * p.k * p.N0
    return g_entropy(mu_e) - von_neumann_entropy(rho)


def build_xi(Q: ComplexConstellation, dim: int | None = None) -> BipartiteStateVector:
    """Purified constellation input sum_j sqrt(Q_j) |b_j> |z_j|: row j holds
    sqrt(Q_j) times the coherent amplitudes of point j."""
    if dim is None:
        dim = default_dim(max(abs(z) ** 2 for z in Q.points))
    amps = np.stack(
        [math.sqrt(q) * coherent_state(z, dim)
         for q, z in zip(Q.probs, Q.points)], axis=0)
    return BipartiteStateVector(amplitudes=amps)


def xi_index_marginal(xi: BipartiteStateVector) -> np.ndarray:
    """Reduced state on the index register (mode traced out)."""
    return xi.amplitudes @ xi.amplitudes.conj().T


def xi_mode_marginal(xi: BipartiteStateVector) -> DensityOperator:
    """Reduced state on the mode register (index traced out):
    sum_j Q_j |z_j><z_j|."""
    mat = xi.amplitudes.T @ xi.amplitudes.conj()
    mat = (mat + mat.conj().T) / 2.0
    dim = mat.shape[0]
    deficit = max(0.0, 1.0 - float(np.trace(mat).real))
    return DensityOperator(matrix=mat, dim=dim, truncation_tol=deficit)
