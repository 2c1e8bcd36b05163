"""Thermal-channel parameter algebra and closed-form rate targets.

A single-mode thermal channel mixes the signal with a thermal environment of
mean photon number ``N0`` on a beamsplitter of transmittivity ``k``.  For a
circularly-symmetric Gaussian input of mean photon number ``N`` everything
relevant here is a scalar function of ``(k, N0, N)``; this module collects
those scalars and the closed-form capacity / coherent-information values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class DisplacedThermalSpec:
    """A displaced thermal state: Gaussian P function of the given width
    centered at ``center`` (width is the thermal mean photon number)."""

    center: complex
    width: float


@dataclass(frozen=True)
class ChannelParams:
    """Channel parameters plus every derived scalar used downstream.

    ``Nc`` is the added noise, ``Nprime`` the output mean photon number for
    the Gaussian input, ``s`` the signal-to-noise ratio of the equivalent
    classical AWGN problem, and ``c_decay`` the guaranteed exponential decay
    constant of the Gauss-Hermite gap bound.  ``cgap``/``dgap`` are the kernel
    constants, ``t`` the inverse-square-root growth factor of the thermal
    output state.
    """

    k: float
    N0: float
    N: float
    Nc: float
    Nprime: float
    s: float
    c_decay: float
    cgap: float
    dgap: float
    t: float


def channel_params(k: float, N0: float, N: float) -> ChannelParams:
    """Validate ``(k, N0, N)`` and compute all derived scalars.

    Raises ``ValueError`` for out-of-range parameters and for the degenerate
    identity channel ``k == 1, N0 == 0`` (the additive-noise-only formulation
    needed to make ``k == 1`` meaningful is out of scope).
    """
    if not 0.0 < k <= 1.0:
        raise ValueError(f"transmittivity k must be in (0, 1], got {k}")
    if N0 < 0.0:
        raise ValueError(f"environment photon number N0 must be >= 0, got {N0}")
    if N <= 0.0:
        raise ValueError(f"input photon number N must be > 0, got {N}")
    if k == 1.0 and N0 == 0.0:
        raise ValueError("k = 1 with N0 = 0 is the identity channel; rejected")

    Nc = (1.0 - k * k) * N0
    Nprime = k * k * N + Nc
    dgap = math.sqrt(Nprime * (Nprime + 1.0))
    cgap = Nprime - Nc  # equals k^2 N
    s = k * k * N / (dgap - k * k * N)
    c_decay = 2.0 * math.log((1.0 + s) / s)
    t = math.sqrt((Nprime + 1.0) / Nprime)
    return ChannelParams(
        k=k, N0=N0, N=N, Nc=Nc, Nprime=Nprime, s=s,
        c_decay=c_decay, cgap=cgap, dgap=dgap, t=t,
    )


def output_state_B(p: ChannelParams, z: complex) -> DisplacedThermalSpec:
    """Receiver-mode output for coherent input |z>: thermal width Nc at k z."""
    return DisplacedThermalSpec(center=p.k * z, width=p.Nc)


def output_state_E(p: ChannelParams, z: complex) -> DisplacedThermalSpec:
    """Environment-mode output for coherent input |z>: width k^2 N0 at
    -sqrt(1-k^2) z."""
    return DisplacedThermalSpec(
        center=-math.sqrt(1.0 - p.k * p.k) * z,
        width=p.k * p.k * p.N0,
    )


def g_entropy(x: float) -> float:
    """Entropy in bits of a thermal state with mean photon number ``x``:
    (x+1) log2(x+1) - x log2(x), with g(0) = 0."""
    if x < 0.0:
        raise ValueError(f"mean photon number must be >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def capacity_C(p: ChannelParams) -> float:
    """Classical capacity at input photon budget N: g(N') - g(Nc), bits."""
    return g_entropy(p.Nprime) - g_entropy(p.Nc)


def gaussian_rate_limit(p: ChannelParams) -> float:
    """Gaussian coherent information, bits: the B-side Holevo quantity minus
    the E-side one, each evaluated for the Gaussian input."""
    e_out = (1.0 - p.k * p.k) * p.N + p.k * p.k * p.N0
    e_env = p.k * p.k * p.N0
    return capacity_C(p) - (g_entropy(e_out) - g_entropy(e_env))
