"""Cross-checks between the three classical chi^2 paths and the quantum
kernel, plus the closed-form kernel identities they are built on."""

import math

import numpy as np
import pytest

from thermalcomm import (KINDS, channel_params, classical_chi2_kernel,
                         classical_chi2_series, delta_B_bound,
                         make_constellation, product_constellation,
                         quantum_chi2_constellation)
from thermalcomm.chi2 import (classical_one_plus_chi2_quadrature, kernel_C,
                              kernel_K, kernel_K_quadrature, kernel_R)


def pure_loss_with_snr(s, k=0.8):
    """Channel with N0 = 0 whose derived SNR equals ``s`` exactly:
    invert s = u/(sqrt(u(u+1)) - u) for u = k^2 N."""
    N = s * s / ((1.0 + 2.0 * s) * k * k)
    p = channel_params(k, 0.0, N)
    assert abs(p.s - s) <= 1e-10 * s
    return p


@pytest.mark.parametrize("s", [0.3, 2.0, 9.435])
@pytest.mark.parametrize("x,xp", [(0.0, 0.0), (1.2, -0.7), (2.5, 2.5)])
def test_kernel_K_against_quadrature(s, x, xp):
    assert kernel_K(s, x, xp) == pytest.approx(
        kernel_K_quadrature(s, x, xp), rel=1e-9)


def test_kernel_K_symmetric_and_positive():
    assert kernel_K(1.5, 0.4, -2.0) == pytest.approx(kernel_K(1.5, -2.0, 0.4))
    assert kernel_K(1.5, 0.4, -2.0) > 0.0


def test_quadrature_returns_one_plus_chi2():
    c = make_constellation("equilattice", 4)
    s = 2.0
    assert classical_one_plus_chi2_quadrature(c, s) == pytest.approx(
        1.0 + classical_chi2_series(c, s), rel=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_three_way_agreement_spot(kind):
    c = make_constellation(kind, 5)
    for s in (0.5, 9.435):
        ser = classical_chi2_series(c, s)
        ker = classical_chi2_kernel(c, s)
        qua = classical_one_plus_chi2_quadrature(c, s) - 1.0
        assert ker == pytest.approx(ser, rel=1e-10, abs=1e-25)
        assert qua == pytest.approx(ser, rel=1e-7, abs=1e-12)


def test_kernel_C_normalization():
    # C_N(0, 0) = N + 1
    assert kernel_C(3.0, 0j, 0j) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        kernel_C(0.0, 0j, 0j)


def test_kernel_R_prefactor_identity():
    # R(0,0) = N'(N'+1)/(N' + 2 N' Nc - Nc^2) = (1+s)^2/(1+2s)
    for (k, N0, N) in [(0.8, 0.0, 7.0), (0.7, 1.2, 3.0), (0.95, 0.3, 10.0)]:
        p = channel_params(k, N0, N)
        expect = (1.0 + p.s) ** 2 / (1.0 + 2.0 * p.s)
        assert kernel_R(p, 0j, 0j) == pytest.approx(expect, rel=1e-12)


def test_quantum_kernel_factorizes_over_quadratures():
    # product-form constellation => 1 + chi2_quantum = (1 + chi2_classical)^2
    for kind in ("equilattice", "gauss_hermite"):
        for s in (0.1, 1.0, 9.435):
            p = pure_loss_with_snr(s)
            c = make_constellation(kind, 3)
            Q = product_constellation(c, p.N)
            xq = quantum_chi2_constellation(p, Q)
            xc = classical_chi2_kernel(c, p.s)
            assert xq == pytest.approx(xc * (xc + 2.0), rel=1e-11,
                                       abs=1e-28)


def test_factorization_with_thermal_environment():
    p = channel_params(0.75, 0.8, 5.0)
    c = make_constellation("quantile", 4)
    Q = product_constellation(c, p.N)
    xq = quantum_chi2_constellation(p, Q)
    xc = classical_chi2_kernel(c, p.s)
    assert xq == pytest.approx(xc * (xc + 2.0), rel=1e-11)


def test_delta_B_bound_is_chi2_of_product():
    p = channel_params(0.8, 0.0, 7.0)
    c = make_constellation("gauss_hermite", 5)
    x = classical_chi2_kernel(c, p.s)
    assert delta_B_bound(p, c) == pytest.approx(x * (x + 2.0), rel=1e-12)


def test_delta_B_bound_monotone_in_m():
    p = channel_params(0.8, 0.0, 7.0)
    vals = [delta_B_bound(p, make_constellation("gauss_hermite", m))
            for m in range(2, 12)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
