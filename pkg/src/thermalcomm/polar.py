"""Binary polar coding over the classical channel induced by a uniform
coherent-state constellation, the thermal channel, and heterodyne detection.

Heterodyne detection gives a closed-form Gaussian likelihood, so the whole
pipeline (modulator, channel, demapper, multilevel polar decoding) runs as an
ordinary Monte-Carlo link simulation.  Note this front-end achieves the
heterodyne rate, which is strictly below the Holevo rate the quantum decoder
would reach; the rates module computes the latter.

Conventions: natural-order (non-bit-reversed) transform, Gray labeling per
quadrature, quadratures handled as independent bit-level groups with the real
quadrature's levels first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .channel import ChannelParams
from .constellations import ComplexConstellation, RealConstellation

_LLR_BIG = 1000.0
_TANH_CLIP = 1.0 - 1e-16


@dataclass(frozen=True)
class PolarCode:
    """Blocklength, sorted frozen index set, and the frozen bit values."""

    n: int
    frozen: np.ndarray
    frozen_values: np.ndarray

    def __post_init__(self):
        _check_power_of_two(self.n, "blocklength")
        if len(self.frozen) != len(self.frozen_values):
            raise ValueError("frozen and frozen_values lengths differ")
        if len(self.frozen) and (
                self.frozen[0] < 0 or self.frozen[-1] >= self.n
                or np.any(np.diff(self.frozen) <= 0)):
            raise ValueError("frozen set must be sorted, unique and in range")

    @property
    def rate(self) -> float:
        return (self.n - len(self.frozen)) / self.n

    @property
    def info_set(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.n), self.frozen)


def _check_power_of_two(n: int, what: str) -> int:
    if n < 1 or n & (n - 1):
        raise ValueError(f"{what} must be a power of 2, got {n}")
    return int(math.log2(n))


def _transform_batch(u: np.ndarray) -> np.ndarray:
    """Butterfly transform applied to each row of a (batch, n) bit array."""
    nrows, n = u.shape
    stages = _check_power_of_two(n, "transform length")
    x = u.copy()
    for s in range(stages):
        step = 1 << (s + 1)
        half = 1 << s
        x = x.reshape(nrows, -1, step)
        x[:, :, :half] ^= x[:, :, half:]
        x = x.reshape(nrows, n)
    return x


def polar_transform(u: np.ndarray) -> np.ndarray:
    """x = u F^{x log2 n} over GF(2) in natural order; self-inverse."""
    u = np.asarray(u, dtype=np.int8) % 2
    return _transform_batch(u[None, :])[0]


@dataclass(frozen=True)
class InducedChannel:
    """Discrete-input channel: uniform product constellation, thermal
    channel, heterodyne detection; 2 log2(m) bit levels, Gray-labeled per
    quadrature (real-quadrature levels first, MSB first)."""

    params: ChannelParams
    constellation: ComplexConstellation
    amplitudes: np.ndarray  # per-quadrature real amplitudes, ascending
    nbits: int
    point_bits: np.ndarray  # (m, nbits) Gray label bits, MSB first

    @property
    def levels(self) -> int:
        return 2 * self.nbits

    @property
    def noise_var(self) -> float:
        """Per-quadrature heterodyne variance (Nc + 1)/2."""
        return (self.params.Nc + 1.0) / 2.0

    def sample_level(self, rng: np.random.Generator, level: int,
                     n: int) -> tuple[np.ndarray, np.ndarray]:
        """Draw ``n`` independent uses: uniform symbols, heterodyne outputs,
        and the exact LLRs of the given level's bit with the true lower-level
        bits as priors (the genie-aided bit channel).

        Returns (transmitted bits of the level, LLRs).
        """
        q, bpos = divmod(level, self.nbits)
        m = len(self.amplitudes)
        j = rng.integers(0, m, size=n)
        yq = self.params.k * self.amplitudes[j] + rng.normal(
            scale=math.sqrt(self.noise_var), size=n)
        bits = self.point_bits[j, bpos]
        priors = self.point_bits[j, :bpos]
        return bits, self.level_llrs(level, priors, yq)

    def level_llrs(self, level: int, priors: np.ndarray,
                   yq: np.ndarray) -> np.ndarray:
        """Vectorized LLRs for one level: log-ratio of the Gaussian
        likelihoods marginalized over the points consistent with the
        lower-level bits.  ``yq`` is the relevant quadrature of y."""
        q, bpos = divmod(level, self.nbits)
        if not 0 <= level < self.levels:
            raise ValueError(f"level must be in [0, {self.levels}), got {level}")
        yq = np.asarray(yq, dtype=float)
        priors = np.asarray(priors, dtype=np.int8).reshape(len(yq), bpos)
        pattern = np.zeros(len(yq), dtype=np.int64)
        for b in range(bpos):
            pattern = (pattern << 1) | priors[:, b]

        scale = -1.0 / (2.0 * self.noise_var)
        centers = self.params.k * self.amplitudes
        llr = np.empty(len(yq))
        for pat in np.unique(pattern):
            mask = pattern == pat
            sub0, sub1 = self._subsets(bpos, int(pat))
            e0 = scale * (yq[mask, None] - centers[sub0][None, :]) ** 2
            e1 = scale * (yq[mask, None] - centers[sub1][None, :]) ** 2
            llr[mask] = logsumexp(e0, axis=1) - logsumexp(e1, axis=1)
        return llr

    def _subsets(self, bpos: int, pattern: int) -> tuple[np.ndarray, np.ndarray]:
        """Point indices whose first ``bpos`` label bits equal ``pattern``,
        split by the value of bit ``bpos``."""
        sel = np.ones(len(self.amplitudes), dtype=bool)
        for b in range(bpos):
            want = (pattern >> (bpos - 1 - b)) & 1
            sel &= self.point_bits[:, b] == want
        idx = np.nonzero(sel)[0]
        return (idx[self.point_bits[idx, bpos] == 0],
                idx[self.point_bits[idx, bpos] == 1])


def induced_channel(p: ChannelParams, c: RealConstellation,
                    N: float | None = None) -> InducedChannel:
    """Build the induced channel from a uniform-probability constellation
    with a power-of-two point count."""
    from .constellations import product_constellation

    if not np.allclose(c.probs, 1.0 / c.m, atol=1e-12):
        raise ValueError("induced channel requires a uniform-probability "
                         f"constellation, got kind {c.kind!r}")
    nbits = _check_power_of_two(c.m, "constellation size m")
    N = p.N if N is None else N
    Q = product_constellation(c, N)
    amplitudes = math.sqrt(N / 2.0) * c.points
    j = np.arange(c.m)
    gray = j ^ (j >> 1)
    point_bits = ((gray[:, None] >> (nbits - 1 - np.arange(nbits))[None, :]) & 1
                  ).astype(np.int8)
    return InducedChannel(params=p, constellation=Q, amplitudes=amplitudes,
                          nbits=nbits, point_bits=point_bits)


def heterodyne_sample(p: ChannelParams, z: complex,
                      rng: np.random.Generator) -> complex:
    """One heterodyne outcome for coherent input |z>: k z plus circular
    Gaussian noise of per-quadrature variance (Nc + 1)/2 (the Husimi Q
    function of the output state)."""
    sd = math.sqrt((p.Nc + 1.0) / 2.0)
    return p.k * z + complex(rng.normal(scale=sd), rng.normal(scale=sd))


def bit_llr(ch: InducedChannel, level: int, prior_bits, y: complex) -> float:
    """Scalar LLR of one level's bit given the decoded lower levels of the
    same quadrature and the heterodyne outcome ``y``."""
    q = level // ch.nbits
    yq = y.real if q == 0 else y.imag
    priors = np.asarray(prior_bits, dtype=np.int8).reshape(1, -1)
    return float(ch.level_llrs(level, priors, np.array([yq]))[0])


def _f(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    prod = np.clip(np.tanh(a / 2.0) * np.tanh(b / 2.0), -_TANH_CLIP, _TANH_CLIP)
    return 2.0 * np.arctanh(prod)


def _g(a: np.ndarray, b: np.ndarray, u: np.ndarray) -> np.ndarray:
    return b + (1.0 - 2.0 * u) * a


def _sc_batch(llr: np.ndarray, decide, idx0: int) -> np.ndarray:
    """SC recursion over a (batch, n) LLR array; ``decide(i, llr_col)``
    returns the batch's decisions for input index ``i``.  Trials are
    independent, so the whole batch moves through the butterfly together."""
    n = llr.shape[1]
    if n == 1:
        return decide(idx0, llr[:, 0]).astype(np.int8)[:, None]
    half = n // 2
    a, b = llr[:, :half], llr[:, half:]
    u_left = _sc_batch(_f(a, b), decide, idx0)
    left_code = _transform_batch(u_left)
    u_right = _sc_batch(_g(a, b, left_code), decide, idx0 + half)
    return np.concatenate([u_left, u_right], axis=1)


def sc_decode_batch(code: PolarCode, llr: np.ndarray) -> np.ndarray:
    """SC-decode each row of a (batch, n) LLR array; returns the full
    input-bit estimates with frozen positions forced."""
    llr = np.asarray(llr, dtype=float)
    if llr.shape[1] != code.n:
        raise ValueError(f"LLR length must be {code.n}, got {llr.shape[1]}")
    frozen_map = dict(zip(code.frozen.tolist(), code.frozen_values.tolist()))
    nrows = llr.shape[0]

    def decide(i, col):
        if i in frozen_map:
            return np.full(nrows, frozen_map[i], dtype=np.int8)
        return (col < 0).astype(np.int8)

    return _sc_batch(llr, decide, 0)


def sc_decode(code: PolarCode, llr: np.ndarray) -> np.ndarray:
    """Successive cancellation over the polar butterfly; returns the full
    length-n input-bit estimate with frozen positions forced."""
    return sc_decode_batch(code, np.asarray(llr, dtype=float)[None, :])[0]


def genie_error_counts(llr: np.ndarray, u_true: np.ndarray,
                       soft: bool = False) -> np.ndarray:
    """Run SC over a (batch, n) LLR array with every decision forced to the
    true bit; return per-index error counts (ties at LLR 0 count half).

    With genie feeding, the LLR seen at index i is the exact posterior of
    the i-th synthetic channel, so its hard decision errs with probability
    1/(1 + e^|L|) given the observation.  ``soft=True`` accumulates that
    conditional probability instead of the 0/1 outcome, which estimates the
    same quantity with much lower variance.
    """
    llr = np.asarray(llr, dtype=float)
    u_true = np.asarray(u_true, dtype=np.int8)
    errs = np.zeros(llr.shape[1])

    if soft:
        def decide(i, col):
            e = np.exp(-np.abs(col))
            errs[i] += np.sum(e / (1.0 + e))
            return u_true[:, i]
    else:
        def decide(i, col):
            hard = (col < 0).astype(np.int8)
            errs[i] += np.sum(hard != u_true[:, i]) + 0.5 * np.sum(
                (col == 0.0) * (1.0 - 2.0 * (u_true[:, i] != 0)))
            return u_true[:, i]

    _sc_batch(llr, decide, 0)
    return errs


@dataclass(frozen=True)
class ErasureChannel:
    """BEC fixture for construction tests: one bit level, LLR 0 on erasure,
    +/- large otherwise."""

    eps: float
    levels: int = 1

    def sample_level(self, rng: np.random.Generator, level: int,
                     n: int) -> tuple[np.ndarray, np.ndarray]:
        bits = rng.integers(0, 2, size=n).astype(np.int8)
        erased = rng.random(n) < self.eps
        llr = np.where(erased, 0.0, (1.0 - 2.0 * bits) * _LLR_BIG)
        return bits, llr


def bec_bhattacharyya(eps: float, n: int) -> np.ndarray:
    """Exact Bhattacharyya parameters of the n synthetic BEC channels, in
    the decoder's natural index order (z- = 2z - z^2, z+ = z^2)."""
    stages = _check_power_of_two(n, "blocklength")
    z = np.array([eps])
    for _ in range(stages):
        out = np.empty(2 * len(z))
        out[0::2] = 2.0 * z - z * z
        out[1::2] = z * z
        z = out
    return z


def bec_frozen_set(eps: float, n: int, target_rate: float) -> np.ndarray:
    """Frozen set from the exact BEC recursion: worst channels frozen."""
    z = bec_bhattacharyya(eps, n)
    n_frozen = n - int(round(target_rate * n))
    order = np.lexsort((-np.arange(n), z))[::-1]  # worst first, low index wins ties
    return np.sort(order[:n_frozen])


def construct_code(ch, level: int, n: int, target_rate: float,
                   mc_budget: int, seed: int) -> PolarCode:
    """Genie-aided Monte-Carlo code construction for one bit level.

    Runs ``mc_budget`` genie-aided SC trials over the level's bit channel,
    estimates per-synthetic-index error probabilities, and freezes the worst
    indices until the rate target is met.  Deterministic given the seed.
    """
    _check_power_of_two(n, "blocklength")
    if not 0.0 <= target_rate < 1.0:
        raise ValueError(f"target rate must be in [0, 1), got {target_rate}")
    if mc_budget < 100:
        raise ValueError(f"mc_budget must be >= 100, got {mc_budget}")
    rng = np.random.default_rng(seed)
    p_err = _genie_error_probs(ch, level, n, mc_budget, rng)
    n_frozen = n - int(round(target_rate * n))
    order = np.lexsort((-np.arange(n), p_err))[::-1]  # worst first
    frozen = np.sort(order[:n_frozen])
    return PolarCode(n=n, frozen=frozen,
                     frozen_values=np.zeros(n_frozen, dtype=np.int8))


def _genie_error_probs(ch, level: int, n: int, mc_budget: int,
                       rng) -> np.ndarray:
    """Monte-Carlo per-index error probabilities via genie-aided SC.

    Trials are processed in chunks so large budgets keep a bounded
    working set.
    """
    chunk = max(1, min(mc_budget, (1 << 22) // n))
    counts = np.zeros(n)
    done = 0
    while done < mc_budget:
        b = min(chunk, mc_budget - done)
        bits, llr = ch.sample_level(rng, level, b * n)
        bits = bits.reshape(b, n)
        llr = llr.reshape(b, n)
        u_true = _transform_batch(bits.astype(np.int8))
        counts += genie_error_counts(llr, u_true, soft=True)
        done += b
    return counts / mc_budget


def construct_multilevel(ch, n: int, sum_rate: float, mc_budget: int,
                         seed: int) -> list:
    """Construct one polar code per bit level under a shared rate budget.

    Estimates per-index error probabilities for every bit level of the
    induced channel, pools them, and assigns the ``round(sum_rate * n)``
    most reliable positions across all levels as information bits.  This
    spends the total rate where the synthetic channels are actually good
    instead of forcing the same fraction onto every level.
    """
    _check_power_of_two(n, "blocklength")
    if not 0.0 <= sum_rate < ch.levels:
        raise ValueError(
            f"sum rate must be in [0, {ch.levels}), got {sum_rate}")
    if mc_budget < 100:
        raise ValueError(f"mc_budget must be >= 100, got {mc_budget}")
    p_err = np.empty((ch.levels, n))
    for lv in range(ch.levels):
        rng = np.random.default_rng(seed + lv)
        p_err[lv] = _genie_error_probs(ch, lv, n, mc_budget, rng)
    k_total = int(round(sum_rate * n))
    flat = p_err.ravel()
    info = np.zeros(flat.size, dtype=bool)
    info[np.argsort(flat, kind="stable")[:k_total]] = True
    info = info.reshape(p_err.shape)
    codes = []
    for lv in range(ch.levels):
        frozen = np.nonzero(~info[lv])[0]
        codes.append(PolarCode(n=n, frozen=frozen,
                               frozen_values=np.zeros(len(frozen),
                                                      dtype=np.int8)))
    return codes


def estimate_level_mi(ch, level: int, samples: int,
                      rng: np.random.Generator) -> float:
    """Monte-Carlo estimate of the level's conditional mutual information in
    bits, from the exact LLRs: I = 1 - E[log2(1 + e^{-(1-2b) LLR})]."""
    bits, llr = ch.sample_level(rng, level, samples)
    signed = np.clip((1.0 - 2.0 * bits) * llr, -700.0, 700.0)
    return 1.0 - float(np.mean(np.log2(1.0 + np.exp(-signed))))


def _inverse_gray(v: np.ndarray) -> np.ndarray:
    out = v.copy()
    shift = 1
    while shift < 64:
        out = out ^ (out >> shift)
        shift <<= 1
    return out


def simulate(ch: InducedChannel, codes: list[PolarCode], trials: int,
             seed: int, mi_samples: int = 20_000) -> dict:
    """Multilevel polar-coded transmission over the induced channel.

    ``codes`` holds one code per bit level, all of the same blocklength.
    Levels are decoded in order, each level's re-encoded decisions feeding
    the next level's LLRs.  Returns a report dict with per-level BER, frame
    error rate, effective throughput in bits per mode, and the heterodyne
    mutual-information estimate.
    """
    if len(codes) != ch.levels:
        raise ValueError(f"need {ch.levels} codes, got {len(codes)}")
    n = codes[0].n
    if any(c.n != n for c in codes):
        raise ValueError("all level codes must share the blocklength")
    rng = np.random.default_rng(seed)

    mi_rng = np.random.default_rng(seed + 1)
    level_mi = [estimate_level_mi(ch, lv, mi_samples, mi_rng)
                for lv in range(ch.levels)]

    bit_errors = np.zeros(ch.levels)
    info_bits = np.array([c.n - len(c.frozen) for c in codes])
    frame_bad = np.zeros(trials, dtype=bool)
    if trials:
        # encode every level for all trials at once
        u_levels, x_levels = [], []
        for code in codes:
            u = np.zeros((trials, n), dtype=np.int8)
            u[:, code.frozen] = code.frozen_values
            u[:, code.info_set] = rng.integers(
                0, 2, size=(trials, len(code.info_set)))
            u_levels.append(u)
            x_levels.append(_transform_batch(u))
        # map label bits to symbols per quadrature and sample heterodyne
        sd = math.sqrt(ch.noise_var)
        ys = []
        for q in range(2):
            label = np.zeros((trials, n), dtype=np.int64)
            for b in range(ch.nbits):
                label = (label << 1) | x_levels[q * ch.nbits + b]
            j = _inverse_gray(label)
            ys.append(ch.params.k * ch.amplitudes[j]
                      + rng.normal(scale=sd, size=(trials, n)))
        # decode level by level, feeding decisions forward
        for q in range(2):
            priors = np.zeros((trials * n, 0), dtype=np.int8)
            for b in range(ch.nbits):
                lv = q * ch.nbits + b
                llr = ch.level_llrs(lv, priors, ys[q].reshape(-1)
                                    ).reshape(trials, n)
                u_hat = sc_decode_batch(codes[lv], llr)
                info = codes[lv].info_set
                nerr = np.sum(u_hat[:, info] != u_levels[lv][:, info], axis=1)
                bit_errors[lv] += int(nerr.sum())
                frame_bad |= nerr > 0
                x_hat = _transform_batch(u_hat)
                priors = np.concatenate(
                    [priors, x_hat.reshape(-1, 1)], axis=1)

    fer = float(np.mean(frame_bad)) if trials else None
    sum_rate = float(info_bits.sum()) / n
    return {
        "trials": trials,
        "seed": seed,
        "blocklength": n,
        "levels": ch.levels,
        "level_rates": [c.rate for c in codes],
        "level_mi_bits": level_mi,
        "mi_estimate_bits": float(sum(level_mi)),
        "level_ber": [float(b / (k * trials)) if k else 0.0
                      for b, k in zip(bit_errors, info_bits)] if trials else None,
        "fer": fer,
        "sum_rate_bits_per_mode": sum_rate,
        "throughput_bits_per_mode": sum_rate * (1.0 - fer) if trials else None,
    }
