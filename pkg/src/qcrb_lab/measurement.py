"""Measurement strategies that saturate the transmission-estimation bound.

Closed-form intensity and gain-optimized intensity-difference variances,
error propagation to a transmission variance, and a seeded Monte Carlo
harness that checks the closed forms against empirical estimator
variance.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fock
from .gaussian import Moments, StateKind, make_source, photon_moments
from .qfi import big_theta

# Gaussian-approximation sampling is only trusted at bright photon scales.
BRIGHT_MEAN_MIN = 1e3
_BLOCK = 1 << 14


class Strategy(Enum):
    INTENSITY = "Intensity"
    INTENSITY_DIFF = "IntensityDiff"


class Sampler(Enum):
    EXACT = "Exact"
    GAUSSIAN_APPROX = "GaussianApprox"


@dataclass(frozen=True)
class MeasurementPlan:
    strategy: Strategy
    gain: float | None = None  # IntensityDiff only; None = use optimal gain

    def __post_init__(self):
        if self.gain is not None and not math.isfinite(self.gain):
            raise ValueError("gain must be finite")


@dataclass(frozen=True)
class MCConfig:
    trials: int
    seed: int
    sampler: Sampler = Sampler.GAUSSIAN_APPROX

    def __post_init__(self):
        if self.trials < 100:
            raise ValueError("trials must be >= 100")


@dataclass(frozen=True)
class MCResult:
    empirical_var_T: float
    closed_form_var_T: float
    z_score: float
    trials: int
    seed: int


def source_moments(spec):
    """Photon moments of the generated state (exact for every kind)."""
    if spec.kind is StateKind.FOCK:
        return Moments(mean_p=float(spec.fock_n), var_p=0.0)
    return photon_moments(make_source(spec))


def thinned_stats(mean0, var0, t):
    """Mean and variance of a photon count after transmission t."""
    return t * mean0, t * t * var0 + t * (1.0 - t) * mean0


def intensity_stats(moments0, t):
    """Probe-intensity mean and variance after total transmission t."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("transmission outside [0, 1]")
    return thinned_stats(moments0.mean_p, moments0.var_p, t)


_FANO = {
    StateKind.COHERENT: lambda spec: 1.0,
    StateKind.BSMSS: lambda spec: math.exp(-2.0 * spec.squeeze.s),
    StateKind.FOCK: lambda spec: 0.0,
}


def transmission_var_intensity(spec, channel):
    """Error-propagated transmission variance of an intensity measurement.

    Single-mode probes only; uses the source Fano factor (bright-limit
    value for the bSMSS).
    """
    if spec.kind not in _FANO:
        raise ValueError("intensity measurement handles single-mode probes only")
    fano = _FANO[spec.kind](spec)
    T, T_p = channel.T, channel.T_p
    if spec.kind is StateKind.FOCK:
        n_r = T_p * spec.fock_n
    elif spec.kind is StateKind.COHERENT:
        n_r = T_p * spec.alpha.magnitude**2
    else:
        source = make_source(spec)
        n_r = T_p * abs(source.d[0]) ** 2
    return T / (channel.eta_p * n_r) - (T * T * T_p / n_r) * (1.0 - fano)


def optimal_gain(moments0, channel):
    """Electronic gain minimizing the intensity-difference variance."""
    denom = channel.eta_a * moments0.var_a + (1.0 - channel.eta_a) * moments0.mean_a
    if denom <= 0.0:
        raise ValueError("degenerate auxiliary mode: no gain optimum")
    return channel.probe_transmission * moments0.cov_pa / denom


def diff_variance(moments0, channel, g):
    """Variance of n_p - g n_a after the full loss chain."""
    t_p = channel.probe_transmission
    t_a = channel.eta_a
    _, var_p = thinned_stats(moments0.mean_p, moments0.var_p, t_p)
    _, var_a = thinned_stats(moments0.mean_a, moments0.var_a, t_a)
    return var_p + g * g * var_a - 2.0 * g * t_p * t_a * moments0.cov_pa


def transmission_var_diff(spec, channel):
    """Transmission variance of the gain-optimized intensity difference.

    Closed form for the bTMSS; the derivative of the mean response is
    taken at fixed gain.  A doubly seeded state away from cos(Theta) = -1
    does not saturate the bound; the value is still returned with a
    warning.
    """
    if spec.kind is not StateKind.BTMSS:
        raise ValueError("intensity-difference measurement requires a bTMSS probe")
    if spec.alpha.magnitude > 0 and spec.beta.magnitude > 0:
        if math.cos(big_theta(spec)) > -1.0 + 1e-12:
            warnings.warn(
                "doubly seeded bTMSS with cos(Theta) != -1: the optimized "
                "intensity difference does not saturate the bound",
                stacklevel=2,
            )
    s = spec.squeeze.s
    T, T_p = channel.T, channel.T_p
    source = make_source(spec)
    n_r = T_p * abs(source.d[0]) ** 2
    from .qfi import h_factor

    return T / (channel.eta_p * n_r) - (T * T * T_p / n_r) * h_factor(
        s, channel.eta_a
    ) * (1.0 - 1.0 / math.cosh(2.0 * s))


def _block_rngs(seed, trials):
    n_blocks = (trials + _BLOCK - 1) // _BLOCK
    seqs = np.random.SeedSequence(seed).spawn(n_blocks)
    sizes = [_BLOCK] * (n_blocks - 1) + [trials - _BLOCK * (n_blocks - 1)]
    for sq, size in zip(seqs, sizes):
        yield np.random.Generator(np.random.Philox(sq)), size


def _exact_joint_probs(spec, channel, n_max=45):
    rho = fock.channel_density(spec, channel, n_max=n_max)
    probs = np.clip(np.real(np.diag(rho.matrix)), 0.0, None)
    return probs / probs.sum(), rho.n_max + 1


def mc_estimate(spec, channel, plan, cfg):
    """Monte Carlo check of the closed-form transmission variance.

    Samples measurement outcomes, inverts the mean-response map at the
    known calibration constants (T_p, eta_p, eta_a, g) to form the
    estimator, and reports the empirical variance with a z-score against
    the closed form.  Deterministic for a fixed (seed, trials) pair
    regardless of worker count: trials are partitioned into fixed-size
    counter-based RNG blocks.
    """
    m0 = source_moments(spec)
    t_probe = channel.probe_transmission
    slope = channel.T_p * channel.eta_p * m0.mean_p
    if slope <= 0:
        raise ValueError("vacuum probe: mean response is flat")

    if plan.strategy is Strategy.INTENSITY_DIFF:
        g = plan.gain if plan.gain is not None else optimal_gain(m0, channel)
        closed_var_n = diff_variance(m0, channel, g)
        offset = g * channel.eta_a * m0.mean_a
    else:
        g = 0.0
        _, closed_var_n = intensity_stats(m0, t_probe)
        offset = 0.0
    closed_var_T = closed_var_n / slope**2

    if cfg.sampler is Sampler.GAUSSIAN_APPROX:
        if t_probe * m0.mean_p < BRIGHT_MEAN_MIN:
            raise ValueError(
                "GaussianApprox sampler requires a bright probe "
                f"(mean photons >= {BRIGHT_MEAN_MIN:g} after losses)"
            )
        mean_p, var_p = thinned_stats(m0.mean_p, m0.var_p, t_probe)
        mean_a, var_a = thinned_stats(m0.mean_a, m0.var_a, channel.eta_a)
        cov = t_probe * channel.eta_a * m0.cov_pa

        def draw(rng, size):
            if plan.strategy is Strategy.INTENSITY:
                return rng.normal(mean_p, math.sqrt(var_p), size)
            # conditional decomposition of the bivariate normal
            xp = rng.normal(mean_p, math.sqrt(var_p), size)
            cond_var = max(var_a - cov * cov / var_p, 0.0)
            xa = mean_a + cov / var_p * (xp - mean_p) + rng.normal(
                0.0, math.sqrt(cond_var), size
            )
            return xp - g * xa

    else:
        if spec.kind is StateKind.COHERENT:
            # coherent states stay coherent under loss: exact Poisson counts
            lam = t_probe * m0.mean_p

            def draw(rng, size):
                return rng.poisson(lam, size).astype(float)

        else:
            n_max = spec.fock_n + 2 if spec.kind is StateKind.FOCK else 40
            probs, dim = _exact_joint_probs(spec, channel, n_max=n_max)
            if spec.kind is StateKind.BTMSS:
                idx = np.arange(dim * dim)
                values = (idx // dim) - g * (idx % dim)
            else:
                values = np.arange(dim, dtype=float)

            def draw(rng, size):
                return values[rng.choice(len(probs), size=size, p=probs)]

    total = 0.0
    total_sq = 0.0
    for rng, size in _block_rngs(cfg.seed, cfg.trials):
        t_hat = (draw(rng, size) + offset) / slope
        total += t_hat.sum()
        total_sq += (t_hat * t_hat).sum()
    n = cfg.trials
    emp_var = (total_sq - total * total / n) / (n - 1)
    se = closed_var_T * math.sqrt(2.0 / (n - 1))
    return MCResult(
        empirical_var_T=emp_var,
        closed_form_var_T=closed_var_T,
        z_score=(emp_var - closed_var_T) / se,
        trials=n,
        seed=cfg.seed,
    )
