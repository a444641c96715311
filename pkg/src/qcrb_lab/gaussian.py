"""Gaussian states of 1-2 optical modes in the complex (a, a+) representation.

A state is described by a displacement vector d = <A> and a covariance
matrix sigma_ij = <{dA_i, dA_j^+}>, where A = (a_1..a_m, a_1^+..a_m^+)
and dA_i = A_i - <A_i>.  With this normalization the vacuum covariance
is the identity and pure states satisfy |det(k.sigma)| = 1 with
k = diag(1,..,1,-1,..,-1).

Loss channels are beamsplitters coupling in vacuum; they scale the
displacement by sqrt(t) and interpolate the covariance toward the
identity.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg

# Tolerance for symplectic / purity checks on well-conditioned 4x4 matrices.
SYM_TOL = 1e-9


class StateKind(Enum):
    COHERENT = "coherent"
    BSMSS = "bsmss"
    BTMSS = "btmss"
    FOCK = "fock"


def _reduce_phase(phi):
    """Map an angle to the interval (-pi, pi]."""
    r = math.remainder(phi, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


@dataclass(frozen=True)
class ComplexAmplitude:
    """Seed field amplitude, stored as magnitude and phase (radians)."""

    magnitude: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError("amplitude magnitude must be >= 0")
        object.__setattr__(self, "phase", _reduce_phase(self.phase))

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        return cls(abs(z), math.atan2(z.imag, z.real))

    @property
    def value(self):
        return self.magnitude * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class SqueezeSpec:
    """Squeezing parameter s >= 0 and squeezing phase theta."""

    s: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("squeezing parameter s must be >= 0")


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a probe-state family.

    Fock states ignore alpha/beta/squeeze; single-mode kinds ignore beta.
    """

    kind: StateKind
    alpha: ComplexAmplitude = ComplexAmplitude()
    beta: ComplexAmplitude = ComplexAmplitude()
    squeeze: SqueezeSpec = SqueezeSpec()
    fock_n: int = 0

    def __post_init__(self):
        if self.kind is StateKind.FOCK and self.fock_n < 0:
            raise ValueError("fock_n must be a nonnegative integer")


@dataclass(frozen=True)
class ChannelConfig:
    """Transmissions of the system (T) and of the external loss ports.

    T_p acts on the probe before the system, eta_p after it, and eta_a
    on the auxiliary mode.
    """

    T: float = 0.5
    T_p: float = 1.0
    eta_p: float = 1.0
    eta_a: float = 1.0

    def __post_init__(self):
        for name in ("T", "T_p", "eta_p", "eta_a"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    @property
    def probe_transmission(self):
        """Total transmission seen by the probe mode."""
        return self.T_p * self.T * self.eta_p


@dataclass(frozen=True)
class Moments:
    """Photon-number mean/variance per mode and cross-mode covariance."""

    mean_p: float
    var_p: float
    mean_a: float = 0.0
    var_a: float = 0.0
    cov_pa: float = 0.0


@dataclass(frozen=True)
class GaussianState:
    """Displacement vector and covariance matrix of a 1- or 2-mode state."""

    d: np.ndarray
    sigma: np.ndarray

    @property
    def modes(self):
        return len(self.d) // 2

    def k_matrix(self):
        m = self.modes
        return np.diag([1.0] * m + [-1.0] * m)


def k_matrix(modes):
    return np.diag([1.0] * modes + [-1.0] * modes)


def make_coherent(alpha):
    """Coherent state |alpha>: identity covariance, d = (alpha, alpha*)."""
    a = alpha.value
    d = np.array([a, np.conj(a)])
    return GaussianState(d=d, sigma=np.eye(2, dtype=complex))


def make_bsmss(alpha, squeeze):
    """Bright single-mode squeezed state S(s, theta) D(alpha) |0>."""
    s, th = squeeze.s, squeeze.theta
    a = alpha.value
    e = np.exp(1j * th)
    sigma = np.array(
        [
            [np.cosh(2 * s), -e * np.sinh(2 * s)],
            [-np.conj(e) * np.sinh(2 * s), np.cosh(2 * s)],
        ],
        dtype=complex,
    )
    dp = a * np.cosh(s) - np.conj(a) * e * np.sinh(s)
    d = np.array([dp, np.conj(dp)])
    return GaussianState(d=d, sigma=sigma)


def make_btmss(alpha, beta, squeeze):
    """Bright two-mode squeezed state S_pa(s, theta) D_p(alpha) D_a(beta) |0,0>.

    Mode 0 is the probe, mode 1 the auxiliary.
    """
    s, th = squeeze.s, squeeze.theta
    a, b = alpha.value, beta.value
    e = np.exp(1j * th)
    c2, s2 = np.cosh(2 * s), np.sinh(2 * s)
    sigma = np.array(
        [
            [c2, 0, 0, -e * s2],
            [0, c2, -e * s2, 0],
            [0, -np.conj(e) * s2, c2, 0],
            [-np.conj(e) * s2, 0, 0, c2],
        ],
        dtype=complex,
    )
    ch, sh = np.cosh(s), np.sinh(s)
    d = np.array(
        [
            a * ch - np.conj(b) * e * sh,
            b * ch - np.conj(a) * e * sh,
            np.conj(a) * ch - b * np.conj(e) * sh,
            np.conj(b) * ch - a * np.conj(e) * sh,
        ]
    )
    return GaussianState(d=d, sigma=sigma)


def make_source(spec):
    """Build the generated (pre-loss) Gaussian state for a StateSpec."""
    if spec.kind is StateKind.COHERENT:
        return make_coherent(spec.alpha)
    if spec.kind is StateKind.BSMSS:
        return make_bsmss(spec.alpha, spec.squeeze)
    if spec.kind is StateKind.BTMSS:
        return make_btmss(spec.alpha, spec.beta, spec.squeeze)
    raise ValueError(f"{spec.kind} is not a Gaussian state")


def _loss_scaling(modes, mode, t):
    scale = np.ones(2 * modes)
    scale[mode] = scale[mode + modes] = math.sqrt(t)
    return scale


def apply_loss(state, mode, t):
    """Beamsplitter-with-vacuum loss of transmission t on one mode."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmission t={t} outside [0, 1]")
    m = state.modes
    if not 0 <= mode < m:
        raise ValueError(f"mode index {mode} invalid for {m}-mode state")
    scale = _loss_scaling(m, mode, t)
    D = np.diag(scale)
    sigma = D @ state.sigma @ D + np.eye(2 * m) - D @ D
    return GaussianState(d=scale * state.d, sigma=sigma)


def apply_channel(state, ch):
    """Probe through T_p, T, eta_p; auxiliary (if present) through eta_a."""
    out = apply_loss(state, 0, ch.T_p)
    out = apply_loss(out, 0, ch.T)
    out = apply_loss(out, 0, ch.eta_p)
    if state.modes == 2:
        out = apply_loss(out, 1, ch.eta_a)
    return out


def symplectic_eigenvalues(state):
    """Positive symplectic spectrum of k.sigma, sorted ascending."""
    sigma = state.sigma
    if not np.allclose(sigma, sigma.conj().T, atol=1e-10):
        raise ValueError("covariance matrix is not Hermitian")
    w = np.real(linalg.eigvals(k_matrix(state.modes) @ sigma))
    pos = np.sort(w[w > 0])
    if len(pos) != state.modes:
        raise ValueError("symplectic spectrum does not split into +/- pairs")
    return pos


def purity_det(state):
    """|det(k.sigma)|; equals 1 for pure states."""
    return abs(np.linalg.det(k_matrix(state.modes) @ state.sigma))


def check_state(state, tol=SYM_TOL):
    """Raise if sigma violates Hermiticity, block symmetry or uncertainty."""
    m = state.modes
    sigma = state.sigma
    if not np.allclose(sigma, sigma.conj().T, atol=1e-10):
        raise ValueError("sigma is not Hermitian")
    # lower-left block must be the elementwise conjugate of the upper-right
    if not np.allclose(sigma[m:, :m], np.conj(sigma[:m, m:]), atol=1e-10):
        raise ValueError("sigma lacks the complex-form block symmetry")
    if not np.allclose(state.d[m:], np.conj(state.d[:m]), atol=1e-10):
        raise ValueError("d lacks the complex-form conjugate symmetry")
    if np.min(symplectic_eigenvalues(state)) < 1.0 - tol:
        raise ValueError("uncertainty relation violated")


def photon_moments(state):
    """Photon-number mean/variance per mode and cross covariance.

    Uses the Gaussian (Wick) moment expansion; exact for any Gaussian
    state.  Single-mode states report zero auxiliary moments.
    """
    m = state.modes
    d, sigma = state.d, state.sigma

    def mode_stats(i):
        nc = (np.real(sigma[i, i]) - 1.0) / 2.0  # <da+ da>
        sq = sigma[i, i + m] / 2.0               # <da da>
        amp = d[i]
        mean = nc + abs(amp) ** 2
        var = (
            nc * nc
            + nc
            + abs(sq) ** 2
            + abs(amp) ** 2 * (2 * nc + 1)
            + 2 * np.real(np.conj(amp) ** 2 * sq)
        )
        return mean, var

    mean_p, var_p = mode_stats(0)
    if m == 1:
        return Moments(mean_p=mean_p, var_p=var_p)
    mean_a, var_a = mode_stats(1)
    E = np.conj(sigma[0, 1]) / 2.0   # <da_p+ da_a>
    F = sigma[0, 1 + m] / 2.0        # <da_p da_a>
    cov = (
        abs(E) ** 2
        + abs(F) ** 2
        + 2 * np.real(np.conj(d[0]) * np.conj(d[1]) * F)
        + 2 * np.real(d[0] * np.conj(d[1]) * E)
    )
    return Moments(mean_p=mean_p, var_p=var_p, mean_a=mean_a, var_a=var_a, cov_pa=cov)
