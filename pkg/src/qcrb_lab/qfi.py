"""Quantum Fisher information for transmission estimation.

Computes the general Gaussian QFI (four-term formula over the symplectic
form of the covariance matrix plus a displacement term), the closed-form
estimation functions for coherent / bright squeezed / Fock probes with
and without external losses, the lossy Fock QFI from its binomial density
matrix, and the maximum Fisher bound.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg, stats

from .gaussian import (
    ChannelConfig,
    GaussianState,
    StateKind,
    StateSpec,
    k_matrix,
    make_source,
    photon_moments,
)

log = logging.getLogger(__name__)

# Symplectic eigenvalues within EPS_SING of 1 have their derivative term
# dropped; the correction factor vanishes for the states handled here.
EPS_SING = 1e-9


class QFIMethod(Enum):
    CLOSED_FORM = "ClosedForm"
    GAUSSIAN_GENERAL = "GaussianGeneral"
    FOCK_SUM = "FockSum"


@dataclass(frozen=True)
class EstimationReport:
    """Estimation function, QFI, bound and photon resources for one probe."""

    lam: float          # estimation function Lambda = qcrb * n_resource
    qfi: float
    qcrb: float
    n_resource: float   # probe photons at the system input
    method: QFIMethod


def _report(qfi, n_resource, method):
    qcrb = 1.0 / qfi
    return EstimationReport(
        lam=qcrb * n_resource, qfi=qfi, qcrb=qcrb, n_resource=n_resource, method=method
    )


def fisher_max(n_resource, T):
    """Upper bound n_r / (T - T^2) on the QFI of any probe state."""
    if not 0.0 < T < 1.0:
        raise ValueError("maximum Fisher bound diverges at T in {0, 1}")
    if n_resource <= 0:
        raise ValueError("n_resource must be > 0")
    return n_resource / (T - T * T)


def big_theta(spec):
    """Combined squeezing/seed phase entering the photon-number closed forms."""
    if spec.kind is StateKind.BTMSS:
        return spec.squeeze.theta - spec.alpha.phase - spec.beta.phase
    if spec.kind is StateKind.BSMSS:
        return spec.squeeze.theta + 2.0 * spec.alpha.phase
    return 0.0


def stimulated_photons(spec):
    """Mean photon number of the bright (displacement) part of the probe."""
    source = make_source(spec)
    return float(abs(source.d[0]) ** 2)


def source_photons(spec):
    """Mean probe photons generated by the source, spontaneous included."""
    if spec.kind is StateKind.FOCK:
        return float(spec.fock_n)
    return float(photon_moments(make_source(spec)).mean_p)


@dataclass(frozen=True)
class ParamFamily:
    """A probe state and loss chain with the system transmission T free."""

    spec: StateSpec
    channel: ChannelConfig

    def _source(self):
        """Two-mode embedding of the generated state (aux = vacuum if absent)."""
        state = make_source(self.spec)
        if state.modes == 2:
            return state
        d = np.zeros(4, dtype=complex)
        d[0], d[2] = state.d
        sigma = np.eye(4, dtype=complex)
        sigma[np.ix_([0, 2], [0, 2])] = state.sigma
        return GaussianState(d=d, sigma=sigma)

    def _scalings(self, T):
        ch = self.channel
        p = ch.T_p * T * ch.eta_p
        D = np.diag([math.sqrt(p), math.sqrt(ch.eta_a)] * 2)
        dD = np.diag([math.sqrt(ch.T_p * ch.eta_p) / (2.0 * math.sqrt(T)), 0.0] * 2)
        return D, dD

    def state_at(self, T):
        src = self._source()
        D, _ = self._scalings(T)
        sigma = D @ src.sigma @ D + np.eye(4) - D @ D
        return GaussianState(d=np.diag(D) * src.d, sigma=sigma)

    def derivatives_at(self, T):
        """Analytic d(sigma)/dT and d(d)/dT of the lossy state."""
        src = self._source()
        D, dD = self._scalings(T)
        sigma_dot = dD @ src.sigma @ D + D @ src.sigma @ dD - 2.0 * D @ dD
        return sigma_dot, np.diag(dD) * src.d

    def derivatives_fd(self, T, rel_step=1e-6):
        """Richardson-extrapolated central differences; validation fallback."""
        h = rel_step * max(T, 1e-3)

        def central(step):
            sp = self.state_at(T + step)
            sm = self.state_at(T - step)
            return (sp.sigma - sm.sigma) / (2 * step), (sp.d - sm.d) / (2 * step)

        s1, d1 = central(h)
        s2, d2 = central(h / 2.0)
        return (4 * s2 - s1) / 3.0, (4 * d2 - d1) / 3.0


def _symplectic_pairs(S, S_dot):
    """Positive symplectic eigenvalues of S and their T-derivatives."""
    w, vl, vr = linalg.eig(S, left=True, right=True)
    order = [i for i in np.argsort(w.real) if w[i].real > 0]
    lam, lam_dot = [], []
    for i in order:
        lam.append(float(w[i].real))
        num = vl[:, i].conj() @ S_dot @ vr[:, i]
        den = vl[:, i].conj() @ vr[:, i]
        lam_dot.append(float((num / den).real))
    return lam, lam_dot


def qfi_gaussian(family, T, bright_limit=False):
    """QFI of a lossy Gaussian probe family at transmission T.

    Evaluates the four-term Gaussian QFI formula over Sigma = k.sigma plus
    the displacement term 2 ddot+ sigma^-1 ddot.  With bright_limit=True
    only the displacement term is kept and the resource count is the
    stimulated photon number; this reproduces the bright-seed closed
    forms independently of the seed power.
    """
    if not 0.0 < T < 1.0:
        raise ValueError("T must lie in (0, 1)")
    state = family.state_at(T)
    sigma_dot, d_dot = family.derivatives_at(T)

    disp = float(2.0 * np.real(d_dot.conj() @ np.linalg.solve(state.sigma, d_dot)))

    vac = 0.0
    k = k_matrix(2)
    S = k @ state.sigma
    S_dot = k @ sigma_dot
    if not bright_limit and np.linalg.norm(S_dot) > 1e-13 * max(1.0, np.linalg.norm(S)):
        det_S = float(np.real(np.linalg.det(S)))
        if det_S - 1.0 < 1e-12:
            raise ValueError(
                "state is pure but sigma varies with T; the mixed-state "
                "Gaussian QFI formula does not apply"
            )
        M = np.linalg.solve(S, S_dot)
        t1 = det_S * float(np.real(np.trace(M @ M)))
        S2 = np.eye(4) + S @ S
        N = np.linalg.solve(S2, S_dot)
        t2 = math.sqrt(float(np.real(np.linalg.det(S2)))) * float(
            np.real(np.trace(N @ N))
        )
        lam, lam_dot = _symplectic_pairs(S, S_dot)
        if all(abs(l - 1.0) < EPS_SING for l in lam):
            raise ValueError(
                "both symplectic eigenvalues at 1 with varying sigma; the "
                "dropped-correction regime does not cover this point"
            )

        def term(l, ld):
            if abs(l - 1.0) < EPS_SING:
                dropped = ld * ld / max(l**4 - 1.0, 1e-300)
                log.debug("dropping singular eigenvalue term of magnitude %.3e", dropped)
                return 0.0
            return ld * ld / (l**4 - 1.0)

        t3 = 4.0 * (lam[0] ** 2 - lam[1] ** 2) * (
            term(lam[1], lam_dot[1]) - term(lam[0], lam_dot[0])
        )
        vac = (t1 + t2 + t3) / (2.0 * (det_S - 1.0))

    qfi = disp if bright_limit else vac + disp
    if bright_limit:
        n_r = family.channel.T_p * stimulated_photons(family.spec)
    else:
        n_r = family.channel.T_p * source_photons(family.spec)
    return _report(qfi, n_r, QFIMethod.GAUSSIAN_GENERAL)


def lambda_pure(spec, T):
    """Lossless estimation functions; bright limit for the squeezed kinds."""
    if not 0.0 < T < 1.0:
        raise ValueError("T must lie in (0, 1)")
    if spec.kind is StateKind.COHERENT:
        return T
    if spec.kind is StateKind.BTMSS:
        return T - T * T * (1.0 - 1.0 / math.cosh(2.0 * spec.squeeze.s))
    if spec.kind is StateKind.BSMSS:
        return T - T * T * (1.0 - math.exp(-2.0 * spec.squeeze.s))
    return T - T * T  # Fock (and vTMSS)


def h_factor(s, eta_a):
    """Auxiliary-loss degradation factor for the bTMSS quantum advantage."""
    if not 0.0 <= eta_a <= 1.0:
        raise ValueError("eta_a outside [0, 1]")
    if s < 0:
        raise ValueError("s must be >= 0")
    sh2 = math.sinh(s) ** 2
    return (2.0 * eta_a - 1.0) * (1.0 + 2.0 * sh2) / (1.0 + 2.0 * eta_a * sh2)


def lambda_lossy(spec, channel):
    """Closed-form estimation function with external losses.

    Bright-limit forms for the squeezed kinds; resources are the photons
    at the system input, n_r = T_p <n_p>_0 with the stimulated photon
    count for the squeezed states.
    """
    T, T_p, eta_p = channel.T, channel.T_p, channel.eta_p
    if not 0.0 < T < 1.0:
        raise ValueError("T must lie in (0, 1)")
    base = T / eta_p
    if spec.kind is StateKind.COHERENT:
        lam = base
        n_r = T_p * spec.alpha.magnitude**2
    elif spec.kind is StateKind.BTMSS:
        s = spec.squeeze.s
        lam = base - T * T * T_p * h_factor(s, channel.eta_a) * (
            1.0 - 1.0 / math.cosh(2.0 * s)
        )
        n_r = T_p * stimulated_photons(spec)
    elif spec.kind is StateKind.BSMSS:
        s = spec.squeeze.s
        lam = base - T * T * T_p * (1.0 - math.exp(-2.0 * s))
        n_r = T_p * stimulated_photons(spec)
    elif spec.kind is StateKind.FOCK:
        lam = base - T * T * T_p
        n_r = T_p * spec.fock_n
    else:
        raise ValueError(f"unsupported state kind {spec.kind}")
    if n_r <= 0:
        raise ValueError("probe carries no photons at the system input")
    return EstimationReport(
        lam=lam,
        qfi=n_r / lam,
        qcrb=lam / n_r,
        n_resource=n_r,
        method=QFIMethod.CLOSED_FORM,
    )


def qfi_btmss_full(alpha, beta, squeeze, T):
    """Exact lossless bTMSS QFI: vacuum term plus stimulated term."""
    if not 0.0 < T < 1.0:
        raise ValueError("T must lie in (0, 1)")
    s, th = squeeze.s, squeeze.theta
    n_vac = math.sinh(s) ** 2
    theta_c = th - alpha.phase - beta.phase
    n_bright = (
        alpha.magnitude**2 * math.cosh(s) ** 2
        + beta.magnitude**2 * math.sinh(s) ** 2
        - alpha.magnitude * beta.magnitude * math.cos(theta_c) * math.sinh(2 * s)
    )
    sech = 1.0 / math.cosh(2.0 * s)
    return n_vac / (T - T * T) + n_bright / (T - T * T + T * T * sech)


def lossy_symplectic_closed_form(squeeze, channel):
    """Positive symplectic eigenvalues of the lossy TMSS covariance matrix."""
    s = squeeze.s
    p = channel.probe_transmission
    eta_a = channel.eta_a
    sh2 = math.sinh(s) ** 2
    A = (p - eta_a) * sh2
    inner = (
        1.0
        - eta_a
        + p * (2.0 * eta_a - 1.0)
        + (eta_a + p * (1.0 - 2.0 * eta_a)) * math.cosh(2.0 * s)
        + (p - eta_a) ** 2 * sh2 * sh2
    )
    B = math.sqrt(inner)
    return (A + B, B - A)


def fock_qfi_lossy(n, channel):
    """QFI of an n-photon Fock probe from its binomial lossy density matrix.

    The lossy Fock state is diagonal in the number basis with weights
    rho_k = C(n,k) p^k (1-p)^(n-k), p = T_p T eta_p, so the QFI reduces
    to sum_k (d rho_k / dT)^2 / rho_k.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = channel.probe_transmission
    if not 0.0 < p < 1.0:
        raise ValueError("total probe transmission must lie in (0, 1)")
    kk = np.arange(n + 1)
    rho = stats.binom.pmf(kk, n, p)
    dp_dT = channel.T_p * channel.eta_p
    drho = rho * (kk - n * p) / (p * (1.0 - p)) * dp_dT
    mask = rho > 1e-300
    qfi = float(np.sum(drho[mask] ** 2 / rho[mask]))
    n_r = channel.T_p * n
    return _report(qfi, n_r, QFIMethod.FOCK_SUM)


def bright_limit_threshold(T, s):
    """Seed photon scale the stimulated term must greatly exceed."""
    if not 0.0 < T < 1.0:
        raise ValueError("T must lie in (0, 1)")
    sech = 1.0 / math.cosh(2.0 * s)
    return (1.0 - T + T * sech) / (1.0 - T) * math.sinh(s) ** 2
