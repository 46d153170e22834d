"""Closed-form generalized amplitude damping results for a one-spin bath.

With a single environment spin and matched couplings (B0 = B, J0 = J) the
reduced system dynamics is a generalized amplitude damping channel with
transition amplitude ``phi = cos(2 J t)`` and ground-state weight
``p = [1 + tanh(beta B)] / 2``. The channel's Kraus operators are written in
the frame co-rotating with the free system Hamiltonian; use
:func:`corotating_frame` before comparing against lab-frame states.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import CompletenessError, DomainError, ShapeError
from .linalg import expm_unitary, max_abs
from .model import env_all_zero_index

COMPLETENESS_ATOL = 1e-10


@dataclass(frozen=True)
class GadParams:
    """Channel parameters; ``q`` is ``1 - p``, kept separately for precision near p = 1."""

    phi: float
    p: float
    q: float = None

    def __post_init__(self):
        if not -1.0 <= self.phi <= 1.0:
            raise DomainError(f"phi must lie in [-1, 1], got {self.phi}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if self.q is None:
            object.__setattr__(self, "q", 1.0 - self.p)

    @classmethod
    def single_spin(cls, J, t, beta, B):
        return cls(phi_single(J, t), p_single(beta, B), p_single_complement(beta, B))


def phi_single(J, t):
    return math.cos(2.0 * J * t)


def p_single(beta, B):
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    return 0.5 * (1.0 + math.tanh(beta * B))


def p_single_complement(beta, B):
    """1 - p = [1 - tanh(beta B)] / 2 = 1 / (1 + exp(2 beta B)), without cancellation."""
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    x = 2.0 * beta * B
    if x > 0:
        e = math.exp(-x)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(x))


def phi_general(h_total, N, t):
    """Survival amplitude <1|<0..0| exp(-iHt) |0..0>|1> for an N-spin chain."""
    d = 2 ** (N + 1)
    if h_total.dim != d:
        raise ShapeError(f"Hamiltonian of dim {h_total.dim} does not match N={N}")
    # |1>_S is index 0, so the joint index is just the environment index.
    idx = env_all_zero_index(N)
    u = expm_unitary(h_total, t)
    return complex(u[idx, idx])


def gad_kraus(gp):
    """The four system-side Kraus matrices in the (|1>, |0>) basis."""
    phi, p = gp.phi, gp.p
    s = math.sqrt(max(0.0, 1.0 - phi * phi))
    a = math.sqrt(p)
    b = math.sqrt(gp.q)
    return [
        a * np.array([[phi, 0], [0, 1]], dtype=complex),
        a * np.array([[0, 0], [s, 0]], dtype=complex),
        b * np.array([[1, 0], [0, phi]], dtype=complex),
        b * np.array([[0, s], [0, 0]], dtype=complex),
    ]


def completeness_residual(kraus):
    d = kraus[0].shape[1]
    total = sum(k.conj().T @ k for k in kraus)
    return max_abs(total - np.eye(d))


def apply_channel(kraus_sys, rho_s):
    if completeness_residual(kraus_sys) > COMPLETENESS_ATOL:
        raise CompletenessError("Kraus operators do not sum to the identity")
    rho_s = np.asarray(rho_s, dtype=complex)
    return sum(k @ rho_s @ k.conj().T for k in kraus_sys)


def corotating_frame(rho_s, h_sys, t):
    """Undo free system precession: exp(i H_S t) rho exp(-i H_S t)."""
    r = expm_unitary(h_sys, -t)
    return r @ rho_s @ r.conj().T


def analytic_mean_heat(alpha, beta, B, J, t):
    """<Q> = B sin^2(2Jt) (2 alpha^2 + tanh(beta B) - 1)."""
    return B * math.sin(2.0 * J * t) ** 2 * (2.0 * alpha * alpha + math.tanh(beta * B) - 1.0)


def analytic_avg_heat(alpha, beta, B, J, t):
    """beta <Q> for the one-spin bath.

    The energy bookkeeping gives ``<Q>`` itself as
    ``B sin^2(2Jt)(2 alpha^2 + tanh(beta B) - 1)``; this returns beta times it.
    The two coincide only at beta = 1.
    """
    return beta * analytic_mean_heat(alpha, beta, B, J, t)


def analytic_exp_heat(alpha, phi, p, q=None):
    """<exp(-beta Q)> = 2 (1 - phi^2)(alpha^2 + p - 2 p alpha^2) + phi^2.

    The middle factor is evaluated as ``alpha^2 q + (1 - alpha^2) p`` with
    ``q = 1 - p``; pass ``q`` directly when p is close to 1.
    """
    if q is None:
        q = 1.0 - p
    a2 = alpha * alpha
    return 2.0 * (1.0 - phi * phi) * (a2 * q + (1.0 - a2) * p) + phi * phi


def analytic_BQ(alpha, phi, p, q=None):
    arg = analytic_exp_heat(alpha, phi, p, q)
    if not arg > 0.0:
        raise DomainError(f"logarithm argument must be positive, got {arg}")
    return -math.log(arg)


def analytic_final_state(alpha, gp):
    """Channel output for the pure input alpha|1> + sqrt(1 - alpha^2)|0>."""
    psi = np.array([alpha, math.sqrt(1.0 - alpha * alpha)], dtype=complex)
    return apply_channel(gad_kraus(gp), np.outer(psi, psi.conj()))
