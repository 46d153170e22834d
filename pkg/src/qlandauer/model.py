"""Hamiltonians and initial states for a qubit coupled to an XX chain.

Single-qubit basis order is ``(|1>, |0>)``: index 0 is the +1 eigenstate of
sigma_z. The chain's sites are numbered 1..N with site 1 touching the system,
which maps to the leftmost environment tensor factor.
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .linalg import (
    IDENTITY_2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HermitianOperator,
    embed,
    kron,
)

N_MAX = 6


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of one erasure run (hbar = k_B = 1).

    ``t`` is the evolution time; ``Jt`` is the dimensionless product reported
    in sweeps.
    """

    N: int = 1
    J: float = 1.0
    J0: float = 1.0
    B: float = 1.0
    B0: float = 1.0
    beta: float = 1.0
    alpha: float = 1.0
    t: float = 1.0

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or not 1 <= self.N <= N_MAX:
            raise DomainError(f"N must be an integer in [1, {N_MAX}], got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        for name in ("J", "J0", "B", "B0", "beta", "alpha", "t"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.beta < 0.0:
            raise DomainError(f"beta must be >= 0, got {self.beta}")

    @property
    def Jt(self):
        return self.J * self.t

    @property
    def matched(self):
        """True when B0 == B and J0 == J (the generalized amplitude damping regime)."""
        return self.B0 == self.B and self.J0 == self.J

    def with_(self, **changes):
        return replace(self, **changes)

    @classmethod
    def from_jt(cls, Jt, J=1.0, **kwargs):
        if J == 0:
            raise DomainError("Jt cannot be converted to a time when J == 0")
        return cls(J=J, t=Jt / J, **kwargs)


def build_h_env(params):
    """Open XX chain: J sum_j (XX + YY)_{j,j+1} + B sum_j Z_j on 2^N states."""
    n = params.N
    h = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(n - 1):
        for s in (SIGMA_X, SIGMA_Y):
            h += params.J * embed(s, j, n) @ embed(s, j + 1, n)
    for j in range(n):
        h += params.B * embed(SIGMA_Z, j, n)
    return HermitianOperator(h)


def build_h_int(params):
    """J0 (X_S X_1 + Y_S Y_1), acting on S (x) E."""
    n = params.N
    h = np.zeros((2 ** (n + 1), 2 ** (n + 1)), dtype=complex)
    for s in (SIGMA_X, SIGMA_Y):
        h += params.J0 * kron(s, embed(s, 0, n))
    return HermitianOperator(h)


def build_h_sys(params):
    """B0 sigma_z = B0 (|1><1| - |0><0|)."""
    return HermitianOperator(params.B0 * SIGMA_Z)


def build_h_total(params):
    d_e = 2**params.N
    h = (
        kron(build_h_sys(params).matrix, np.eye(d_e))
        + kron(IDENTITY_2, build_h_env(params).matrix)
        + build_h_int(params).matrix
    )
    return HermitianOperator(h)


def total_magnetization(n_env, include_system=True):
    """Sum of sigma_z over the chain, optionally plus the system spin (as S (x) E)."""
    m_env = sum(embed(SIGMA_Z, j, n_env) for j in range(n_env))
    if not include_system:
        return m_env
    return kron(SIGMA_Z, np.eye(2**n_env)) + kron(IDENTITY_2, m_env)


def prepare_system(alpha):
    """Projector onto alpha|1> + sqrt(1 - alpha^2)|0>."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    psi = np.array([alpha, math.sqrt(1.0 - alpha * alpha)], dtype=complex)
    return np.outer(psi, psi.conj())


def env_all_zero_index(n_env):
    """Index of |0...0>_E; |0> is the second basis state of each qubit."""
    return 2**n_env - 1
