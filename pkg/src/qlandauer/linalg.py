"""Dense complex linear algebra for small spin Hilbert spaces.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Composite
spaces are always ordered system first, environment second, so that the row
index of a joint operator is ``i_S * d_E + i_E``.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, HermiticityError, PreconditionError, ShapeError

HERMITIAN_RTOL = 1e-12
EIG_CLAMP = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class Keep(Enum):
    SYSTEM = "system"
    ENVIRONMENT = "environment"


def _as_square(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return m


def check_hermitian(m):
    """Raise HermiticityError unless ``max|M - M^dag| <= 1e-12 * max(1, max|M|)``."""
    m = _as_square(m)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > HERMITIAN_RTOL * scale:
        raise HermiticityError(f"matrix deviates from Hermitian by {dev:.3e}")
    return m


@dataclass
class HermitianOperator:
    """A Hermitian matrix with a lazily cached spectral decomposition."""

    matrix: np.ndarray
    _spectrum: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.matrix = check_hermitian(self.matrix)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def spectrum(self):
        """Eigenvalues (ascending) and orthonormal eigenvector columns."""
        if self._spectrum is None:
            self._spectrum = eig_hermitian(self.matrix)
        return self._spectrum

    def __add__(self, other):
        return HermitianOperator(self.matrix + _matrix_of(other))

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


def _matrix_of(h):
    return h.matrix if isinstance(h, HermitianOperator) else np.asarray(h, dtype=complex)


def kron(a, b):
    """Kronecker product; entry ``(i*b.rows + k, j*b.cols + l) = a[i, j] * b[k, l]``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*factors):
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = kron(out, f)
    return out


def eig_hermitian(h):
    """Spectral decomposition of a Hermitian operator.

    Parameters
    ----------
    h : HermitianOperator or array_like
        Operator to diagonalize; raw arrays are checked for hermiticity.

    Returns
    -------
    eigenvalues : ndarray of float
        Sorted ascending.
    eigenvectors : ndarray of complex
        Orthonormal columns, ``h = V diag(eigenvalues) V^dag``.
    """
    m = h.matrix if isinstance(h, HermitianOperator) else check_hermitian(h)
    # LAPACK reads one triangle only; symmetrize so both halves count.
    evals, evecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return evals, evecs


def _spectrum_of(h):
    if isinstance(h, HermitianOperator):
        return h.spectrum()
    return eig_hermitian(h)


def expm_unitary(h, t):
    """Return ``exp(-i h t)`` built from the spectral decomposition of ``h``."""
    evals, evecs = _spectrum_of(h)
    phases = np.exp(-1j * evals * t)
    return (evecs * phases) @ evecs.conj().T


def gibbs_state(h, beta):
    """Thermal state ``exp(-beta h) / Z``; beta = 0 gives the maximally mixed state."""
    beta = float(beta)
    if not np.isfinite(beta):
        raise DomainError(f"inverse temperature must be finite, got {beta}")
    if beta < 0:
        raise DomainError(f"inverse temperature must be >= 0, got {beta}")
    evals, evecs = _spectrum_of(h)
    weights = np.exp(-beta * (evals - evals[0]))
    weights /= weights.sum()
    return (evecs * weights) @ evecs.conj().T


def gibbs_populations(h, beta):
    """Boltzmann weights of the eigenstates of ``h`` in ascending energy order."""
    evals, _ = _spectrum_of(h)
    weights = np.exp(-float(beta) * (evals - evals[0]))
    return weights / weights.sum()


def partial_trace(rho, keep, dims):
    """Reduce a state on S (x) E to one factor.

    ``keep`` is a :class:`Keep` member (or its string value); ``dims`` is
    ``(d_S, d_E)``.
    """
    keep = Keep(keep)
    d_s, d_e = dims
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d_s * d_e, d_s * d_e):
        raise ShapeError(f"state of shape {rho.shape} does not match dims {dims}")
    r = rho.reshape(d_s, d_e, d_s, d_e)
    if keep is Keep.SYSTEM:
        return np.einsum("ikjk->ij", r)
    return np.einsum("kikj->ij", r)


def check_density(rho, atol=EIG_CLAMP):
    """Validate unit trace, hermiticity and positivity; return the matrix."""
    rho = check_hermitian(rho)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > atol:
        raise PreconditionError(f"density operator has trace {tr!r}")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < -atol:
        raise PreconditionError(f"density operator has negative eigenvalue {lo:.3e}")
    return rho


def vn_entropy(rho):
    """Von Neumann entropy in nats, with 0 ln 0 = 0."""
    lam = np.linalg.eigvalsh(_matrix_of(rho))
    lam = np.clip(lam, 0.0, None)
    nz = lam[lam > 0]
    # an eigenvalue rounded above 1 would give -0.0...1
    return max(0.0, float(-np.sum(nz * np.log(nz))))


def commutator(a, b):
    a, b = _matrix_of(a), _matrix_of(b)
    return a @ b - b @ a


def max_abs(m):
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def embed(op, site, n_sites):
    """Place a single-qubit operator on ``site`` (0-based) of an ``n_sites`` register."""
    factors = [IDENTITY_2] * n_sites
    factors[site] = op
    return kron_all(*factors)
