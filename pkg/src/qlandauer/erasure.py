"""Heat statistics of an environment-assisted erasure.

The system and a thermal environment start uncorrelated and evolve under a
joint unitary. Seen from the environment this is a quantum operation with
Kraus operators ``A_jk = sqrt(lambda_j) <s_k|U|s_j>``, where ``lambda_j`` and
``|s_j>`` diagonalize the initial system state. Heat is the energy change of
the environment measured in the eigenbasis of its Hamiltonian (Q > 0 means
energy deposited in the environment).
"""
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from . import gad, kernels
from .errors import DomainError, PreconditionError, ShapeError, UnitarityError
from .linalg import (
    HermitianOperator,
    Keep,
    eig_hermitian,
    expm_unitary,
    gibbs_populations,
    gibbs_state,
    kron,
    max_abs,
    partial_trace,
    vn_entropy,
)
from .model import ModelParams, build_h_env, build_h_sys, build_h_total, prepare_system

UNITARITY_ATOL = 1e-8
COMMUTATOR_ATOL = 1e-8
ZERO_WEIGHT = 1e-14
# |<r_n|A_l|r_m>|^2 summed over l; below this a transition is round-off.
TRANSITION_FLOOR = 1e-24
BIN_RTOL = 1e-9
R_GRID_POINTS = 10_000
R_GOLDEN_TOL = 1e-10


@dataclass
class KrausSet:
    """Environment-side Kraus operators, stacked as ``operators[l]`` with l = j*d_S + k."""

    operators: np.ndarray
    source_weights: np.ndarray

    def __len__(self):
        return len(self.operators)

    @property
    def dim(self):
        return self.operators.shape[1]

    def apply(self, rho_e):
        a = self.operators
        return np.einsum("lij,jk,lmk->im", a, rho_e, a.conj())

    def a_operator(self):
        """sum_l A_l A_l^dag; equal to the identity iff the operation is unital."""
        a = self.operators
        return np.einsum("lij,lkj->ik", a, a.conj())

    def completeness(self):
        a = self.operators
        return np.einsum("lji,ljk->ik", a.conj(), a)

    def trace_residual(self):
        return max_abs(self.completeness() - np.eye(self.dim))


@dataclass
class HeatDistribution:
    """Discrete heat distribution: probability ``p[k]`` at heat ``q[k]`` (q ascending)."""

    q: np.ndarray
    p: np.ndarray
    bin_tolerance: float = 0.0

    def __len__(self):
        return len(self.q)

    @property
    def points(self):
        return list(zip(self.q.tolist(), self.p.tolist()))


def _check_unitary(u):
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ShapeError(f"propagator must be square, got {u.shape}")
    dev = max_abs(u.conj().T @ u - np.eye(u.shape[0]))
    if dev > UNITARITY_ATOL:
        raise UnitarityError(f"propagator deviates from unitary by {dev:.3e}")
    return u


def _dims(u, rho_s, rho_e):
    d_s, d_e = rho_s.shape[0], rho_e.shape[0]
    if u.shape[0] != d_s * d_e:
        raise ShapeError(f"propagator of dim {u.shape[0]} does not act on {d_s}x{d_e}")
    return d_s, d_e


def evolve_joint(u, rho_s, rho_e):
    """Return ``(rho_SE', rho_S', rho_E')`` after ``U (rho_S (x) rho_E) U^dag``."""
    u = _check_unitary(u)
    rho_s = np.asarray(rho_s, dtype=complex)
    rho_e = np.asarray(rho_e, dtype=complex)
    dims = _dims(u, rho_s, rho_e)
    rho_se = u @ kron(rho_s, rho_e) @ u.conj().T
    return (
        rho_se,
        partial_trace(rho_se, Keep.SYSTEM, dims),
        partial_trace(rho_se, Keep.ENVIRONMENT, dims),
    )


def kraus_from_unitary(u, rho_s):
    u = _check_unitary(u)
    rho_s = np.asarray(rho_s, dtype=complex)
    d_s = rho_s.shape[0]
    if u.shape[0] % d_s:
        raise ShapeError(f"propagator of dim {u.shape[0]} has no factor {d_s}")
    d_e = u.shape[0] // d_s
    lam, vecs = eig_hermitian(rho_s)
    lam = np.where(lam <= ZERO_WEIGHT, 0.0, lam)
    u4 = u.reshape(d_s, d_e, d_s, d_e)
    # blocks[k, j] = <s_k| U |s_j>, an operator on E
    blocks = np.einsum("ak,aebf,bj->kjef", vecs.conj(), u4, vecs)
    ops = np.sqrt(lam)[None, :, None, None] * blocks
    ops = ops.transpose(1, 0, 2, 3).reshape(d_s * d_s, d_e, d_e)
    return KrausSet(operators=np.ascontiguousarray(ops), source_weights=lam)


def heat_distribution(kraus, h_env, rho_e, bin_tolerance=None, populations=None):
    """Two-point-measurement heat distribution of the environment.

    Gaps ``E_n - E_m`` closer than ``bin_tolerance`` (default
    ``1e-9 * max(1, spectral range)``) are merged into one point at their
    probability-weighted mean.

    ``populations`` optionally supplies the eigenbasis populations of
    ``rho_e`` (ascending energy order). Read back from a dense matrix, small
    Boltzmann weights only carry absolute precision, which ``exp(-beta Q)``
    amplifies at low temperature; pass :func:`~qlandauer.linalg.gibbs_populations`
    for a thermal state.
    """
    if not isinstance(h_env, HermitianOperator):
        h_env = HermitianOperator(h_env)
    rho_e = np.asarray(rho_e, dtype=complex)
    comm = max_abs(h_env.matrix @ rho_e - rho_e @ h_env.matrix)
    if comm > COMMUTATOR_ATOL:
        raise PreconditionError(f"environment state does not commute with H_E ({comm:.3e})")
    energies, basis = h_env.spectrum()
    if bin_tolerance is None:
        bin_tolerance = BIN_RTOL * max(1.0, float(energies[-1] - energies[0]))
    if populations is None:
        pops = np.einsum("im,ij,jm->m", basis.conj(), rho_e, basis).real
    else:
        pops = np.asarray(populations, dtype=float)
        if pops.shape != energies.shape:
            raise ShapeError(f"{pops.shape[0]} populations for a {energies.shape[0]}-level environment")
    a_r = np.einsum("in,lij,jm->lnm", basis.conj(), kraus.operators, basis)
    trans = np.sum(a_r.real**2 + a_r.imag**2, axis=0)
    keep = trans > TRANSITION_FLOOR
    weights = (trans * pops[None, :])[keep]
    gaps = (energies[:, None] - energies[None, :])[keep]
    order = np.argsort(gaps, kind="stable")
    q, p = kernels.merge_sorted_comb(
        np.ascontiguousarray(gaps[order]), np.ascontiguousarray(weights[order]), float(bin_tolerance)
    )
    return HeatDistribution(q=q, p=p, bin_tolerance=float(bin_tolerance))


def average_heat(dist):
    return float(np.dot(dist.q, dist.p))


def exp_heat_via_dist(dist, beta):
    return float(np.dot(dist.p, np.exp(-beta * dist.q)))


def exp_heat_via_A(kraus, rho_e):
    """tr[(sum_l A_l A_l^dag) rho_E]; rho_E must be the Gibbs state of the heat statistics."""
    return float(np.trace(kraus.a_operator() @ rho_e).real)


def m_operator(u, rho_e, d_s=2):
    """tr_E[U^dag (1_S (x) rho_E) U], a positive operator on the system."""
    u = np.asarray(u, dtype=complex)
    rho_e = np.asarray(rho_e, dtype=complex)
    d_e = rho_e.shape[0]
    if u.shape[0] != d_s * d_e:
        raise ShapeError(f"propagator of dim {u.shape[0]} does not act on {d_s}x{d_e}")
    return partial_trace(u.conj().T @ kron(np.eye(d_s), rho_e) @ u, Keep.SYSTEM, (d_s, d_e))


def exp_heat_via_M(u, rho_e, rho_s):
    rho_s = np.asarray(rho_s, dtype=complex)
    m = m_operator(u, rho_e, rho_s.shape[0])
    return float(np.trace(m @ rho_s).real)


def nonunitality(kraus):
    """Frobenius distance of sum_l A_l A_l^dag from the identity."""
    return float(np.linalg.norm(kraus.a_operator() - np.eye(kraus.dim)))


def bound_Q(exp_heat):
    if not (exp_heat > 0.0 and math.isfinite(exp_heat)):
        raise DomainError(f"exponentiated heat must be positive and finite, got {exp_heat}")
    return -math.log(exp_heat)


def delta_S(rho_s_initial, rho_s_final):
    """S(rho_S) - S(rho_S'); negative when the system entropy grows."""
    return vn_entropy(rho_s_initial) - vn_entropy(rho_s_final)


def _r_objective_grid(r, d):
    lg = np.log((1.0 - r) * (d - 1.0) / r)
    return r * (1.0 - r) * lg * lg


@functools.lru_cache(maxsize=64)
def compute_R(d):
    """max over 0 < r < 1/2 of r (1 - r) ln^2[(1 - r)(d - 1)/r].

    A uniform grid of interior points locates the peak; golden-section search
    then refines it inside the two neighbouring grid cells.
    """
    if int(d) != d or d < 2:
        raise DomainError(
            f"dimension must be an integer >= 2, got {d}: for d = 1 the logarithm "
            "argument (1 - r)(d - 1)/r is zero"
        )
    d = float(d)
    n = R_GRID_POINTS
    step = 0.5 / (n + 1)
    grid = step * np.arange(1, n + 1)
    values = _r_objective_grid(grid, d)
    i = int(np.argmax(values))
    lo = step * i if i > 0 else 0.5 * grid[0]
    hi = step * (i + 2)
    _, f_best = kernels.golden_max_r(d, lo, hi, R_GOLDEN_TOL)
    return float(max(f_best, values[i]))


def bound_RW(entropy_final_system, d):
    """R - sqrt(R^2 + 2 R S) for final system entropy S and environment dimension d."""
    s = float(entropy_final_system)
    if s < 0.0:
        raise DomainError(f"entropy must be non-negative, got {s}")
    r = compute_R(d)
    radicand = r * r + 2.0 * r * s
    if radicand < 0.0:
        raise DomainError(f"negative radicand {radicand}")
    return r - math.sqrt(radicand)


def rw_dimension(N, offset=0):
    """Environment dimension used in the finite-size bound: 2**(N + offset)."""
    exponent = N + int(offset)
    if exponent < 1:
        raise DomainError(f"2**{exponent} is below the minimum dimension 2")
    return 2**exponent


@dataclass
class ErasureRecord:
    params: ModelParams
    avg_heat_beta: float
    bound_Q: float
    bound_RW: float
    delta_S: float
    exp_heat_A: float
    exp_heat_M: float
    exp_heat_dist: float
    nonunitality: float
    trace_residual: float
    entropy_final_system: float

    def as_row(self):
        p = self.params
        return {
            "alpha": p.alpha,
            "beta": p.beta,
            "Jt": p.Jt,
            "N": p.N,
            "J": p.J,
            "J0": p.J0,
            "B": p.B,
            "B0": p.B0,
            "avg_heat_beta": self.avg_heat_beta,
            "bound_Q": self.bound_Q,
            "bound_RW": self.bound_RW,
            "delta_S": self.delta_S,
            "exp_heat_A": self.exp_heat_A,
            "exp_heat_M": self.exp_heat_M,
            "exp_heat_dist": self.exp_heat_dist,
            "nonunitality": self.nonunitality,
            "trace_residual": self.trace_residual,
            "entropy_final_system": self.entropy_final_system,
        }


@dataclass
class PointAnalysis:
    """A record plus the intermediate objects and cross-check residuals behind it."""

    record: ErasureRecord
    mean_heat: float
    residuals: dict = field(default_factory=dict)
    rho_s: np.ndarray = None
    rho_s_final: np.ndarray = None
    rho_e: np.ndarray = None
    rho_e_final: np.ndarray = None
    kraus: KrausSet = None
    distribution: HeatDistribution = None


def analyze_point(params, rw_dimension_exponent_offset=0, kraus_hook=None):
    """Run every route of the pipeline for one parameter point.

    ``kraus_hook`` may replace the Kraus set before it is used (fault
    injection for the verifier).
    """
    h_env = build_h_env(params)
    h_tot = build_h_total(params)
    u = expm_unitary(h_tot, params.t)
    rho_e = gibbs_state(h_env, params.beta)
    rho_s = prepare_system(params.alpha)

    _, rho_s_final, rho_e_final = evolve_joint(u, rho_s, rho_e)
    kraus = kraus_from_unitary(u, rho_s)
    if kraus_hook is not None:
        kraus = kraus_hook(kraus)
    dist = heat_distribution(kraus, h_env, rho_e, populations=gibbs_populations(h_env, params.beta))

    mean_q = average_heat(dist)
    e_dist = exp_heat_via_dist(dist, params.beta)
    e_a = exp_heat_via_A(kraus, rho_e)
    e_m = exp_heat_via_M(u, rho_e, rho_s)
    b_q = bound_Q(e_a)
    s_final = vn_entropy(rho_s_final)
    d_s = vn_entropy(rho_s) - s_final
    b_rw = bound_RW(s_final, rw_dimension(params.N, rw_dimension_exponent_offset))
    trace_res = kraus.trace_residual()

    record = ErasureRecord(
        params=params,
        avg_heat_beta=params.beta * mean_q,
        bound_Q=b_q,
        bound_RW=b_rw,
        delta_S=d_s,
        exp_heat_A=e_a,
        exp_heat_M=e_m,
        exp_heat_dist=e_dist,
        nonunitality=nonunitality(kraus),
        trace_residual=trace_res,
        entropy_final_system=s_final,
    )
    h = h_env.matrix
    residuals = {
        "trace_preservation": trace_res,
        "operation_identity": max_abs(kraus.apply(rho_e) - rho_e_final),
        "exp_heat_dist_vs_A": abs(e_dist - e_a),
        "exp_heat_A_vs_M": abs(e_a - e_m),
        "moment": abs(mean_q - float(np.trace(h @ (rho_e_final - rho_e)).real)),
        "normalization": abs(float(np.sum(dist.p)) - 1.0),
        "min_probability": float(np.min(dist.p)),
        "jensen_slack": record.avg_heat_beta - b_q,
        "landauer_slack": record.avg_heat_beta - d_s,
    }
    return PointAnalysis(
        record=record,
        mean_heat=mean_q,
        residuals=residuals,
        rho_s=rho_s,
        rho_s_final=rho_s_final,
        rho_e=rho_e,
        rho_e_final=rho_e_final,
        kraus=kraus,
        distribution=dist,
    )


def gad_residuals(analysis):
    """Deviation of a one-spin matched-coupling point from the closed forms."""
    p = analysis.record.params
    gp = gad.GadParams.single_spin(p.J, p.t, p.beta, p.B)
    rho_rot = gad.corotating_frame(analysis.rho_s_final, build_h_sys(p), p.t)
    return {
        "gad_avg_heat": abs(
            analysis.record.avg_heat_beta - gad.analytic_avg_heat(p.alpha, p.beta, p.B, p.J, p.t)
        ),
        "gad_mean_heat": abs(
            analysis.mean_heat - gad.analytic_mean_heat(p.alpha, p.beta, p.B, p.J, p.t)
        ),
        "gad_bound_Q": abs(analysis.record.bound_Q - gad.analytic_BQ(p.alpha, gp.phi, gp.p, gp.q)),
        "gad_final_state": max_abs(rho_rot - gad.analytic_final_state(p.alpha, gp)),
    }


def erasure_report(params, rw_dimension_exponent_offset=0):
    return analyze_point(params, rw_dimension_exponent_offset).record
