"""Heat statistics and erasure bounds for a qubit coupled to a finite XX spin chain."""
from .erasure import (
    ErasureRecord,
    HeatDistribution,
    KrausSet,
    analyze_point,
    average_heat,
    bound_Q,
    bound_RW,
    compute_R,
    delta_S,
    erasure_report,
    evolve_joint,
    exp_heat_via_A,
    exp_heat_via_dist,
    exp_heat_via_M,
    heat_distribution,
    kraus_from_unitary,
    nonunitality,
)
from .model import ModelParams

__version__ = "0.1.0"
