"""Quantum walks on the integer lattice with Wigner rotation-matrix coins.

The walker carries a (2j+1)-component internal state; each step rotates it
with ``R^{(j)}(alpha, beta, gamma)`` and shifts component ``m`` by ``-2m``.
The package simulates the walk, computes the long-time law of ``X_t / t``
and reduces qubit-product walks into irreducible blocks.
"""

from __future__ import annotations

from .errors import (
    ConfigError,
    ConsistencyError,
    DegenerateAngleError,
    DegenerateCoinError,
    DomainError,
    WalkError,
)
from .limit import (
    LimitDistribution,
    WeightMode,
    WeightPolynomial,
    chi_to_k,
    continuous_mass,
    delta_weight,
    konno_density,
    limit_distribution,
    limit_moment,
    limit_moment_integral,
    positive_modes,
    projection_coefficient,
    projection_coefficients,
    weight_function_numeric,
    weight_polynomial_closed,
)
from .presets import PRESETS, Preset, get_preset
from .rotation import (
    DiagonalRotation,
    EulerAngles,
    HalfInt,
    RotationMatrix,
    SpectralAngles,
    diagonal_rotation,
    gamma_coefficient,
    magnetic_indices,
    recompose,
    rotation_matrix,
    small_d_halfangle,
    spectral_angles,
    wigner_small_d,
)
from .tensor import (
    BlockDecomposition,
    BlockEntry,
    ProductQudit,
    ReductionMatrix,
    block_walk_distributions,
    decompose_initial,
    decomposition_deviation,
    reduction_matrix,
    tensor_coin,
    tensor_evolution,
    tensor_shift,
    tensor_walk_distribution,
    tensor_walk_distributions,
)
from .walk import (
    Histogram,
    Qudit,
    SiteDistribution,
    WaveFunction,
    distribution,
    evolve,
    evolve_distributions,
    initial_state,
    moment,
    pseudovelocity_histogram,
    pseudovelocity_moment,
    step,
)

__version__ = "0.1.0"
