"""Tensor-product walks of M qubit coins and their block reduction.

Basis states ``|(m_1, ..., m_M)>`` with ``m_n = +-1`` are ordered
lexicographically with ``+1`` first, e.g. for M = 2:
``|(1,1)>, |(1,-1)>, |(-1,1)>, |(-1,-1)>``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rotation import EulerAngles, HalfInt, rotation_matrix
from .walk import Qudit, SiteDistribution, _distribution_stream, evolve_distributions

__all__ = [
    "SUPPORTED_M",
    "ProductQudit",
    "Block",
    "ReductionMatrix",
    "BlockEntry",
    "BlockDecomposition",
    "basis_states",
    "tensor_coin",
    "tensor_shift",
    "tensor_evolution",
    "reduction_matrix",
    "decompose_initial",
    "tensor_walk_distribution",
    "tensor_walk_distributions",
    "block_walk_distributions",
    "decomposition_deviation",
]

SUPPORTED_M = (2, 3)
EMPTY_BLOCK_TOL = 1e-14


def _check_m(M: int) -> int:
    if M not in SUPPORTED_M:
        raise DomainError(f"tensor models are available for M in {SUPPORTED_M}, got M={M}")
    return M


def basis_states(M: int) -> list[tuple[int, ...]]:
    _check_m(M)
    return list(itertools.product((1, -1), repeat=M))


@dataclass(frozen=True, eq=False)
class ProductQudit:
    """M normalised two-component factors ``(Q_n^+, Q_n^-)``."""

    factors: tuple[np.ndarray, ...]

    def __init__(self, factors: Sequence[Sequence[complex]], normalize: bool = False):
        out = []
        for f in factors:
            v = np.array(f, dtype=complex).reshape(-1)
            if v.size != 2:
                raise DomainError("each factor needs two components")
            norm = float(np.linalg.norm(v))
            if normalize:
                if norm == 0.0:
                    raise DomainError("cannot normalise a zero factor")
                v = v / norm
            elif abs(norm * norm - 1.0) > 1e-12:
                raise DomainError(f"factor {f!r} is not normalised")
            v.setflags(write=False)
            out.append(v)
        _check_m(len(out))
        object.__setattr__(self, "factors", tuple(out))

    @property
    def M(self) -> int:
        return len(self.factors)

    def vector(self) -> np.ndarray:
        v = np.array([1.0 + 0j])
        for f in self.factors:
            v = np.kron(v, f)
        return v


def tensor_coin(M: int, angles) -> np.ndarray:
    """Entrywise product of the spin-1/2 rotation matrices over the M factors."""
    _check_m(M)
    r_half = rotation_matrix(HalfInt(1), EulerAngles(*angles)).entries
    out = r_half
    for _ in range(M - 1):
        out = np.kron(out, r_half)
    return out


def _total_m(M: int) -> np.ndarray:
    return np.array([sum(s) for s in basis_states(M)])


def tensor_shift(M: int, k: float) -> np.ndarray:
    """``diag(e^{i k |m|})`` with ``|m| = m_1 + ... + m_M``."""
    return np.diag(np.exp(1j * k * _total_m(M)))


def tensor_evolution(M: int, angles, k: float) -> np.ndarray:
    """One-step k-space evolution ``S(k) R(alpha, beta, gamma)``."""
    return tensor_shift(M, k) @ tensor_coin(M, angles)


@dataclass(frozen=True)
class Block:
    """Rows ``start:start + 2j + 1`` of the reduction matrix, copy ``ell`` of spin ``j``."""

    j: HalfInt
    ell: int
    start: int

    @property
    def stop(self) -> int:
        return self.start + self.j.dim


@dataclass(frozen=True, eq=False)
class ReductionMatrix:
    M: int
    entries: np.ndarray
    blocks: tuple[Block, ...]


_S2, _S3, _S6 = math.sqrt(1 / 2), math.sqrt(1 / 3), math.sqrt(1 / 6)
_S23 = math.sqrt(2 / 3)

_K2 = np.array([
    [1, 0, 0, 0],
    [0, _S2, _S2, 0],
    [0, 0, 0, 1],
    [0, _S2, -_S2, 0],
])

_K3 = np.array([
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, _S3, _S3, 0, _S3, 0, 0, 0],
    [0, 0, 0, _S3, 0, _S3, _S3, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, _S6, -_S23, 0, _S6, 0, 0, 0],
    [0, 0, 0, -_S6, 0, _S23, -_S6, 0],
    [0, -_S2, 0, 0, _S2, 0, 0, 0],
    [0, 0, 0, -_S2, 0, 0, _S2, 0],
])

_BLOCKS = {
    2: (Block(HalfInt(2), 1, 0), Block(HalfInt(0), 1, 3)),
    3: (Block(HalfInt(3), 1, 0), Block(HalfInt(1), 1, 4), Block(HalfInt(1), 2, 6)),
}


def reduction_matrix(M: int) -> ReductionMatrix:
    """Orthogonal change of basis to the coupled ``|j, m_j>`` states.

    M = 2 gives 2x2 = 3+1 and M = 3 gives 2x2x2 = 4+2+2.
    """
    _check_m(M)
    entries = (_K2 if M == 2 else _K3).astype(float)
    entries.setflags(write=False)
    return ReductionMatrix(M, entries, _BLOCKS[M])


@dataclass(frozen=True)
class BlockEntry:
    j: HalfInt
    ell: int
    weight: float
    qudit: Qudit | None


@dataclass(frozen=True)
class BlockDecomposition:
    M: int
    blocks: tuple[BlockEntry, ...]

    def total_weight(self) -> float:
        return float(sum(b.weight for b in self.blocks))


def decompose_initial(M: int, qudit: ProductQudit) -> BlockDecomposition:
    """Split the product state into normalised block qudits with weights."""
    _check_m(M)
    if qudit.M != M:
        raise DomainError(f"product qudit has {qudit.M} factors, expected {M}")
    red = reduction_matrix(M)
    coupled = red.entries @ qudit.vector()
    entries = []
    for b in red.blocks:
        part = coupled[b.start:b.stop]
        w = float(np.vdot(part, part).real)
        q = Qudit(b.j, part, normalize=True) if w >= EMPTY_BLOCK_TOL else None
        entries.append(BlockEntry(b.j, b.ell, w, q))
    return BlockDecomposition(M, tuple(entries))


def tensor_walk_distributions(M: int, angles, qudit: ProductQudit, times
                              ) -> dict[int, SiteDistribution]:
    """Direct 2^M-component evolution; component ``m`` reads from ``x + |m|``."""
    _check_m(M)
    if qudit.M != M:
        raise DomainError(f"product qudit has {qudit.M} factors, expected {M}")
    return _distribution_stream(tensor_coin(M, angles), _total_m(M), qudit.vector(), times)


def tensor_walk_distribution(M: int, angles, qudit: ProductQudit, t: int) -> SiteDistribution:
    return tensor_walk_distributions(M, angles, qudit, [t])[t]


def block_walk_distributions(M: int, angles, qudit: ProductQudit, times
                             ) -> dict[int, SiteDistribution]:
    """``sum_blocks p^{(j,l)} P^{(j,l)}(x, t)`` evaluated with the irreducible walks."""
    times = sorted(set(int(t) for t in times))
    dec = decompose_initial(M, qudit)
    acc = {t: np.zeros(2 * M * t + 1) for t in times}
    for b in dec.blocks:
        if b.qudit is None:
            continue
        coin = rotation_matrix(b.j, EulerAngles(*angles))
        for t, dist in evolve_distributions(b.qudit, coin, times).items():
            # block supports are narrower cones centred on the same origin
            off = dist.x_min + M * t
            acc[t][off:off + dist.probabilities.size] += b.weight * dist.probabilities
    return {t: SiteDistribution(t, -M * t, p) for t, p in acc.items()}


def decomposition_deviation(M: int, angles, qudit: ProductQudit, t_max: int) -> float:
    """Max over ``t <= t_max`` and sites of the gap between direct and block-summed laws."""
    times = range(t_max + 1)
    direct = tensor_walk_distributions(M, angles, qudit, times)
    blocks = block_walk_distributions(M, angles, qudit, times)
    return float(max(np.max(np.abs(direct[t].probabilities - blocks[t].probabilities))
                     for t in times))
