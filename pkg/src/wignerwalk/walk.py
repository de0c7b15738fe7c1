"""Real-space time evolution of the (2j+1)-component quantum walk on Z.

One step applies the coin at every site and then translates component ``m``
so that it reads from site ``x + 2m``::

    psi_m(x, t+1) = sum_m' R_{m m'} psi_m'(x + 2m, t)

Component ``m`` therefore drifts by ``-2m`` per step.  Wavefunctions are
stored densely over the light cone ``[-2j t, 2j t]``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rotation import HalfInt, HalfIntLike, RotationMatrix, as_halfint

__all__ = [
    "Qudit",
    "WaveFunction",
    "SiteDistribution",
    "Histogram",
    "initial_state",
    "step",
    "evolve",
    "evolve_distributions",
    "distribution",
    "moment",
    "pseudovelocity_moment",
    "pseudovelocity_histogram",
]

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Qudit:
    """Normalised internal state, amplitudes ordered ``q_j, q_{j-1}, ..., q_{-j}``."""

    j: HalfInt
    amplitudes: np.ndarray

    def __init__(self, j: HalfIntLike, amplitudes: Sequence[complex], normalize: bool = False):
        j = as_halfint(j)
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.size != j.dim:
            raise DomainError(f"qudit for j={j} needs {j.dim} amplitudes, got {amps.size}")
        norm = float(np.linalg.norm(amps))
        if normalize:
            if norm == 0.0:
                raise DomainError("cannot normalise a zero qudit")
            amps = amps / norm
        elif abs(norm * norm - 1.0) > NORM_TOL:
            raise DomainError(f"qudit is not normalised: sum |q_m|^2 = {norm * norm!r}")
        amps.setflags(write=False)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "amplitudes", amps)

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    def __len__(self) -> int:
        return self.amplitudes.size

    def __getitem__(self, m: HalfIntLike) -> complex:
        m = as_halfint(m)
        return self.amplitudes[(self.j.twice - m.twice) // 2]


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Amplitudes ``data[i, x - x_min]`` for component index ``i`` (``m = j - i``)."""

    j: HalfInt
    t: int
    x_min: int
    data: np.ndarray

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_min + self.data.shape[1])

    def __getitem__(self, x: int) -> np.ndarray:
        i = x - self.x_min
        if 0 <= i < self.data.shape[1]:
            return self.data[:, i].copy()
        return np.zeros(self.data.shape[0], dtype=complex)

    def total_probability(self) -> float:
        return float(np.sum(np.abs(self.data) ** 2))


@dataclass(frozen=True, eq=False)
class SiteDistribution:
    """``P(x, t)`` for consecutive sites starting at ``x_min``."""

    t: int
    x_min: int
    probabilities: np.ndarray

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.x_min, self.x_min + self.probabilities.size)

    def __getitem__(self, x: int) -> float:
        i = x - self.x_min
        if 0 <= i < self.probabilities.size:
            return float(self.probabilities[i])
        return 0.0

    def as_dict(self, drop_zeros: bool = True) -> dict[int, float]:
        return {int(x): float(p) for x, p in zip(self.sites, self.probabilities)
                if p != 0.0 or not drop_zeros}

    def total(self) -> float:
        return float(np.sum(self.probabilities))


@dataclass(frozen=True, eq=False)
class Histogram:
    """Binned law of ``X_t / t``; ``density = mass / width``."""

    edges: np.ndarray
    mass: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[1:] + self.edges[:-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def density(self) -> np.ndarray:
        return self.mass / self.widths


def _component_shifts(j: HalfInt) -> np.ndarray:
    # 2m for m = j, j-1, ..., -j
    return np.arange(j.twice, -j.twice - 1, -2)


def initial_state(qudit: Qudit) -> WaveFunction:
    data = np.array(qudit.amplitudes, dtype=complex).reshape(-1, 1)
    return WaveFunction(qudit.j, 0, 0, data)


def _coin_array(coin, n: int) -> np.ndarray:
    arr = np.asarray(coin.entries if isinstance(coin, RotationMatrix) else coin, dtype=complex)
    if arr.shape != (n, n):
        raise DomainError(f"coin of shape {arr.shape} does not act on {n} components")
    return arr


def step(psi: WaveFunction, coin: RotationMatrix) -> WaveFunction:
    if coin.j != psi.j:
        raise DomainError(f"coin spin j={coin.j} does not match wavefunction spin j={psi.j}")
    reach = psi.j.twice
    mixed = coin.entries @ psi.data
    width = psi.data.shape[1]
    out = np.zeros((mixed.shape[0], width + 2 * reach), dtype=complex)
    for i, s in enumerate(_component_shifts(psi.j)):
        # out index i' holds x = x_min - reach + i' and reads mixed at x + s
        start = reach - s
        out[i, start:start + width] = mixed[i]
    return WaveFunction(psi.j, psi.t + 1, psi.x_min - reach, out)


def _run(coin: np.ndarray, shifts: np.ndarray, phi0: np.ndarray, times: Iterable[int]
         ) -> Iterator[tuple[int, int, np.ndarray]]:
    """Evolve densely and yield ``(t, x_min, data)`` at each requested time.

    ``shifts[i]`` is the offset component ``i`` reads from.  The buffer spans
    the final light cone and only the active cone is touched each step.
    """
    times = sorted(set(int(t) for t in times))
    if not times:
        return
    if times[0] < 0:
        raise DomainError("time must be non-negative")
    n = phi0.size
    reach = int(np.max(np.abs(shifts))) if n else 0
    t_max = times[-1]
    half = reach * t_max
    size = 2 * half + 1
    cur = np.zeros((n, size), dtype=complex)
    nxt = np.zeros_like(cur)
    cur[:, half] = phi0
    pending = iter(times)
    target = next(pending)
    t = 0
    while True:
        while target == t:
            lo, hi = half - reach * t, half + reach * t + 1
            yield t, -reach * t, cur[:, lo:hi].copy()
            target = next(pending, None)
        if target is None:
            return
        lo, hi = half - reach * t, half + reach * t + 1
        mixed = coin @ cur[:, lo:hi]
        nlo, nhi = lo - reach, hi + reach
        nxt[:, nlo:nhi] = 0.0
        for i, s in enumerate(shifts):
            # new[x] = mixed[x + s]
            nxt[i, lo - s:hi - s] = mixed[i]
        cur, nxt = nxt, cur
        t += 1


def evolve(qudit: Qudit, coin: RotationMatrix, t: int) -> WaveFunction:
    if coin.j != qudit.j:
        raise DomainError(f"coin spin j={coin.j} does not match qudit spin j={qudit.j}")
    if t < 0:
        raise DomainError("time must be non-negative")
    shifts = _component_shifts(qudit.j)
    (_, x_min, data), = _run(coin.entries, shifts, qudit.amplitudes, [t])
    return WaveFunction(qudit.j, int(t), x_min, data)


def _distribution_stream(coin: np.ndarray, shifts: np.ndarray, phi0: np.ndarray, times
                         ) -> dict[int, SiteDistribution]:
    return {t: SiteDistribution(t, x_min, np.sum(np.abs(data) ** 2, axis=0))
            for t, x_min, data in _run(coin, shifts, phi0, times)}


def evolve_distributions(qudit: Qudit, coin: RotationMatrix, times: Iterable[int]
                         ) -> dict[int, SiteDistribution]:
    """Site distributions at several times from a single trajectory."""
    if coin.j != qudit.j:
        raise DomainError(f"coin spin j={coin.j} does not match qudit spin j={qudit.j}")
    return _distribution_stream(coin.entries, _component_shifts(qudit.j),
                                qudit.amplitudes, times)


def distribution(psi: WaveFunction) -> SiteDistribution:
    return SiteDistribution(psi.t, psi.x_min, np.sum(np.abs(psi.data) ** 2, axis=0))


def moment(dist: SiteDistribution, r: int) -> float:
    """``sum_x x^r P(x, t)``."""
    if r < 0:
        raise DomainError("moment order must be non-negative")
    x = dist.sites.astype(float)
    return float(np.sum(x**r * dist.probabilities))


def pseudovelocity_moment(dist: SiteDistribution, r: int) -> float:
    """``<(X_t / t)^r>``."""
    if dist.t < 1:
        raise DomainError("pseudovelocity needs t >= 1")
    x = dist.sites / dist.t
    return float(np.sum(x**r * dist.probabilities))


def pseudovelocity_histogram(dist: SiteDistribution, bins: int = 201, j: HalfIntLike = None,
                             span: float | None = None) -> Histogram:
    """Histogram of ``X_t / t`` weighted by ``P(x, t)`` on uniform bins over ``[-span, span]``.

    ``span`` defaults to ``2j`` (the maximal speed); pass either ``j`` or ``span``.
    Values on an interior bin edge go to the lower bin.
    """
    if dist.t < 1:
        raise DomainError("pseudovelocity histogram needs t >= 1")
    if bins < 1:
        raise DomainError("need at least one bin")
    if span is None:
        if j is None:
            raise DomainError("pass j or span")
        span = float(as_halfint(j).twice)
    span = float(span) if span > 0 else 1.0
    edges = np.linspace(-span, span, bins + 1)
    width = 2.0 * span / bins
    y = dist.sites / dist.t
    pos = (y + span) / width
    snapped = np.where(np.abs(pos - np.round(pos)) < 1e-9, np.round(pos), pos)
    idx = np.clip(np.ceil(snapped).astype(np.int64) - 1, 0, bins - 1)
    mass = np.bincount(idx, weights=dist.probabilities, minlength=bins)
    return Histogram(edges, mass)
