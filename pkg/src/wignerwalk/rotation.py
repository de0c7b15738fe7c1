"""Wigner rotation matrices for arbitrary half-integer spin.

Rows and columns of every matrix are ordered by magnetic index
``m = j, j-1, ..., -j``.  Angles follow the z-y-z convention
``R(alpha, beta, gamma) = exp(-i alpha J3) exp(-i beta J2) exp(-i gamma J3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

import numpy as np

from .errors import ConsistencyError, DegenerateAngleError, DomainError

__all__ = [
    "MAX_TWICE_J",
    "HalfInt",
    "EulerAngles",
    "RotationMatrix",
    "DiagonalRotation",
    "SpectralAngles",
    "as_halfint",
    "magnetic_indices",
    "gamma_coefficient",
    "small_d_halfangle",
    "wigner_small_d",
    "rotation_matrix",
    "diagonal_rotation",
    "spectral_angles",
    "recompose",
]

# 2j <= 40 keeps every factorial in the Wigner sum exactly representable
# before the single conversion to float.
MAX_TWICE_J = 40

THETA_DEGENERACY_TOL = 1e-12
RECOMPOSE_TOL = 1e-10


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored exactly as twice its value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, (int, np.integer)) or isinstance(self.twice, bool):
            raise DomainError(f"HalfInt needs an integer twice-value, got {self.twice!r}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def of(cls, value: HalfIntLike) -> HalfInt:
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, float):
            if not math.isfinite(value) or (2 * value) != round(2 * value):
                raise DomainError(f"{value!r} is not a half-integer")
            return cls(int(round(2 * value)))
        frac = Fraction(value)
        if (2 * frac).denominator != 1:
            raise DomainError(f"{value!r} is not a half-integer")
        return cls(int(2 * frac))

    @property
    def value(self) -> float:
        return self.twice / 2

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def dim(self) -> int:
        """Dimension 2j+1 of the irreducible representation labelled by j."""
        return self.twice + 1

    def __neg__(self) -> HalfInt:
        return HalfInt(-self.twice)

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return str(self.twice // 2) if self.is_integer else f"{self.twice}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


HalfIntLike = Union[HalfInt, int, float, Fraction, str]


def as_halfint(value: HalfIntLike) -> HalfInt:
    return HalfInt.of(value)


def _spin(j: HalfIntLike) -> HalfInt:
    j = as_halfint(j)
    if j.twice < 0:
        raise DomainError(f"spin j must be non-negative, got {j}")
    if j.twice > MAX_TWICE_J:
        raise DomainError(f"spin j={j} exceeds the supported range j <= {MAX_TWICE_J // 2}")
    return j


def _magnetic(j: HalfInt, m: HalfIntLike) -> HalfInt:
    m = as_halfint(m)
    if abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
        raise DomainError(f"magnetic index m={m} is inconsistent with j={j}")
    return m


def magnetic_indices(j: HalfIntLike) -> list[HalfInt]:
    """Magnetic indices in storage order, ``j, j-1, ..., -j``."""
    j = _spin(j)
    return [HalfInt(j.twice - 2 * i) for i in range(j.dim)]


class EulerAngles(NamedTuple):
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True, eq=False)
class RotationMatrix:
    """A (2j+1)-dimensional rotation matrix tagged with its spin."""

    j: HalfInt
    entries: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __matmul__(self, other):
        return self.entries @ np.asarray(other)

    def __rmatmul__(self, other):
        return np.asarray(other) @ self.entries

    @property
    def dagger(self) -> np.ndarray:
        return self.entries.conj().T

    def element(self, m: HalfIntLike, mp: HalfIntLike) -> complex:
        m, mp = _magnetic(self.j, m), _magnetic(self.j, mp)
        return self.entries[(self.j.twice - m.twice) // 2, (self.j.twice - mp.twice) // 2]

    def unitarity_defect(self) -> float:
        eye = np.eye(self.j.dim)
        return float(np.max(np.abs(self.dagger @ self.entries - eye)))


@dataclass(frozen=True)
class DiagonalRotation:
    """``diag(e^{i j p}, e^{i (j-1) p}, ..., e^{-i j p})``, i.e. ``R(-p, 0, 0)``."""

    j: HalfInt
    phase: float

    @property
    def diagonal(self) -> np.ndarray:
        twice_m = np.arange(self.j.twice, -self.j.twice - 1, -2)
        return np.exp(0.5j * twice_m * self.phase)

    @property
    def entries(self) -> np.ndarray:
        return np.diag(self.diagonal)


class SpectralAngles(NamedTuple):
    p: float
    theta: float
    phi: float


def gamma_coefficient(j: HalfIntLike, m: HalfIntLike, mp: HalfIntLike, ell: int) -> float:
    """Coefficient of one term of the Wigner sum.

    Returns 0 when any factorial argument is negative, which is how the
    summation range over ``ell`` is cut off.
    """
    j = _spin(j)
    m, mp = _magnetic(j, m), _magnetic(j, mp)
    return _gamma_exact(j.twice, m.twice, mp.twice, int(ell))


def _gamma_exact(tj: int, tm: int, tmp: int, ell: int) -> float:
    # All arguments below are integers once twice-values are halved.
    jpm, jmm = (tj + tm) // 2, (tj - tm) // 2
    jpmp, jmmp = (tj + tmp) // 2, (tj - tmp) // 2
    den_args = (jmmp - ell, jpm - ell, ell, ell + (tmp - tm) // 2)
    if min(den_args) < 0:
        return 0.0
    num = (math.factorial(jpm) * math.factorial(jmm)
           * math.factorial(jpmp) * math.factorial(jmmp))
    den = 1
    for a in den_args:
        den *= math.factorial(a)
    # sqrt(num)/den evaluated as sqrt(num/den^2) keeps one rounding on a ratio
    value = math.sqrt(Fraction(num, den * den))
    return -value if ell % 2 else value


@lru_cache(maxsize=None)
def _small_d_table(tj: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients and exponents of the Wigner sum for every (m, m') entry."""
    n = tj + 1
    n_ell = n
    coef = np.zeros((n, n, n_ell))
    pow_c = np.zeros((n, n, n_ell), dtype=np.int64)
    pow_s = np.zeros((n, n, n_ell), dtype=np.int64)
    for a in range(n):
        tm = tj - 2 * a
        for b in range(n):
            tmp = tj - 2 * b
            lo = max(0, (tm - tmp) // 2)
            hi = min((tj - tmp) // 2, (tj + tm) // 2)
            for idx, ell in enumerate(range(lo, hi + 1)):
                coef[a, b, idx] = _gamma_exact(tj, tm, tmp, ell)
                pow_c[a, b, idx] = tj + (tm - tmp) // 2 - 2 * ell
                pow_s[a, b, idx] = 2 * ell + (tmp - tm) // 2
    for arr in (coef, pow_c, pow_s):
        arr.setflags(write=False)
    return coef, pow_c, pow_s


def small_d_halfangle(j: HalfIntLike, c, s) -> np.ndarray:
    """Small d-matrix from the half-angle cosine ``c`` and sine ``s``.

    ``c`` and ``s`` may be arrays of matching shape; the result then has
    shape ``c.shape + (2j+1, 2j+1)``.
    """
    j = _spin(j)
    coef, pow_c, pow_s = _small_d_table(j.twice)
    c = np.asarray(c, dtype=float)[..., None, None, None]
    s = np.asarray(s, dtype=float)[..., None, None, None]
    return np.sum(coef * c**pow_c * s**pow_s, axis=-1)


def wigner_small_d(j: HalfIntLike, beta: float) -> RotationMatrix:
    j = _spin(j)
    half = 0.5 * beta
    d = small_d_halfangle(j, math.cos(half), math.sin(half))
    return RotationMatrix(j, d.astype(complex))


def _phases(j: HalfInt, angle: float) -> np.ndarray:
    twice_m = np.arange(j.twice, -j.twice - 1, -2)
    return np.exp(-0.5j * twice_m * angle)


def rotation_matrix(j: HalfIntLike, angles) -> RotationMatrix:
    """Full rotation matrix ``e^{-i alpha m} d_{m m'}(beta) e^{-i gamma m'}``."""
    j = _spin(j)
    alpha, beta, gamma = EulerAngles(*angles)
    half = 0.5 * beta
    d = small_d_halfangle(j, math.cos(half), math.sin(half))
    entries = _phases(j, alpha)[:, None] * d * _phases(j, gamma)[None, :]
    return RotationMatrix(j, entries)


def diagonal_rotation(j: HalfIntLike, phase: float) -> DiagonalRotation:
    return DiagonalRotation(_spin(j), float(phase))


def spectral_angles(angles, k: float) -> SpectralAngles:
    """Angles (p, theta, phi) diagonalising the one-step evolution at wave number k.

    ``p`` lies in [0, 2pi] with ``sin(p/2) >= 0``; ``theta`` carries the sign
    of ``sin(beta/2)``.
    """
    alpha, beta, gamma = EulerAngles(*angles)
    u = 0.5 * (alpha + gamma - 2.0 * k)
    cb, sb = math.cos(0.5 * beta), math.sin(0.5 * beta)
    cos_half_p = cb * math.cos(u)
    sin_half_p = math.sqrt(max(0.0, 1.0 - cos_half_p * cos_half_p))
    if sin_half_p < THETA_DEGENERACY_TOL:
        raise DegenerateAngleError(k)
    p = 2.0 * math.atan2(sin_half_p, cos_half_p)
    theta = math.atan2(sb / sin_half_p, -cb * math.sin(u) / sin_half_p)
    phi = 0.5 * (alpha - gamma - 2.0 * k - math.pi)
    return SpectralAngles(p, theta, phi)


def recompose(j: HalfIntLike, angles, k: float, check: bool = True
              ) -> tuple[RotationMatrix, DiagonalRotation, np.ndarray]:
    """Eigen-decomposition ``V(k) = U D U^dagger`` of ``V(k) = R(alpha - 2k, beta, gamma)``.

    Returns ``(U, D, U^dagger)``.  With ``check`` the product is compared with
    ``V(k)`` and a :class:`ConsistencyError` is raised above 1e-10.
    """
    j = _spin(j)
    alpha, beta, gamma = EulerAngles(*angles)
    sa = spectral_angles((alpha, beta, gamma), k)
    u = rotation_matrix(j, (sa.phi, sa.theta, 0.0))
    d = diagonal_rotation(j, sa.p)
    u_dag = u.dagger
    if check:
        v = rotation_matrix(j, (alpha - 2.0 * k, beta, gamma)).entries
        err = float(np.max(np.abs(v - (u.entries * d.diagonal[None, :]) @ u_dag)))
        if err > RECOMPOSE_TOL:
            raise ConsistencyError(f"recomposition defect {err:.3e} at j={j}, k={k}")
    return u, d, u_dag
