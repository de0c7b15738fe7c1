"""Long-time limit law of the pseudovelocity ``X_t / t``.

The limit measure is a superposition of scaled Konno densities, one per
positive magnetic index ``m``, each weighted by a polynomial ``M^{(j,m)}``,
plus a point mass at the origin when ``2j+1`` is odd.

Sign convention: a walker in eigenmode ``m`` at wave number ``k`` moves with
velocity ``-m dp/dk = 2 m cos(beta/2) sin(chi)`` (positions grow with the
``x + 2m`` read-off of the real-space step), so ``|C_m|^2`` weights ``+y``
and ``|C_{-m}|^2`` weights ``-y``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from .errors import DegenerateCoinError, DomainError
from .rotation import (
    HalfInt,
    HalfIntLike,
    EulerAngles,
    as_halfint,
    rotation_matrix,
    small_d_halfangle,
    spectral_angles,
)
from .walk import Qudit

__all__ = [
    "BALLISTIC_TOL",
    "POINT_MASS_TOL",
    "WeightPolynomial",
    "WeightMode",
    "LimitDistribution",
    "konno_density",
    "positive_modes",
    "projection_coefficients",
    "projection_coefficient",
    "chi_to_k",
    "limit_moment_integral",
    "weight_polynomial_closed",
    "weight_function_numeric",
    "continuous_mass",
    "delta_weight",
    "limit_distribution",
    "limit_moment",
]

# |sin(beta/2)| at or below this is the diagonal (ballistic) coin
BALLISTIC_TOL = 1e-9
# |cos(beta/2)| at or below this collapses every Konno support to {0}
POINT_MASS_TOL = 1e-12

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200

CLOSED_FORM_SPINS = (1, 2, 3)  # twice-values of j = 1/2, 1, 3/2


def konno_density(x, a: float):
    """``sqrt(1-a^2) / (pi (1-x^2) sqrt(a^2-x^2))`` on ``|x| < |a|``, zero elsewhere."""
    if abs(a) > 1:
        raise DomainError(f"Konno scale |a| must not exceed 1, got {a!r}")
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < abs(a)
    xs = np.where(inside, x, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = math.sqrt(1.0 - a * a) / (math.pi * (1.0 - xs**2) * np.sqrt(a * a - xs**2))
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def positive_modes(j: HalfIntLike) -> list[HalfInt]:
    """``m = j, j-1, ...`` down to the smallest positive value."""
    j = as_halfint(j)
    return [HalfInt(t) for t in range(j.twice, 0, -2)]


def _index(j: HalfInt, m: HalfInt) -> int:
    return (j.twice - m.twice) // 2


def _check_mode(j: HalfInt, m: HalfIntLike) -> HalfInt:
    m = as_halfint(m)
    if not (0 < m.twice <= j.twice) or (j.twice - m.twice) % 2:
        raise DomainError(f"mode m={m} must satisfy 0 < m <= j={j} with matching parity")
    return m


def _check_qudit(j: HalfInt, qudit: Qudit) -> np.ndarray:
    if qudit.j != j:
        raise DomainError(f"qudit spin j={qudit.j} does not match j={j}")
    return qudit.amplitudes


def _orbit_parameters(beta: float) -> tuple[float, float]:
    """``(cos(beta/2), sin(beta/2))`` after rejecting the ballistic coin."""
    a, sb = math.cos(0.5 * beta), math.sin(0.5 * beta)
    if abs(sb) <= BALLISTIC_TOL:
        raise DegenerateCoinError(
            f"|sin(beta/2)| = {abs(sb):.3g} <= {BALLISTIC_TOL:g}: the coin is diagonal and the "
            "walk is ballistic; no Konno-type limit exists (simulate instead)")
    return a, sb


def projection_coefficients(j: HalfIntLike, angles, k: float, qudit: Qudit) -> np.ndarray:
    """All ``C_m(k) = v_m(k)^dagger phi_0``, ordered ``m = j, ..., -j``."""
    j = as_halfint(j)
    q = _check_qudit(j, qudit)
    sa = spectral_angles(angles, k)
    u = rotation_matrix(j, (sa.phi, sa.theta, 0.0)).entries
    return u.conj().T @ q


def projection_coefficient(j: HalfIntLike, m: HalfIntLike, angles, k: float, qudit: Qudit) -> complex:
    j = as_halfint(j)
    m = as_halfint(m)
    if abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
        raise DomainError(f"m={m} is inconsistent with j={j}")
    return complex(projection_coefficients(j, angles, k, qudit)[_index(j, m)])


def chi_to_k(angles, chi: float) -> float:
    """Wave number on the orbit at orbital angle ``chi``.

    Inverts ``cos chi = sin(beta/2) cos u / sin(p/2)``, ``sin chi = sin u / sin(p/2)``
    with ``u = (alpha + gamma - 2k) / 2``.  For ``sin(beta/2) < 0`` the cosine
    of ``u`` and of ``chi`` have opposite signs.
    """
    alpha, beta, gamma = EulerAngles(*angles)
    sb = math.sin(0.5 * beta)
    u = math.atan2(math.sin(chi) * abs(sb), math.copysign(1.0, sb) * math.cos(chi))
    return 0.5 * (alpha + gamma) - u


def limit_moment_integral(j: HalfIntLike, m: HalfIntLike, r: int, angles, qudit: Qudit) -> float:
    """Contribution of mode ``m`` to ``lim <(X_t/t)^r>`` as an integral over the orbit angle.

    Evaluated with the spectral decomposition at ``k(chi)``; the Jacobian
    ``|dk/dchi| = |sin(beta/2)| / (1 - cos^2(beta/2) sin^2 chi)``.
    """
    j = as_halfint(j)
    m = _check_mode(j, m)
    if r < 1:
        raise DomainError("moment order r must be >= 1")
    alpha, beta, gamma = EulerAngles(*angles)
    a, sb = _orbit_parameters(beta)
    q = _check_qudit(j, qudit)
    i_plus, i_minus = _index(j, m), _index(j, -m)
    sign = -1.0 if r % 2 else 1.0

    def integrand(chi: float) -> float:
        k = chi_to_k(angles, chi)
        sa = spectral_angles(angles, k)
        half = 0.5 * sa.theta
        d = small_d_halfangle(j, math.cos(half), math.sin(half))
        phase = np.exp(0.5j * np.arange(j.twice, -j.twice - 1, -2) * sa.phi)
        # C = U^dagger q with U_{m'm} = e^{-i phi m'} d_{m'm}(theta)
        c_plus = np.dot(d[:, i_plus] * phase, q)
        c_minus = np.dot(d[:, i_minus] * phase, q)
        s_chi = math.sin(chi)
        jac = abs(sb) / (1.0 - a * a * s_chi * s_chi)
        weight = abs(c_plus) ** 2 + sign * abs(c_minus) ** 2
        return jac * weight * (m.twice * a * s_chi) ** r / (2.0 * math.pi)

    val, _ = integrate.quad(integrand, -math.pi, math.pi, epsabs=QUAD_EPSABS,
                            epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    return float(val)


@dataclass(frozen=True)
class WeightPolynomial:
    """``M^{(j,m)}(x) = sum_n coefficients[n] x^n``."""

    j: HalfInt
    m: HalfInt
    coefficients: tuple[float, ...]

    def __call__(self, x):
        return P.polyval(x, np.asarray(self.coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def _tau(beta: float) -> float:
    c = math.cos(0.5 * beta)
    if abs(c) < POINT_MASS_TOL:
        raise DegenerateCoinError(f"tan(beta/2) is singular: |cos(beta/2)| = {abs(c):.3g}")
    return math.sin(0.5 * beta) / c


def weight_polynomial_closed(j: HalfIntLike, m: HalfIntLike, beta: float, gamma: float,
                             qudit: Qudit) -> WeightPolynomial:
    """Closed-form weight polynomial for ``j`` in {1/2, 1, 3/2}."""
    j = as_halfint(j)
    if j.twice not in CLOSED_FORM_SPINS:
        raise DomainError(f"no closed-form weights for j={j}; use weight_function_numeric")
    m = _check_mode(j, m)
    q = _check_qudit(j, qudit)
    tau = _tau(beta)
    e1, e2, e3 = (np.exp(-1j * n * gamma) for n in (1, 2, 3))
    re = lambda z: float(np.real(z))  # noqa: E731
    n2 = np.abs(q) ** 2

    if j.twice == 1:
        qp, qm = q
        m1 = -(n2[0] - n2[1]) + 2 * tau * re(qp * np.conj(qm) * e1)
        coeffs = (1.0, m1)

    elif j.twice == 2:
        q1, q0, qm1 = q
        x1m1 = re(q1 * np.conj(qm1) * e2)
        c0 = 0.5 * (n2[0] + 2 * n2[1] + n2[2]) - x1m1
        c1 = -(n2[0] - n2[2]) + math.sqrt(2) * tau * re((q1 * np.conj(q0) + q0 * np.conj(qm1)) * e1)
        c2 = (0.5 * (n2[0] - 2 * n2[1] + n2[2])
              - math.sqrt(2) * tau * re((q1 * np.conj(q0) - q0 * np.conj(qm1)) * e1)
              + (1 + 2 * tau * tau) * x1m1)
        coeffs = (c0, c1, c2)

    else:
        qa, qb, qc, qd = q  # q_{3/2}, q_{1/2}, q_{-1/2}, q_{-3/2}
        na, nb, nc, nd = n2
        r3 = math.sqrt(3)
        ad3 = re(qa * np.conj(qd) * e3)
        bc1 = re(qb * np.conj(qc) * e1)
        ab_cd_p = re((qa * np.conj(qb) + qc * np.conj(qd)) * e1)
        ab_cd_m = re((qa * np.conj(qb) - qc * np.conj(qd)) * e1)
        ac_bd_p = re((qa * np.conj(qc) + qb * np.conj(qd)) * e2)
        ac_bd_m = re((qa * np.conj(qc) - qb * np.conj(qd)) * e2)
        t2 = 1 + 2 * tau * tau
        t3 = tau * (3 + 4 * tau * tau)
        if m.twice == 3:
            coeffs = (
                0.25 * (na + 3 * nb + 3 * nc + nd) - 0.5 * r3 * ac_bd_p,
                (-0.75 * (na + nb - nc - nd) - 1.5 * tau * (ad3 - bc1)
                 + 0.5 * r3 * tau * ab_cd_p + 0.5 * r3 * ac_bd_m),
                (0.75 * (na - nb - nc + nd) - r3 * tau * ab_cd_m
                 + 0.5 * r3 * t2 * ac_bd_p),
                (-0.25 * (na - 3 * nb + 3 * nc - nd) + 0.5 * t3 * ad3 - 1.5 * tau * bc1
                 + 0.5 * r3 * tau * ab_cd_p - 0.5 * r3 * t2 * ac_bd_m),
            )
        else:
            coeffs = (
                0.25 * (3 * na + nb + nc + 3 * nd) + 0.5 * r3 * ac_bd_p,
                (-0.25 * (3 * na - 5 * nb + 5 * nc - 3 * nd) + 4.5 * tau * ad3 - 0.5 * tau * bc1
                 + 0.5 * r3 * tau * ab_cd_p - 1.5 * r3 * ac_bd_m),
                (-0.75 * (na - nb - nc + nd) + r3 * tau * ab_cd_m
                 - 0.5 * r3 * t2 * ac_bd_p),
                (0.75 * (na - 3 * nb + 3 * nc - nd) - 1.5 * t3 * ad3 + 4.5 * tau * bc1
                 - 1.5 * r3 * tau * ab_cd_p + 1.5 * r3 * t2 * ac_bd_m),
            )
    return WeightPolynomial(j, m, tuple(float(c) for c in coeffs))


def _branch_weights(j: HalfInt, m: HalfInt, beta: float, gamma: float, q: np.ndarray, x
                    ) -> tuple[np.ndarray, np.ndarray]:
    """``|c_m|^2`` and ``|c_{-m}|^2`` on the ``cos(chi) >= 0`` branch at ``x = y / 2m``."""
    x = np.asarray(x, dtype=float)
    a = math.cos(0.5 * beta)
    tau = math.sin(0.5 * beta) / a
    cos_half = np.sqrt(0.5 * (1.0 - x))
    sin_half = np.sqrt(0.5 * (1.0 + x))
    root = np.sqrt(np.clip(1.0 - (x / a) ** 2, 0.0, None))
    # e^{i phi} from sin(theta/2) cos(theta/2) e^{i phi}; the sign of sin(theta/2)
    # is absorbed into phi, which leaves |c_{+-m}|^2 unchanged
    e_phi = (x * tau - 1j * root) * np.exp(-1j * gamma) / np.sqrt(1.0 - x * x)
    e_half = np.sqrt(e_phi)
    twice_mp = np.arange(j.twice, -j.twice - 1, -2)
    phases = e_half[..., None] ** twice_mp
    d = small_d_halfangle(j, cos_half, sin_half)
    cols = d[..., :, [_index(j, m), _index(j, -m)]]
    c = np.einsum("...i,...ik,i->...k", phases, cols, q)
    w = np.abs(c) ** 2
    return w[..., 0], w[..., 1]


def _weight_numeric_x(j: HalfInt, m: HalfInt, beta: float, gamma: float, q: np.ndarray, x):
    """``M^{(j,m)}(x)`` from the branch weights via the even/odd split, ``|x| <= |cos(beta/2)|``."""
    x = np.asarray(x, dtype=float)
    p_fw, m_fw = _branch_weights(j, m, beta, gamma, q, x)
    p_bw, m_bw = _branch_weights(j, m, beta, gamma, q, -x)
    even = 0.5 * (p_fw + m_fw + p_bw + m_bw)
    odd = 0.5 * ((p_fw - m_fw) - (p_bw - m_bw))
    return even + odd


def weight_function_numeric(j: HalfIntLike, m: HalfIntLike, angles, qudit: Qudit, y):
    """``M^{(j,m)}(y / 2m)`` built numerically from the spectral projections.

    ``y`` must lie in the open support ``|y| < 2m |cos(beta/2)|``.
    """
    j = as_halfint(j)
    m = _check_mode(j, m)
    q = _check_qudit(j, qudit)
    _, beta, gamma = EulerAngles(*angles)
    a, _ = _orbit_parameters(beta)
    _tau(beta)
    y_arr = np.asarray(y, dtype=float)
    x = y_arr / m.twice
    if np.any(np.abs(x) >= abs(a)):
        raise DomainError(f"y outside the open support |y| < {m.twice * abs(a)!r}")
    out = _weight_numeric_x(j, m, beta, gamma, q, x)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class WeightMode:
    """One scaled-Konno term of the limit law."""

    m: HalfInt
    weight: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    polynomial: WeightPolynomial | None = None

    def __call__(self, x):
        return self.weight(x)


@dataclass(frozen=True, eq=False)
class LimitDistribution:
    """Continuous part ``sum_m mu(y/2m; a) M^{(j,m)}(y/2m) / 2m`` plus ``delta_weight`` at 0."""

    j: HalfInt
    a: float
    beta: float
    gamma: float
    modes: tuple[WeightMode, ...]
    delta_weight: float

    @property
    def sin_half_beta(self) -> float:
        return math.sin(0.5 * self.beta)

    @property
    def support(self) -> float:
        """Half-width of the support of the continuous part."""
        return self.j.twice * abs(self.a) if self.modes else 0.0

    def mode_density(self, mode: WeightMode, y):
        y = np.asarray(y, dtype=float)
        x = y / mode.m.twice
        inside = np.abs(x) < abs(self.a)
        xs = np.where(inside, x, 0.0)
        val = konno_density(xs, self.a) * mode(xs) / mode.m.twice
        return np.where(inside, val, 0.0)

    def density(self, y):
        """Density of the continuous part (the point mass is reported separately)."""
        y = np.asarray(y, dtype=float)
        total = np.zeros_like(y)
        for mode in self.modes:
            total = total + self.mode_density(mode, y)
        return float(total) if total.ndim == 0 else total

    def _mode_integral(self, mode: WeightMode, r: int, lo: float = -math.inf,
                       hi: float = math.inf) -> float:
        # int y^r mu(y/2m) M(y/2m) dy/2m over [lo, hi] with x = |a| sin(u)
        aa = abs(self.a)
        scale = float(mode.m.twice)
        x_lo = max(lo / scale, -aa)
        x_hi = min(hi / scale, aa)
        if x_hi <= x_lo:
            return 0.0
        u_lo = math.asin(max(-1.0, x_lo / aa))
        u_hi = math.asin(min(1.0, x_hi / aa))
        sb = abs(self.sin_half_beta)

        def integrand(u: float) -> float:
            x = aa * math.sin(u)
            return (scale * x) ** r * float(mode(x)) * sb / (math.pi * (1.0 - x * x))

        val, _ = integrate.quad(integrand, u_lo, u_hi, epsabs=QUAD_EPSABS,
                                epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
        return float(val)

    def continuous_mass(self) -> float:
        return sum(self._mode_integral(mode, 0) for mode in self.modes)

    def moment(self, r: int) -> float:
        return limit_moment(self, r)

    def cell_masses(self, edges) -> np.ndarray:
        """Continuous mass in each cell ``[edges[i], edges[i+1]]``; the point mass is excluded."""
        edges = np.asarray(edges, dtype=float)
        out = np.zeros(edges.size - 1)
        for mode in self.modes:
            for i in range(out.size):
                out[i] += self._mode_integral(mode, 0, edges[i], edges[i + 1])
        return out


def continuous_mass(j: HalfIntLike, angles, qudit: Qudit) -> float:
    """``J^{(j)}``: total mass of the scaled Konno terms."""
    return limit_distribution(j, angles, qudit, delta="none").continuous_mass()


def _delta_closed_j1(beta: float, gamma: float, qudit: Qudit) -> float:
    poly = weight_polynomial_closed(1, 1, beta, gamma, qudit)
    c0, _, c2 = poly.coefficients
    # int x^2 mu(x; a) dx = 1 - |sin(beta/2)|
    return 1.0 - (c0 + (1.0 - abs(math.sin(0.5 * beta))) * c2)


def delta_weight(j: HalfIntLike, angles, qudit: Qudit, method: str = "auto") -> float:
    """Weight of the point mass at the origin for integer ``j``.

    ``method`` is ``"closed"`` (j = 1 only), ``"quadrature"`` (``1 - J``), or
    ``"auto"`` (closed form when available).
    """
    j = as_halfint(j)
    if not j.is_integer:
        raise DomainError(f"j={j} has an even number of components and no point mass")
    if j.twice == 0:
        return 1.0
    _, beta, gamma = EulerAngles(*angles)
    _orbit_parameters(beta)
    if abs(math.cos(0.5 * beta)) <= POINT_MASS_TOL:
        return 1.0
    if method == "auto":
        method = "closed" if j.twice == 2 else "quadrature"
    if method == "closed":
        if j.twice != 2:
            raise DomainError(f"no closed-form point mass for j={j}")
        return _delta_closed_j1(beta, gamma, qudit)
    if method == "quadrature":
        return 1.0 - continuous_mass(j, angles, qudit)
    raise DomainError(f"unknown method {method!r}")


def limit_distribution(j: HalfIntLike, angles, qudit: Qudit, weights: str = "auto",
                       delta: str = "auto") -> LimitDistribution:
    """Assemble the limit law.

    ``weights`` selects ``"closed"``, ``"numeric"`` or ``"auto"`` (closed forms
    for j <= 3/2).  ``delta="none"`` skips the point-mass computation.
    """
    j = as_halfint(j)
    q = _check_qudit(j, qudit)
    _, beta, gamma = EulerAngles(*angles)
    a, _ = _orbit_parameters(beta)
    if abs(a) <= POINT_MASS_TOL:
        # every Konno support shrinks to {0}
        return LimitDistribution(j, a, beta, gamma, (), 1.0)
    if weights == "auto":
        weights = "closed" if j.twice in CLOSED_FORM_SPINS else "numeric"
    modes = []
    for m in positive_modes(j):
        if weights == "closed":
            poly = weight_polynomial_closed(j, m, beta, gamma, qudit)
            modes.append(WeightMode(m, poly, poly))
        elif weights == "numeric":
            fn = (lambda x, _m=m: _weight_numeric_x(j, _m, beta, gamma, q, x))
            modes.append(WeightMode(m, fn))
        else:
            raise DomainError(f"unknown weights mode {weights!r}")
    dist = LimitDistribution(j, a, beta, gamma, tuple(modes), 0.0)
    if j.is_integer and delta != "none":
        if delta == "auto" and j.twice == 2 and weights == "closed":
            dw = _delta_closed_j1(beta, gamma, qudit)
        else:
            dw = 1.0 - dist.continuous_mass()
        dist = LimitDistribution(j, a, beta, gamma, dist.modes, dw)
    return dist


def limit_moment(dist: LimitDistribution, r: int) -> float:
    """``int y^r nu(y) dy``; the point mass contributes only at ``r = 0``."""
    if r < 0:
        raise DomainError("moment order must be non-negative")
    total = sum(dist._mode_integral(mode, r) for mode in dist.modes)
    if r == 0:
        total += dist.delta_weight
    return float(total)
