"""Independent reference computations used by the test suite.

Nothing here calls into the package's numerical kernels; each routine is a
second, deliberately different route to the same quantity.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import integrate, linalg


def spin_operators(twice_j: int) -> tuple[np.ndarray, np.ndarray]:
    """``(J_y, J_z)`` in the basis ``m = j, j-1, ..., -j`` from ladder operators."""
    j = twice_j / 2
    ms = j - np.arange(twice_j + 1)
    jz = np.diag(ms).astype(complex)
    jp = np.zeros((twice_j + 1, twice_j + 1), dtype=complex)
    for col in range(1, twice_j + 1):
        m = ms[col]
        # J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one row up
        jp[col - 1, col] = math.sqrt(j * (j + 1) - m * (m + 1))
    jy = (jp - jp.conj().T) / 2j
    return jy, jz


def rotation_expm(twice_j: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    jy, jz = spin_operators(twice_j)
    return (linalg.expm(-1j * alpha * jz) @ linalg.expm(-1j * beta * jy)
            @ linalg.expm(-1j * gamma * jz))


def small_d_tables(beta: float) -> dict[int, np.ndarray]:
    """Explicit small-d matrices for j = 1/2, 1, 3/2 keyed by 2j."""
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    r2, r3 = math.sqrt(2), math.sqrt(3)
    return {
        1: np.array([[c, -s], [s, c]]),
        2: np.array([
            [c * c, -r2 * c * s, s * s],
            [r2 * c * s, 2 * c * c - 1, -r2 * c * s],
            [s * s, r2 * c * s, c * c],
        ]),
        3: np.array([
            [c**3, -r3 * c * c * s, r3 * c * s * s, -s**3],
            [r3 * c * c * s, -2 * c * s * s + c**3, s**3 - 2 * c * c * s, r3 * c * s * s],
            [r3 * c * s * s, -s**3 + 2 * c * c * s, -2 * c * s * s + c**3, -r3 * c * c * s],
            [s**3, r3 * c * s * s, r3 * c * c * s, c**3],
        ]),
    }


def path_sum_wavefunction(coin: np.ndarray, qudit: np.ndarray, t: int,
                          shifts: np.ndarray) -> dict[tuple[int, int], complex]:
    """Sum over all component histories ``(i_0, ..., i_t)``.

    A history contributes ``q[i_0] * prod coin[i_s, i_{s-1}]`` to component
    ``i_t`` at position ``-sum_{s>=1} shifts[i_s]`` (each step reads from
    ``x + shifts[i]``, so component ``i`` moves by ``-shifts[i]``).
    """
    n = qudit.size
    out: dict[tuple[int, int], complex] = {}
    for hist in itertools.product(range(n), repeat=t + 1):
        amp = qudit[hist[0]]
        for prev, cur in zip(hist, hist[1:]):
            amp = amp * coin[cur, prev]
        if amp == 0:
            continue
        x = -int(sum(shifts[i] for i in hist[1:]))
        key = (x, hist[-1])
        out[key] = out.get(key, 0.0) + amp
    return out


def fourier_wavefunction(coin: np.ndarray, qudit: np.ndarray, t: int,
                         shifts: np.ndarray) -> tuple[int, np.ndarray]:
    """``(V(k))^t q`` on a k-grid, transformed back to sites ``[-R t, R t]``."""
    reach = int(np.max(np.abs(shifts)))
    half = reach * t
    size = 2 * half + 1
    ks = 2 * np.pi * np.arange(size) / size
    psi_k = np.empty((size, qudit.size), dtype=complex)
    for n, k in enumerate(ks):
        # reading from x + s multiplies the k-component by e^{i k s} for psi(x) = sum psi_k e^{ikx}
        v = np.diag(np.exp(1j * k * shifts)) @ coin
        psi_k[n] = np.linalg.matrix_power(v, t) @ qudit
    # psi(x) = (1/N) sum_k psi_k e^{ikx}
    psi_x = np.fft.ifft(psi_k, axis=0)
    sites = (np.arange(size) + half) % size - half
    order = np.argsort(sites)
    return -half, psi_x[order].T


def konno_reference(x: float, a: float) -> float:
    if abs(x) >= abs(a):
        return 0.0
    return math.sqrt(1 - a * a) / (math.pi * (1 - x * x) * math.sqrt(a * a - x * x))


def point_mass_direct(twice_j: int, angles, qudit: np.ndarray) -> float:
    """Average over k of ``|C_0(k)|^2``: the weight of the non-moving eigenmode.

    Eigenvectors come from a numerical eigensolver of ``R(alpha - 2k, beta, gamma)``
    identified by their eigenphase ordering, not from the closed-form angles.
    """
    alpha, beta, gamma = angles

    def weight(k: float) -> float:
        v = rotation_expm(twice_j, alpha - 2 * k, beta, gamma)
        vals, vecs = np.linalg.eig(v)
        # eigenphases are m p(k); the m = 0 eigenvalue is exactly 1
        idx = int(np.argmin(np.abs(vals - 1.0)))
        vec = vecs[:, idx] / np.linalg.norm(vecs[:, idx])
        return float(abs(np.vdot(vec, qudit)) ** 2)

    val, _ = integrate.quad(weight, -math.pi, math.pi, epsabs=1e-11, epsrel=1e-11, limit=400)
    return val / (2 * math.pi)
