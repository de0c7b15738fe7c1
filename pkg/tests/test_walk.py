from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from wignerwalk import (
    PRESETS,
    DomainError,
    HalfInt,
    Qudit,
    SiteDistribution,
    distribution,
    evolve,
    evolve_distributions,
    initial_state,
    moment,
    pseudovelocity_histogram,
    pseudovelocity_moment,
    rotation_matrix,
    step,
)
from wignerwalk.walk import _component_shifts

HADAMARD_I = (0.0, -1.5 * math.pi, math.pi)
R2 = 1 / math.sqrt(2)


def qudits(max_twice: int = 4):
    @st.composite
    def build(draw):
        tj = draw(st.integers(0, max_twice))
        parts = draw(st.lists(st.floats(-1, 1), min_size=2 * (tj + 1), max_size=2 * (tj + 1)))
        v = np.array(parts[::2]) + 1j * np.array(parts[1::2])
        if np.linalg.norm(v) < 1e-3:
            v = np.zeros(tj + 1, dtype=complex)
            v[0] = 1
        return Qudit(HalfInt(tj), v, normalize=True)
    return build()


angles = st.tuples(*[st.floats(-math.pi, math.pi)] * 3)


class TestQudit:
    def test_rejects_unnormalised(self):
        with pytest.raises(DomainError):
            Qudit("1/2", [1, 1])

    def test_rejects_wrong_length(self):
        with pytest.raises(DomainError):
            Qudit(1, [1, 0])

    def test_normalize_and_lookup(self):
        q = Qudit("1/2", [3, 4j], normalize=True)
        assert q["1/2"] == pytest.approx(0.6)
        assert q["-1/2"] == pytest.approx(0.8j)

    def test_read_only(self):
        q = Qudit("1/2", [1, 0])
        with pytest.raises(ValueError):
            q.amplitudes[0] = 0


class TestInitialState:
    def test_single_site(self):
        psi = initial_state(Qudit("1/2", [1, 0]))
        np.testing.assert_array_equal(psi[0], [1, 0])
        np.testing.assert_array_equal(psi[1], [0, 0])
        assert psi.t == 0

    def test_published_qudits(self):
        for name in ("fig2a", "fig4a"):
            psi = initial_state(PRESETS[name].qudit)
            assert distribution(psi).as_dict() == pytest.approx({0: 1.0})


class TestStep:
    def test_hadamard_one_step(self):
        coin = rotation_matrix("1/2", HADAMARD_I)
        psi = step(initial_state(Qudit("1/2", [1, 0])), coin)
        assert psi[-1][0] == pytest.approx(1j * R2)
        assert psi[1][1] == pytest.approx(1j * R2)
        assert distribution(psi).as_dict() == pytest.approx({-1: 0.5, 1: 0.5})

    def test_three_component_middle_start(self):
        coin = PRESETS["fig3a"].coin
        psi = step(initial_state(Qudit(1, [0, 1, 0])), coin)
        assert distribution(psi).as_dict() == pytest.approx({-2: 4 / 9, 0: 1 / 9, 2: 4 / 9})

    def test_spin_mismatch(self):
        with pytest.raises(DomainError):
            step(initial_state(Qudit(1, [0, 1, 0])), rotation_matrix("1/2", HADAMARD_I))

    @given(qudits(), st.integers(0, 5))
    def test_identity_coin_translates(self, q, t):
        coin = rotation_matrix(q.j, (0.0, 0.0, 0.0))
        psi = evolve(q, coin, t)
        for i, s in enumerate(_component_shifts(q.j)):
            assert psi[-s * t][i] == q.amplitudes[i]

    @given(qudits(3), angles, st.integers(0, 6))
    def test_repeated_steps_equal_evolve(self, q, ang, t):
        coin = rotation_matrix(q.j, ang)
        psi = initial_state(q)
        for _ in range(t):
            psi = step(psi, coin)
        ref = evolve(q, coin, t)
        assert psi.x_min == ref.x_min
        assert np.max(np.abs(psi.data - ref.data)) < 1e-13


class TestEvolve:
    def test_zero_time(self):
        q = Qudit("1/2", [R2, 1j * R2])
        psi = evolve(q, rotation_matrix("1/2", HADAMARD_I), 0)
        np.testing.assert_array_equal(psi[0], q.amplitudes)

    def test_two_hadamard_steps(self):
        psi = evolve(Qudit("1/2", [1, 0]), rotation_matrix("1/2", HADAMARD_I), 2)
        assert distribution(psi).as_dict() == pytest.approx({-2: 0.25, 0: 0.5, 2: 0.25})

    def test_negative_time(self):
        with pytest.raises(DomainError):
            evolve(Qudit("1/2", [1, 0]), rotation_matrix("1/2", HADAMARD_I), -1)

    @given(qudits(3), angles, st.integers(0, 8))
    def test_fourier_propagation(self, q, ang, t):
        coin = rotation_matrix(q.j, ang)
        x_min, ref = oracles.fourier_wavefunction(coin.entries, q.amplitudes, t,
                                                  _component_shifts(q.j))
        psi = evolve(q, coin, t)
        assert x_min == psi.x_min
        assert np.max(np.abs(ref - psi.data)) < 1e-10

    @given(qudits(6), angles, st.integers(0, 120))
    def test_conservation_and_cone(self, q, ang, t):
        dist = distribution(evolve(q, rotation_matrix(q.j, ang), t))
        assert abs(dist.total() - 1) < 1e-10
        assert np.all(dist.probabilities >= 0)
        assert dist.sites[0] >= -q.j.twice * t and dist.sites[-1] <= q.j.twice * t

    def test_multi_time_stream_matches_single_runs(self):
        p = PRESETS["fig4b"]
        many = evolve_distributions(p.qudit, p.coin, [7, 0, 3, 7])
        assert sorted(many) == [0, 3, 7]
        for t, d in many.items():
            single = distribution(evolve(p.qudit, p.coin, t))
            np.testing.assert_array_equal(d.probabilities, single.probabilities)

    def test_three_component_origin_peak(self):
        p = PRESETS["fig3b"]
        d = distribution(evolve(p.qudit, p.coin, 100))
        assert d[0] > 1e-3

    @given(qudits(4), st.integers(1, 30))
    def test_identity_coin_ballistic_velocity(self, q, t):
        dist = distribution(evolve(q, rotation_matrix(q.j, (0, 0, 0)), t))
        ms = np.arange(q.j.twice, -q.j.twice - 1, -2) / 2
        expected = -2 * np.sum(ms * np.abs(q.amplitudes) ** 2)
        assert moment(dist, 1) / t == pytest.approx(expected, abs=1e-12)


class TestMoments:
    def test_one_step(self):
        d = SiteDistribution(1, -1, np.array([0.5, 0.0, 0.5]))
        assert moment(d, 0) == 1
        assert moment(d, 1) == 0
        assert moment(d, 2) == 1

    def test_negative_order(self):
        with pytest.raises(DomainError):
            moment(SiteDistribution(0, 0, np.array([1.0])), -1)

    def test_symmetric_preset_drift_vanishes(self):
        p = PRESETS["fig2a"]
        d = distribution(evolve(p.qudit, p.coin, 400))
        assert abs(pseudovelocity_moment(d, 1)) < 1e-12

    def test_pseudovelocity_needs_time(self):
        with pytest.raises(DomainError):
            pseudovelocity_moment(SiteDistribution(0, 0, np.array([1.0])), 1)


class TestHistogram:
    def test_point_mass_at_origin(self):
        d = SiteDistribution(5, -2, np.array([0, 0, 1.0, 0, 0]))
        h = pseudovelocity_histogram(d, bins=201, j="1/2")
        assert h.mass.sum() == pytest.approx(1)
        (idx,) = np.nonzero(h.mass)
        assert idx.tolist() == [100]
        assert h.edges[100] < 0 < h.edges[101]

    def test_outermost_values(self):
        d = SiteDistribution(1, -1, np.array([0.5, 0.0, 0.5]))
        h = pseudovelocity_histogram(d, bins=10, j="1/2")
        assert h.mass[0] == 0.5 and h.mass[-1] == 0.5

    def test_edge_goes_to_lower_bin(self):
        # y = 0 is the shared edge of bins 1 and 2 of four
        d = SiteDistribution(2, 0, np.array([1.0]))
        h = pseudovelocity_histogram(d, bins=4, span=1.0)
        assert h.mass.tolist() == [0, 1, 0, 0]

    def test_density_scaling(self):
        p = PRESETS["fig4b"]
        d = distribution(evolve(p.qudit, p.coin, 100))
        h = pseudovelocity_histogram(d, bins=201, j=p.j)
        assert np.sum(h.density * h.widths) == pytest.approx(1, abs=1e-12)
        assert np.all(h.density >= 0)

    def test_time_zero_rejected(self):
        with pytest.raises(DomainError):
            pseudovelocity_histogram(SiteDistribution(0, 0, np.array([1.0])), j=1)

    def test_needs_span(self):
        with pytest.raises(DomainError):
            pseudovelocity_histogram(SiteDistribution(1, 0, np.array([1.0])))
