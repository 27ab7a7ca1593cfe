import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridqmc import (
    InjectionDistribution,
    apply,
    build_estimator_vector,
    build_line_map,
    build_line_pipeline,
    encode,
    householder_unitary,
    kron_sum,
    orthonormalize_rows,
    unitary_factorize,
    zero_state,
)
from gridqmc.flowmap import assemble_pipeline
from gridqmc.injection import state_prep_unitary
from tests.conftest import random_distribution


def unit_dist(bus, values):
    n = len(values)
    return InjectionDistribution(bus=bus, values_mw=values, probabilities=np.full(n, 1 / n))


def point_mass(bus, index, values=(0, 1, 2, 3)):
    probs = np.zeros(len(values))
    probs[index] = 1.0
    return InjectionDistribution(bus=bus, values_mw=values, probabilities=probs)


class TestKronSum:
    def test_zero_left_operand(self):
        assert np.array_equal(kron_sum([0], [0, 2]), [0, 2])

    def test_pairwise_enumeration(self):
        assert np.array_equal(kron_sum([0, 1], [0, 2]), [0, 2, 1, 3])

    def test_negative_weights(self):
        assert kron_sum([0, 0.5], [0, -0.5]) == pytest.approx([0, -0.5, 0.5, 0])

    @given(
        st.lists(st.floats(-5, 5), min_size=1, max_size=4),
        st.lists(st.floats(-5, 5), min_size=1, max_size=4),
    )
    @settings(max_examples=50, deadline=None)
    def test_index_layout(self, a, b):
        out = kron_sum(a, b)
        assert len(out) == len(a) * len(b)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                assert out[i * len(b) + j] == pytest.approx(x + y)


class TestBuildLineMap:
    def test_identity_map(self):
        lf = build_line_map([1.0], [unit_dist(1, [0, 1, 2, 3])])
        assert np.array_equal(lf.distinct_values, [0, 1, 2, 3])
        assert np.array_equal(lf.m, np.eye(4))
        assert np.array_equal(lf.row_norms, [1, 1, 1, 1])

    def test_two_bus_merge(self):
        lf = build_line_map([1.0, 1.0], [unit_dist(1, [0, 1]), unit_dist(2, [0, 1])])
        assert np.array_equal(lf.distinct_values, [0, 1, 2])
        assert np.array_equal(lf.m, [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]])
        assert lf.row_norms == pytest.approx([1, np.sqrt(2), 1])

    def test_cancellation(self):
        lf = build_line_map([0.5, -0.5], [unit_dist(1, [0, 1]), unit_dist(2, [0, 1])])
        assert lf.distinct_values == pytest.approx([0, 0.5])
        assert lf.row_norms == pytest.approx([np.sqrt(2), np.sqrt(2)])

    def test_every_column_has_one_entry(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            dists = [random_distribution(rng, 1), random_distribution(rng, 2)]
            lf = build_line_map(rng.uniform(-1, 1, 2), dists)
            assert np.array_equal(lf.m.sum(axis=0), np.ones(16))
            assert lf.row_norms == pytest.approx(np.sqrt(lf.m.sum(axis=1)))


class TestOrthonormalize:
    def test_identity_unchanged(self):
        lf = orthonormalize_rows(build_line_map([1.0], [unit_dist(1, [0, 1, 2, 3])]))
        assert np.array_equal(lf.m_sc, np.eye(4))

    def test_row_normalized(self):
        lf = orthonormalize_rows(
            build_line_map([1.0, 1.0], [unit_dist(1, [0, 1]), unit_dist(2, [0, 1])])
        )
        assert lf.m_sc[1] == pytest.approx([0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0])

    def test_semi_orthogonal(self):
        lf = orthonormalize_rows(
            build_line_map([1.0, 1.0], [unit_dist(1, [0, 1]), unit_dist(2, [0, 1])])
        )
        gram = lf.m_sc @ lf.m_sc.T
        assert np.max(np.abs(gram - np.eye(3))) < 1e-12


class TestUnitaryFactorize:
    def reconstruct(self, lf):
        fact = unitary_factorize(lf)
        return fact, fact.u_padded.entries @ fact.v_h.entries

    def test_identity(self):
        lf = orthonormalize_rows(build_line_map([1.0], [unit_dist(1, [0, 1, 2, 3])]))
        _, product = self.reconstruct(lf)
        assert np.max(np.abs(product - np.eye(4))) < 1e-12

    def test_three_row_reconstruction(self):
        lf = orthonormalize_rows(
            build_line_map([1.0, 1.0], [unit_dist(1, [0, 1]), unit_dist(2, [0, 1])])
        )
        fact, product = self.reconstruct(lf)
        assert np.max(np.abs(product[:3] - lf.m_sc)) < 1e-10
        for u in (fact.u_padded, fact.v_h):
            assert np.max(np.abs(u.entries.conj().T @ u.entries - np.eye(4))) < 1e-10


class TestEstimatorVector:
    def three_row_map(self):
        return orthonormalize_rows(
            build_line_map([1.0, 1.0], [unit_dist(1, [0, 1]), unit_dist(2, [0, 1])])
        )

    def encodings(self):
        return [encode(unit_dist(1, [0, 1])), encode(unit_dist(2, [0, 1]))]

    def test_mean_weights(self):
        est = build_estimator_vector(self.three_row_map(), "mean", 2, self.encodings())
        assert est.v == pytest.approx([0, np.sqrt(2), 2, 0])

    def test_overload_weights(self):
        est = build_estimator_vector(
            self.three_row_map(), "overload", 2, self.encodings(), threshold=2.0
        )
        assert est.v == pytest.approx([0, 0, 1, 0])

    def test_degenerate_above_all_values(self):
        est = build_estimator_vector(
            self.three_row_map(), "overload", 2, self.encodings(), threshold=10.0
        )
        assert est.is_degenerate
        assert est.scaling == 0.0


class TestHouseholder:
    def test_axis_aligned_gives_identity(self):
        h = householder_unitary([0, 0, 0, 3.0])
        assert np.array_equal(h.entries, np.eye(4))

    def test_swap_reflection(self):
        h = householder_unitary([1.0, 0.0])
        assert np.allclose(h.entries.real, [[0, 1], [1, 0]], atol=1e-12)

    def test_last_row_and_involution(self):
        v = np.array([0, np.sqrt(2), 2, 0])
        h = householder_unitary(v)
        assert h.entries[-1].real == pytest.approx(v / np.linalg.norm(v), abs=1e-12)
        assert np.max(np.abs(h.entries @ h.entries - np.eye(4))) < 1e-12
        assert np.max(np.abs(h.entries - h.entries.T)) < 1e-12


class TestPipeline:
    def test_point_mass_at_zero_gives_zero_metric(self):
        # all probability sits on the zero-loading bin, so the mean vanishes
        pipe, _, est = build_line_pipeline([1.0], [point_mass(1, 0)], "mean")
        amp = apply(pipe.a, zero_state(2)).amplitudes[pipe.good_state_index].real
        assert amp * est.scaling == pytest.approx(0.0, abs=1e-12)

    def test_overload_above_all_values_is_degenerate(self):
        pipe, _, est = build_line_pipeline(
            [1.0], [point_mass(1, 1)], "overload", threshold=99.0
        )
        assert pipe is None
        assert est.is_degenerate

    def test_deterministic_point_mass_sum(self):
        dists = [point_mass(1, 1, (0, 1)), point_mass(2, 1, (0, 1))]
        pipe, _, est = build_line_pipeline([1.0, 1.0], dists, "mean")
        amp = apply(pipe.a, zero_state(2)).amplitudes[pipe.good_state_index].real
        assert amp * est.scaling == pytest.approx(2.0, abs=1e-9)

    def test_target_amplitude_real_nonnegative(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            dists = [random_distribution(rng, 1), random_distribution(rng, 2)]
            pipe, _, _ = build_line_pipeline(rng.uniform(-1, 1, 2), dists, "mean")
            amp = apply(pipe.a, zero_state(4)).amplitudes[pipe.good_state_index]
            assert abs(amp.imag) < 1e-12
            assert amp.real >= -1e-12

    def test_unitarity_of_all_factors(self):
        rng = np.random.default_rng(9)
        dists = [random_distribution(rng, 1), random_distribution(rng, 2)]
        lf = orthonormalize_rows(build_line_map([0.3, -0.8], dists))
        fact = unitary_factorize(lf)
        encs = [encode(d) for d in dists]
        est = build_estimator_vector(lf, "mean", 4, encs)
        h = householder_unitary(est.v)
        preps = [state_prep_unitary(e) for e in encs]
        pipe = assemble_pipeline(preps, fact, h, est.scaling)
        for u in (fact.u_padded, fact.v_h, h, pipe.a, *preps):
            dim = u.dim
            assert np.max(np.abs(u.entries.conj().T @ u.entries - np.eye(dim))) < 1e-10
