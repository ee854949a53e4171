import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rydcat import (
    AtomCloud,
    CollectiveOverlap,
    NumericalError,
    OverlapMatrix,
    ParameterError,
    Polarization,
    collective_from_matrix,
    collective_overlap,
    legendre_p2,
    overlap_matrix,
    pair_overlap,
    pair_overlap_projected,
    pair_statistics,
)

from oracles import grid_collective_overlap, pair_overlap_quadrature


def test_legendre_p2_values():
    assert legendre_p2(1.0) == 1.0
    assert legendre_p2(0.0) == -0.5
    assert legendre_p2(1.0 / math.sqrt(3.0)) == pytest.approx(0.0, abs=1e-15)
    assert np.allclose(legendre_p2(np.array([0.0, 1.0])), [-0.5, 1.0])


class TestPolarization:
    def test_circular_has_no_bilinear_self_overlap(self):
        assert Polarization.circular().self_overlap == pytest.approx(0.0, abs=1e-15)

    def test_linear_has_full_self_overlap(self):
        assert Polarization.linear().self_overlap == pytest.approx(1.0, abs=1e-15)
        assert Polarization.linear((0, 1, 0)).self_overlap == pytest.approx(1.0)

    def test_rejects_unnormalized_jones(self):
        with pytest.raises(ParameterError):
            Polarization(jones=np.array([1.0, 1.0, 0.0]))

    def test_circular_components(self):
        jones = Polarization.circular().jones
        assert jones[0] == pytest.approx(1.0 / math.sqrt(2.0))
        assert jones[1] == pytest.approx(1.0j / math.sqrt(2.0))
        assert jones[2] == 0.0


class TestPairOverlap:
    def test_projected_kernel_frozen_value(self):
        # transverse pair (projection 0) at separation 5 wavenumbers
        assert pair_overlap_projected(5.0, 0.0) == pytest.approx(
            -0.2591504599751903, rel=1e-12
        )

    def test_unit_at_zero_separation(self):
        assert pair_overlap_projected(0.0, 0.7) == 1.0
        one = pair_overlap(
            np.zeros(3), np.zeros(3), np.array([0.0, 0.0, -7.0]),
            Polarization.circular(),
        )
        assert one == 1.0 + 0.0j

    @pytest.mark.parametrize("pol", [Polarization.circular(),
                                     Polarization.linear(),
                                     Polarization.linear((0, 1, 1))])
    def test_matches_solid_angle_quadrature(self, pol):
        # the closed form against direct integration of the two dipole
        # radiation patterns over emission directions
        rng = np.random.default_rng(11)
        k_in = 2.0 * math.pi * np.array([0.0, 0.0, -1.0])
        for _ in range(3):
            x_i, x_j = rng.normal(0.0, 0.6, size=(2, 3))
            got = pair_overlap(x_i, x_j, k_in, pol)
            expect = pair_overlap_quadrature(x_i, x_j, k_in, pol.jones)
            assert got == pytest.approx(expect, abs=1e-10)

    def test_conjugate_under_swap(self):
        rng = np.random.default_rng(3)
        x_i, x_j = rng.normal(size=(2, 3))
        k_in = np.array([1.0, 2.0, -3.0])
        pol = Polarization.circular()
        assert pair_overlap(x_j, x_i, k_in, pol) == pytest.approx(
            pair_overlap(x_i, x_j, k_in, pol).conjugate()
        )


class TestAtomCloud:
    def test_sample_shapes_and_wavenumber(self):
        cloud = AtomCloud.sample(50, (3.3, 4.5, 1.7), 0.78,
                                 np.random.default_rng(0))
        assert cloud.positions.shape == (50, 3)
        assert cloud.n_atoms == 50
        assert cloud.wavenumber == pytest.approx(2.0 * math.pi / 0.78)
        assert np.linalg.norm(cloud.k_in) == pytest.approx(cloud.wavenumber)

    def test_sample_is_rng_driven(self):
        a = AtomCloud.sample(10, (1, 1, 1), 1.0, np.random.default_rng(42))
        b = AtomCloud.sample(10, (1, 1, 1), 1.0, np.random.default_rng(42))
        assert np.array_equal(a.positions, b.positions)

    def test_rejects_single_atom(self):
        with pytest.raises(ParameterError):
            AtomCloud(positions=np.zeros((1, 3)), k_in=np.array([0.0, 0.0, 1.0]))

    def test_rejects_zero_direction(self):
        with pytest.raises(ParameterError):
            AtomCloud.sample(5, (1, 1, 1), 1.0, np.random.default_rng(0),
                             direction=(0, 0, 0))


class TestOverlapMatrix:
    def make(self, n=20, seed=5):
        cloud = AtomCloud.sample(n, (2.0, 2.0, 2.0), 0.78,
                                 np.random.default_rng(seed))
        return cloud, overlap_matrix(cloud, Polarization.circular())

    def test_exactly_hermitian_unit_diagonal(self):
        _, matrix = self.make()
        matrix.validate(atol=0.0)

    def test_entries_match_pairwise_function(self):
        cloud, matrix = self.make(n=6)
        pol = Polarization.circular()
        for i in range(6):
            for j in range(6):
                if i == j:
                    continue
                expect = pair_overlap(cloud.positions[i], cloud.positions[j],
                                      cloud.k_in, pol)
                assert matrix.s[i, j] == pytest.approx(expect, abs=1e-13)

    def test_validate_flags_corruption(self):
        _, matrix = self.make(n=4)
        bad = matrix.s.copy()
        bad[0, 1] += 1e-6
        with pytest.raises(ParameterError):
            OverlapMatrix(s=bad).validate()


class TestCollectiveOverlap:
    def test_two_atoms_always_fully_overlap(self):
        # removing the excited atom from a pair leaves a single emitter
        # either way: the two branch modes coincide identically
        for seed in range(5):
            cloud = AtomCloud.sample(2, (1.5, 1.5, 1.5), 0.78,
                                     np.random.default_rng(seed))
            result = collective_overlap(cloud, Polarization.circular())
            assert result.c_up_dn == pytest.approx(1.0 + 0.0j, abs=1e-12)
            assert result.b_up_dn == pytest.approx(0.0, abs=1e-12)

    def test_matches_grid_quadrature(self):
        # brute force: build both collective far-field patterns on a
        # direction grid and integrate their product
        pol = Polarization.circular()
        for seed in (1, 2):
            cloud = AtomCloud.sample(5, (0.3, 0.3, 0.3), 1.0,
                                     np.random.default_rng(seed))
            result = collective_overlap(cloud, pol)
            expect = grid_collective_overlap(cloud.positions, cloud.k_in,
                                             pol.jones)
            assert result.c_up_dn == pytest.approx(expect, abs=1e-10)

    def test_magnitude_bounded_by_one(self):
        for seed in range(8):
            cloud = AtomCloud.sample(30, (1.0, 1.0, 1.0), 0.78,
                                     np.random.default_rng(seed))
            result = collective_overlap(cloud, Polarization.circular())
            assert abs(result.c_up_dn) <= 1.0 + 1e-12
            assert 0.0 <= result.b_up_dn <= 2.0

    def test_per_atom_weights_accompany_result(self):
        cloud = AtomCloud.sample(12, (1.0, 1.0, 1.0), 0.78,
                                 np.random.default_rng(9))
        result = collective_overlap(cloud, Polarization.circular())
        assert result.per_atom is not None
        assert result.per_atom.shape == (12,)
        assert np.all(result.per_atom > 0.0)

    def test_rejects_unnormalizable_matrix(self):
        s = np.array([[1.0, -1.2], [-1.2, 1.0]], dtype=complex)
        with pytest.raises(NumericalError):
            collective_from_matrix(OverlapMatrix(s=s))

    def test_result_validation(self):
        with pytest.raises(ParameterError):
            CollectiveOverlap(c_up_dn=1.5 + 0.0j, b_up_dn=0.5)


class TestPairStatistics:
    def test_hand_built_matrix(self):
        s = np.eye(3, dtype=complex)
        s[0, 1] = 0.1 + 0.2j
        s[1, 0] = s[0, 1].conjugate()
        s[0, 2] = -0.3j
        s[2, 0] = s[0, 2].conjugate()
        s[1, 2] = 0.5
        s[2, 1] = 0.5
        mean, mean_sq = pair_statistics(OverlapMatrix(s=s))
        assert mean == pytest.approx((0.1 + 0.2j - 0.3j + 0.5) / 3.0)
        assert mean_sq == pytest.approx((0.05 + 0.09 + 0.25) / 3.0)

    def test_rejects_single_atom_matrix(self):
        with pytest.raises(ParameterError):
            pair_statistics(OverlapMatrix(s=np.eye(1, dtype=complex)))


@settings(max_examples=20)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_collective_overlap_invariants(seed):
    cloud = AtomCloud.sample(15, (1.2, 0.8, 2.0), 0.78,
                             np.random.default_rng(seed))
    matrix = overlap_matrix(cloud, Polarization.circular())
    matrix.validate(atol=0.0)
    result = collective_from_matrix(matrix)
    assert abs(result.c_up_dn) <= 1.0 + 1e-12
