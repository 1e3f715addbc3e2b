import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cthwave.chaos import LambdaStream
from cthwave.wavelet import (
    HaarMatrix,
    SingularMatrixError,
    SubBands,
    build_level_matrix,
    classic_haar_matrix,
    decompose,
    forward_2d,
    inverse_2d,
    merge_subbands,
    phi,
    project_1d,
    psi,
    reconstruct,
    sloped_coeffs,
    split_subbands,
)

from conftest import (
    REFERENCE_LAMBDAS,
    REFERENCE_MATRIX,
    REFERENCE_PARAMS,
    random_chaos_params,
)


def midpoint_quadrature(f, a, b, cells=2**14):
    """Composite midpoint rule; exact for functions linear on each cell."""
    edges = np.linspace(a, b, cells + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return float(np.sum(f(mids)) * (b - a) / cells)


class TestSlopedCoeffs:
    def test_zero_slope_is_classic(self):
        c = sloped_coeffs(0.0)
        assert c.p0 == 1.0 and c.p1 == 1.0

    def test_worked_example_values(self):
        assert sloped_coeffs(1.469).p0 == pytest.approx(0.7227, abs=5e-5)
        assert sloped_coeffs(-0.070).p1 == pytest.approx(0.9827, abs=5e-5)

    def test_out_of_range_rejected(self):
        for lam in (-2.0001, 2.0001, 5.0):
            with pytest.raises(ValueError):
                sloped_coeffs(lam)

    @given(lam=st.floats(-2.0, 2.0))
    def test_identities(self, lam):
        c = sloped_coeffs(lam)
        assert c.p0 == pytest.approx(lam**2 / 24 - lam / 4 + 1, rel=1e-12)
        assert c.p1 == pytest.approx(lam**2 / 24 + lam / 4 + 1, rel=1e-12)
        assert c.p0 > 0 and c.p1 > 0
        assert c.p0 + c.p1 == pytest.approx(lam**2 / 12 + 2, rel=1e-12)


class TestScalingAndWavelet:
    def test_phi_midpoint_is_one(self):
        for lam in (-2.0, -0.5, 0.0, 1.0, 2.0):
            assert phi(0.5, lam) == 1.0

    def test_phi_zero_slope_is_indicator(self):
        assert phi(0.0, 0.0) == 1.0
        assert phi(0.999, 0.0) == 1.0
        assert phi(-0.001, 0.0) == 0.0
        assert phi(1.0, 0.0) == 0.0

    def test_psi_zero_slope_is_step(self):
        assert psi(0.25, 0.0) == 1.0
        assert psi(0.75, 0.0) == -1.0
        assert psi(1.2, 0.0) == 0.0

    def test_phi_unit_mass(self):
        for lam in np.linspace(-2, 2, 50):
            mass = midpoint_quadrature(lambda x: phi(x, lam), 0.0, 1.0)
            assert mass == pytest.approx(1.0, abs=1e-6)

    def test_psi_mean_law(self):
        for lam in (-2.0, -1.0, 0.5, 2.0):
            mean = midpoint_quadrature(lambda x: psi(x, lam), 0.0, 1.0)
            assert mean == pytest.approx(0.25 * lam, abs=1e-6)


class TestProject1d:
    def test_constant_signal(self):
        samples = np.ones(4096)
        for m in (0, 1, 3):
            coeffs = project_1d(samples, level=m, lam=0.0)
            assert coeffs.shape == (2**m,)
            assert np.allclose(coeffs, 2.0**-m, atol=1e-3)

    def test_zero_signal(self):
        assert np.allclose(project_1d(np.zeros(256), 2, 0.7), 0.0)

    def test_linear_signal_level_zero(self):
        x = np.arange(4096) / 4096
        (c,) = project_1d(x, level=0, lam=0.0)
        assert c == pytest.approx(0.5, abs=1e-3)

    def test_resolution_error(self):
        with pytest.raises(ValueError):
            project_1d(np.ones(4), level=3, lam=0.0)


class TestClassicHaar:
    def test_four_point_matrix(self):
        h = classic_haar_matrix(4).entries
        s = 1 / math.sqrt(2)
        expected = np.array(
            [
                [0.5, 0.5, 0.5, 0.5],
                [0.5, 0.5, -0.5, -0.5],
                [s, -s, 0, 0],
                [0, 0, s, -s],
            ]
        )
        assert np.allclose(h, expected, atol=1e-15)

    def test_two_point_matrix(self):
        s = 1 / math.sqrt(2)
        assert np.allclose(classic_haar_matrix(2).entries, [[s, s], [s, -s]])

    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_orthonormal(self, n):
        h = classic_haar_matrix(n).entries
        assert np.allclose(h @ h.T, np.eye(n), atol=1e-12)

    def test_odd_dimension_rejected(self):
        with pytest.raises(ValueError):
            classic_haar_matrix(3)


def composed_stages(n, lambdas, normalized):
    """Full pyramid product of single-stage matrices (top-left shrinking)."""
    comp = np.eye(n)
    m = n
    while m >= 2 and m % 2 == 0:
        stage = np.eye(n)
        stage[:m, :m] = build_level_matrix(m, lambdas, normalized).entries
        comp = stage @ comp
        m //= 2
    return comp


class TestBuildLevelMatrix:
    def test_zero_slopes_normalized_butterfly(self):
        h = build_level_matrix(4, iter([0.0] * 8), normalized=True).entries
        s = 1 / math.sqrt(2)
        expected = np.array(
            [[s, s, 0, 0], [0, 0, s, s], [s, -s, 0, 0], [0, 0, s, -s]]
        )
        assert np.allclose(h, expected, atol=1e-15)

    @pytest.mark.parametrize("n", [2, 4, 8, 16])
    def test_zero_slope_composition_is_classic(self, n):
        zeros = iter([0.0] * (4 * n * n))
        comp = composed_stages(n, zeros, normalized=True)
        assert np.abs(comp - classic_haar_matrix(n).entries).max() < 1e-12

    def test_reference_matrix_reproduction(self):
        lams = iter(REFERENCE_LAMBDAS)
        h1 = build_level_matrix(4, lams, normalized=False).entries
        h2 = np.eye(4)
        h2[:2, :2] = build_level_matrix(2, lams, normalized=False).entries
        assert np.abs(h2 @ h1 - REFERENCE_MATRIX).max() <= 1e-3

    def test_determinant_gate(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            stream = LambdaStream(random_chaos_params(rng), burn_in=32)
            h = build_level_matrix(8, stream)
            assert abs(np.linalg.det(h.entries)) > 1e-9

    def test_odd_dimension_rejected(self):
        with pytest.raises(ValueError):
            build_level_matrix(5, iter([0.0] * 20))

    def test_singular_entries_rejected_at_construction(self):
        with pytest.raises(SingularMatrixError):
            HaarMatrix(np.zeros((4, 4)), normalized=False)


class TestTransform2d:
    def test_zero_matrix(self):
        h = classic_haar_matrix(4)
        assert np.allclose(forward_2d(np.zeros((4, 4)), h), 0.0)

    def test_identity_scales(self):
        h = classic_haar_matrix(8)
        f = forward_2d(3.0 * np.eye(8), h)
        assert np.allclose(f, 3.0 * np.eye(8), atol=1e-12)

    def test_constant_image_concentrates(self):
        h = classic_haar_matrix(4)
        f = forward_2d(np.ones((4, 4)), h)
        expected = np.zeros((4, 4))
        expected[0, 0] = 4.0
        assert np.allclose(f, expected, atol=1e-12)

    def test_dimension_mismatch(self):
        h = classic_haar_matrix(4)
        with pytest.raises(ValueError):
            forward_2d(np.zeros((6, 6)), h)

    def test_linearity(self):
        rng = np.random.default_rng(1)
        stream = LambdaStream(REFERENCE_PARAMS, burn_in=16)
        h = build_level_matrix(8, stream)
        a, b = rng.standard_normal((8, 8)), rng.standard_normal((8, 8))
        alpha, beta = 1.7, -0.3
        lhs = forward_2d(alpha * a + beta * b, h)
        rhs = alpha * forward_2d(a, h) + beta * forward_2d(b, h)
        assert np.abs(lhs - rhs).max() < 1e-9

    def test_orthonormal_inverse_is_transpose(self):
        rng = np.random.default_rng(2)
        h = classic_haar_matrix(8)
        f = rng.standard_normal((8, 8))
        assert np.allclose(
            inverse_2d(f, h), h.entries.T @ f @ h.entries, atol=1e-12
        )

    def test_roundtrip_random_chaotic(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            stream = LambdaStream(random_chaos_params(rng), burn_in=32)
            h = build_level_matrix(8, stream)
            m = rng.standard_normal((8, 8))
            assert np.abs(inverse_2d(forward_2d(m, h), h) - m).max() < 1e-8


class TestSubBands:
    def test_split_merge_involution(self):
        rng = np.random.default_rng(4)
        f = rng.standard_normal((16, 16))
        assert np.array_equal(merge_subbands(split_subbands(f)), f)

    def test_quadrant_placement(self):
        f = np.block(
            [
                [np.full((2, 2), 1.0), np.full((2, 2), 2.0)],
                [np.full((2, 2), 3.0), np.full((2, 2), 4.0)],
            ]
        )
        sb = split_subbands(f)
        assert np.all(sb.ll == 1.0) and np.all(sb.hl == 2.0)
        assert np.all(sb.lh == 3.0) and np.all(sb.hh == 4.0)

    def test_quadrant_dimensions(self):
        sb = split_subbands(np.zeros((256, 256)))
        assert sb.ll.shape == (128, 128)

    def test_mismatched_quadrants_rejected(self):
        with pytest.raises(ValueError):
            SubBands(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)),
                     np.zeros((4, 4)))


class TestMultilevel:
    def test_classic_level_one_ll_is_block_average(self):
        rng = np.random.default_rng(6)
        img = rng.uniform(0, 255, (16, 16))
        tree = decompose(img, 1, [iter([0.0] * 64)], normalized=True)
        blocks = img.reshape(8, 2, 8, 2).mean(axis=(1, 3))
        assert np.allclose(tree[0].ll, 2.0 * blocks, atol=1e-10)

    def test_two_level_dimensions(self):
        img = np.zeros((256, 256))
        streams = [iter([0.0] * 2048) for _ in range(2)]
        tree = decompose(img, 2, streams, normalized=True)
        assert tree[1].ll.shape == (64, 64)

    def test_divisibility_error(self):
        with pytest.raises(ValueError):
            decompose(np.zeros((12, 12)), 3, [iter([0.0] * 100)] * 3)

    def test_zero_tree_reconstructs_zero(self):
        img = np.zeros((32, 32))
        params = REFERENCE_PARAMS
        tree = decompose(img, 2, [LambdaStream(params, 8) for _ in range(2)])
        rec = reconstruct(tree, [LambdaStream(params, 8) for _ in range(2)])
        assert np.allclose(rec, 0.0)

    def test_classic_one_level_roundtrip_exact(self):
        rng = np.random.default_rng(7)
        img = rng.uniform(0, 255, (32, 32))
        tree = decompose(img, 1, [iter([0.0] * 128)], normalized=True)
        rec = reconstruct(tree, [iter([0.0] * 128)], normalized=True)
        assert np.abs(rec - img).max() < 1e-10

    def test_two_level_chaotic_roundtrip(self):
        rng = np.random.default_rng(8)
        img = rng.uniform(0, 255, (128, 128))
        params = [random_chaos_params(rng) for _ in range(2)]
        tree = decompose(img, 2, [LambdaStream(p, 64) for p in params])
        rec = reconstruct(tree, [LambdaStream(p, 64) for p in params])
        assert np.abs(rec - img).max() < 1e-6
