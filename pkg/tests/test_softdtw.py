"""Alignment core: values, gradients, oracle equivalence, bounds."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqskill.errors import InputError
from seqskill.softdtw import (
    CostMatrix,
    pairwise_cost,
    softdtw_grad,
    softdtw_loss,
    softdtw_value,
)
from seqskill.softdtw import _backend, _kernels_py, oracle


def softmin3(a, b, c, gamma):
    lo = min(a, b, c)
    return lo - gamma * np.log(
        np.exp((lo - a) / gamma) + np.exp((lo - b) / gamma) + np.exp((lo - c) / gamma)
    )


class TestPairwiseCost:
    def test_identical_points(self):
        c = pairwise_cost([[0.0]], [[0.0]], "squared-euclidean")
        np.testing.assert_allclose(c.entries, [[0.0]])

    def test_unit_offsets(self):
        c = pairwise_cost([[1.0, 0.0], [0.0, 1.0]], [[0.0, 0.0]])
        np.testing.assert_allclose(c.entries, [[1.0], [1.0]])

    def test_matches_double_loop(self):
        rng = np.random.default_rng(3)
        x, y = rng.normal(size=(3, 2)), rng.normal(size=(4, 2))
        c = pairwise_cost(x, y)
        expected = np.zeros((3, 4))
        for i in range(3):
            for j in range(4):
                expected[i, j] = np.sum((x[i] - y[j]) ** 2)
        np.testing.assert_allclose(c.entries, expected, atol=1e-12)
        c2 = pairwise_cost(x, y, "euclidean")
        np.testing.assert_allclose(c2.entries, np.sqrt(expected), atol=1e-12)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(InputError):
            pairwise_cost(np.zeros((2, 3)), np.zeros((2, 4)))

    def test_unknown_metric_rejected(self):
        with pytest.raises(InputError):
            pairwise_cost(np.zeros((2, 2)), np.zeros((2, 2)), "manhattan")

    def test_cost_matrix_invariants(self):
        with pytest.raises(InputError):
            CostMatrix(entries=np.array([[np.inf]]))
        with pytest.raises(InputError):
            CostMatrix(entries=np.array([[-0.5]]))


class TestValue:
    def test_single_cell_any_gamma(self):
        for gamma in (1e-6, 0.1, 1.0, 10.0):
            assert softdtw_value([[5.0]], gamma) == pytest.approx(5.0, abs=1e-9)

    def test_two_by_two_hard_limit(self):
        c = [[1.0, 2.0], [2.0, 1.0]]
        assert softdtw_value(c, 1e-6) == pytest.approx(2.0, abs=1e-3)

    def test_two_by_two_soft_by_hand(self):
        c = np.array([[1.0, 2.0], [2.0, 1.0]])
        g = 1.0
        r11 = c[0, 0]
        r12 = c[0, 1] + r11
        r21 = c[1, 0] + r11
        r22 = c[1, 1] + softmin3(r11, r12, r21, g)
        got = softdtw_value(c, g)
        assert got == pytest.approx(r22, abs=1e-12)
        assert got < 2.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(InputError):
            softdtw_value(np.array([[np.nan]]), 0.1)
        with pytest.raises(InputError):
            softdtw_value(np.array([[1.0]]), 0.0)
        with pytest.raises(InputError):
            softdtw_value(np.array([[1.0]]), -1.0)

    def test_batched_lists(self):
        rng = np.random.default_rng(0)
        mats = [rng.random((3, 4)), rng.random((2, 6))]
        values = softdtw_value(mats, 0.5)
        assert values.shape == (2,)
        for v, m in zip(values, mats):
            assert v == pytest.approx(softdtw_value(m, 0.5))
        grads = softdtw_grad(mats, 0.5)
        assert [g.cost_grad.shape for g in grads] == [(3, 4), (2, 6)]

    def test_matches_path_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            m, n = rng.integers(1, 6, size=2)
            c = rng.random((m, n)) * 3
            assert softdtw_value(c, 0.3) == pytest.approx(
                oracle.brute_force_value(c, 0.3), abs=1e-9
            )


class TestGrad:
    def test_single_cell_grad_is_one(self):
        res = softdtw_grad([[5.0]], 0.7)
        np.testing.assert_allclose(res.cost_grad, [[1.0]])
        assert res.value == pytest.approx(5.0)

    def test_finite_differences(self):
        rng = np.random.default_rng(7)
        c = rng.random((3, 4)) * 2
        res = softdtw_grad(c, 0.5)
        eps = 1e-5
        for i in range(3):
            for j in range(4):
                up, down = c.copy(), c.copy()
                up[i, j] += eps
                down[i, j] -= eps
                fd = (softdtw_value(up, 0.5) - softdtw_value(down, 0.5)) / (2 * eps)
                rel = abs(fd - res.cost_grad[i, j]) / max(abs(fd), 1e-8)
                assert rel < 1e-4

    def test_hard_limit_concentrates_on_argmin_path(self):
        c = np.array([[1.0, 2.0], [2.0, 1.0]])
        res = softdtw_grad(c, 1e-6)
        np.testing.assert_allclose(res.cost_grad, [[1.0, 0.0], [0.0, 1.0]], atol=1e-6)

    def test_grad_entries_in_unit_interval(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            c = rng.random((5, 7))
            g = softdtw_grad(c, 0.2).cost_grad
            assert g.min() >= -1e-9 and g.max() <= 1 + 1e-9


class TestLoss:
    def test_identical_single_vectors(self):
        x = np.array([[0.3, -0.2]])
        value, grad = softdtw_loss(x, x.copy(), gamma=0.5)
        assert value == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(grad, np.zeros_like(x), atol=1e-12)

    @pytest.mark.parametrize("metric", ["squared-euclidean", "euclidean"])
    def test_x_grad_finite_differences(self, metric):
        rng = np.random.default_rng(13)
        x, y = rng.normal(size=(4, 3)), rng.normal(size=(5, 3))
        value, grad = softdtw_loss(x, y, gamma=0.1, metric_id=metric)
        eps = 1e-6  # float64 keeps central differences exact to ~1e-9 here
        for i in range(4):
            for d in range(3):
                up, down = x.copy(), x.copy()
                up[i, d] += eps
                down[i, d] -= eps
                vu, _ = softdtw_loss(up, y, gamma=0.1, metric_id=metric)
                vd, _ = softdtw_loss(down, y, gamma=0.1, metric_id=metric)
                fd = (vu - vd) / (2 * eps)
                rel = abs(fd - grad[i, d]) / max(abs(fd), abs(grad[i, d]), 1e-8)
                assert rel < 1e-4

    def test_value_symmetric_in_arguments(self):
        rng = np.random.default_rng(17)
        x, y = rng.normal(size=(4, 2)), rng.normal(size=(6, 2))
        vx, _ = softdtw_loss(x, y, gamma=0.3)
        vy, _ = softdtw_loss(y, x, gamma=0.3)
        assert vx == pytest.approx(vy, abs=1e-9)


class TestInvariants:
    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(1, 5),
        st.integers(1, 5),
        st.integers(0, 10_000),
        st.sampled_from([0.01, 0.1, 1.0]),
    )
    def test_bounds_against_hard_value(self, m, n, seed, gamma):
        c = np.random.default_rng(seed).random((m, n)) * 4
        hard = oracle.dtw_value(c)
        assert hard == pytest.approx(oracle.brute_force_value(c), abs=1e-9)
        val = softdtw_value(c, gamma)
        paths = oracle.path_count(m, n)
        assert val <= hard + 1e-9
        assert val >= hard - gamma * np.log(paths) - 1e-9

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 10_000))
    def test_transpose_symmetry(self, m, n, seed):
        c = np.random.default_rng(seed).random((m, n))
        assert softdtw_value(c, 0.37) == pytest.approx(
            softdtw_value(c.T, 0.37), abs=1e-9
        )

    def test_nonnegative_in_hard_regime(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            c = rng.random((4, 5)) + 0.5  # costs bounded away from zero
            assert softdtw_value(c, 1e-6) >= 0

    def test_pure_and_compiled_backends_agree(self):
        if _backend.kernels is _kernels_py:
            pytest.skip("compiled backend unavailable")
        rng = np.random.default_rng(29)
        for _ in range(20):
            m, n = rng.integers(1, 9, size=2)
            c = rng.random((m, n)) * 5
            for gamma in (1e-6, 0.1, 1.0):
                Rc = _backend.kernels.forward(c, gamma)
                Rp = _kernels_py.forward(c, gamma)
                np.testing.assert_allclose(Rc, Rp, atol=1e-12)
                np.testing.assert_allclose(
                    _backend.kernels.backward(c, Rc, gamma),
                    _kernels_py.backward(c, Rp, gamma),
                    atol=1e-12,
                )
