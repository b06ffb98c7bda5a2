"""RBF-kernel SVM trained by sequential minimal optimization."""

import math
import random

import cvxopt
import numpy as np
import pytest

from helpers import make_table, separated_table
from mcclink import backend
from mcclink.classifiers.svm import (
    SvmModel,
    grid_search_svm,
    rbf_gram,
    train_svm_rbf,
)
from mcclink.errors import ConvergenceError, InputError

cvxopt.solvers.options["show_progress"] = False


def dual_objective(alpha, y, K):
    """Soft-margin dual objective: sum(alpha) - (1/2)(alpha*y)' K (alpha*y)."""
    u = alpha * y
    return float(np.sum(alpha) - 0.5 * u @ K @ u)


def reference_qp_alpha(K, y, C):
    """Solve the same dual with an interior-point method as an oracle."""
    n = len(y)
    sol = cvxopt.solvers.qp(
        cvxopt.matrix(np.outer(y, y) * K),
        cvxopt.matrix(-np.ones(n)),
        cvxopt.matrix(np.vstack([-np.eye(n), np.eye(n)])),
        cvxopt.matrix(np.hstack([np.zeros(n), np.full(n, C)])),
        cvxopt.matrix(y.reshape(1, -1)),
        cvxopt.matrix(np.zeros(1)),
    )
    assert sol["status"] == "optimal"
    return np.asarray(sol["x"]).ravel()


def xor_table(copies=3, jitter=0.0, seed=0):
    rng = random.Random(seed)
    corners = [
        ((0.0, 0.0), 0), ((1.0, 1.0), 0), ((0.0, 1.0), 1), ((1.0, 0.0), 1),
    ]
    values, labels = [], []
    for _ in range(copies):
        for (x0, x1), label in corners:
            values.append([
                min(1.0, max(0.0, x0 + rng.uniform(-jitter, jitter))),
                min(1.0, max(0.0, x1 + rng.uniform(-jitter, jitter))),
                0.5, 0.5, 0.5,
            ])
            labels.append(label)
    return make_table(values, labels)


class TestGram:
    def test_diagonal_is_one(self):
        X = np.random.default_rng(0).random((8, 5))
        K = rbf_gram(X, X, gamma=2.0)
        assert np.allclose(np.diag(K), 1.0)

    def test_matches_direct_formula(self):
        rng = np.random.default_rng(1)
        A = rng.random((6, 5))
        B = rng.random((4, 5))
        K = rbf_gram(A, B, gamma=0.7)
        for i in range(6):
            for j in range(4):
                d2 = float(np.sum((A[i] - B[j]) ** 2))
                assert K[i, j] == pytest.approx(math.exp(-0.7 * d2), rel=1e-12)

    def test_bounded(self):
        rng = np.random.default_rng(2)
        K = rbf_gram(rng.random((10, 5)), rng.random((7, 5)), gamma=5.0)
        assert np.all(K > 0.0) and np.all(K <= 1.0)


class TestTraining:
    def test_xor_is_separated(self):
        t = xor_table(copies=3, jitter=0.02, seed=5)
        model = train_svm_rbf(t, gamma=5.0, c=10.0)
        labels, _ = model.predict_matrix(t.matrix)
        assert np.array_equal(labels, t.labels)

    def test_decision_values_recomputed_longhand(self):
        t = separated_table(random.Random(79), 24)
        model = train_svm_rbf(t, gamma=1.0, c=1.0)
        probes = t.matrix[:8]
        got = model.decision_values(probes)
        for i, x in enumerate(probes):
            acc = model.bias
            for sv, coef in zip(model.support_vectors, model.dual_coef):
                d2 = sum((float(a) - float(b)) ** 2 for a, b in zip(x, sv))
                acc += coef * math.exp(-model.gamma * d2)
            assert got[i] == pytest.approx(acc, abs=1e-9)

    def test_converged_solution_is_feasible_and_near_optimal(self):
        # The solver's minimum-step guard can leave per-point margin
        # violations of a few multiples of tol at convergence, so optimality
        # is checked through the dual objective against an independent QP
        # solve rather than through pointwise margin inequalities.
        tol = 1e-3
        for seed in range(6):
            t = separated_table(random.Random(100 + seed), 30)
            X = t.matrix
            y = np.where(t.labels == 1, 1.0, -1.0)
            C = 3.0
            K = rbf_gram(X, X, gamma=1.0)
            alpha, bias, sweeps, converged = backend.smo_solve(
                K, y, C, tol, 4000, seed
            )
            assert converged
            alpha = np.asarray(alpha)
            assert np.all(alpha >= -1e-12) and np.all(alpha <= C + 1e-12)
            assert abs(float(np.sum(alpha * y))) <= 1e-8
            gap = dual_objective(reference_qp_alpha(K, y, C), y, K) - (
                dual_objective(alpha, y, K)
            )
            assert -1e-6 <= gap <= 1e-3

    def test_support_vectors_have_positive_alpha(self):
        t = separated_table(random.Random(83), 20)
        model = train_svm_rbf(t, gamma=1.0, c=1.0)
        assert len(model.support_vectors) == len(model.dual_coef)
        assert len(model.support_vectors) >= 2
        assert np.all(np.abs(model.dual_coef) > 1e-12)

    def test_determinism(self):
        t = separated_table(random.Random(89), 26)
        a = train_svm_rbf(t, gamma=1.0, c=3.0, seed=7)
        b = train_svm_rbf(t, gamma=1.0, c=3.0, seed=7)
        assert np.array_equal(a.support_vectors, b.support_vectors)
        assert np.array_equal(a.dual_coef, b.dual_coef)
        assert a.bias == b.bias and a.sweeps == b.sweeps

    def test_scores_are_sigmoid_of_decision(self):
        t = separated_table(random.Random(97), 20)
        model = train_svm_rbf(t, gamma=1.0, c=1.0)
        dv = model.decision_values(t.matrix)
        _, scores = model.predict_matrix(t.matrix)
        assert scores == pytest.approx(1.0 / (1.0 + np.exp(-dv)), abs=1e-12)

    def test_convergence_cap_raises(self):
        t = xor_table(copies=4, jitter=0.05, seed=3)
        with pytest.raises(ConvergenceError) as err:
            train_svm_rbf(t, gamma=5.0, c=10.0, max_passes=1)
        assert err.value.iterations == 1


class TestValidationErrors:
    def test_nonpositive_hyperparameters(self):
        t = separated_table(random.Random(101), 10)
        with pytest.raises(InputError):
            train_svm_rbf(t, gamma=0.0, c=1.0)
        with pytest.raises(InputError):
            train_svm_rbf(t, gamma=1.0, c=-2.0)

    def test_single_class_rejected(self):
        t = make_table([[0.1] * 5, [0.2] * 5], [1, 1])
        with pytest.raises(InputError):
            train_svm_rbf(t, gamma=1.0, c=1.0)


class TestGridSearch:
    def test_best_cell_is_max_accuracy_with_tiebreaks(self):
        t = separated_table(random.Random(103), 40)
        result = grid_search_svm(
            t, gammas=(0.1, 1.0), cs=(0.5, 2.0), folds=4, seed=0
        )
        scored = [c for c in result.cells if c.accuracy is not None]
        assert scored
        best_acc = max(c.accuracy for c in scored)
        assert result.cv_accuracy == best_acc
        winners = sorted(
            (c for c in scored if c.accuracy == best_acc),
            key=lambda c: (c.c, c.gamma),
        )
        assert (result.best_gamma, result.best_c) == (
            winners[0].gamma, winners[0].c,
        )

    def test_every_cell_recorded(self):
        t = separated_table(random.Random(107), 32)
        result = grid_search_svm(t, gammas=(0.1, 1.0), cs=(1.0,), folds=4)
        assert len(result.cells) == 2
        assert {(c.gamma, c.c) for c in result.cells} == {(0.1, 1.0), (1.0, 1.0)}

    def test_all_cells_failing_raises(self):
        t = separated_table(random.Random(109), 32)
        # with a one-sweep cap nothing converges; the sweep must fail loudly
        with pytest.raises(InputError, match="every grid cell failed"):
            grid_search_svm(t, gammas=(1.0,), cs=(1.0,), folds=4, max_passes=1)

    def test_empty_grid_rejected(self):
        t = separated_table(random.Random(113), 12)
        with pytest.raises(InputError):
            grid_search_svm(t, gammas=(), cs=(1.0,))

    def test_bad_folds_rejected(self):
        t = separated_table(random.Random(127), 12)
        with pytest.raises(InputError):
            grid_search_svm(t, folds=1)


def test_model_is_frozen_dataclass():
    t = separated_table(random.Random(131), 14)
    model = train_svm_rbf(t, gamma=1.0, c=1.0)
    assert isinstance(model, SvmModel)
    with pytest.raises(Exception):
        model.bias = 0.0
