import numpy as np
import pytest

from dpnmf.metrics import masked_rmse, objective_value, top_k_terms


def test_objective_examples(rng):
    w, h = rng.random((3, 2)), rng.random((2, 4))
    assert objective_value(w @ h, w, h) == 0.0
    assert objective_value(np.ones((1, 1)), np.zeros((1, 1)), np.zeros((1, 1))) == 0.5


def test_objective_double_loop(rng):
    d, n, k = 4, 5, 2
    clean, w, h = rng.random((d, n)), rng.random((d, k)), rng.random((k, n))
    total = 0.0
    for i in range(d):
        for j in range(n):
            total += (clean[i, j] - sum(w[i, p] * h[p, j] for p in range(k))) ** 2
    assert objective_value(clean, w, h) == pytest.approx(total / (2 * n), rel=1e-12)


def test_masked_rmse_examples():
    v = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert masked_rmse(v, v, np.ones((2, 2), bool)) == 0.0
    assert masked_rmse([[1.0]], [[0.0]], [[True]]) == 1.0
    mask = np.array([[False, True], [True, False]])
    assert masked_rmse(v, [[0, 2], [3, 0]], mask) == 0.0
    with pytest.raises(ValueError):
        masked_rmse(v, v, np.zeros((2, 2), bool))


def test_full_mask_identity(rng):
    for _ in range(10):
        clean, w, h = rng.random((5, 7)), rng.random((5, 2)), rng.random((2, 7))
        mask = np.ones(clean.shape, bool)
        lhs = masked_rmse(clean, w @ h, mask) ** 2 * mask.sum()
        assert lhs == pytest.approx(2 * clean.shape[1] * objective_value(clean, w, h), rel=1e-10)


def test_top_k_terms():
    w = np.array([[0.1, 0.5], [0.9, 0.5], [0.3, 0.5]])
    vocab = ["a", "b", "c"]
    assert top_k_terms(w, vocab, 1) == [["b"], ["a"]]
    assert top_k_terms(w, vocab, 2)[1] == ["a", "b"]
    assert top_k_terms(w, vocab, 3) == top_k_terms(w, vocab, 3)
    with pytest.raises(ValueError):
        top_k_terms(w, vocab, 4)
    with pytest.raises(ValueError):
        top_k_terms(w, vocab[:2], 1)


def test_top_k_terms_relabel_invariance(rng):
    w = rng.random((6, 3))
    vocab = [f"t{i}" for i in range(6)]
    perm = rng.permutation(6)
    assert top_k_terms(w[perm], [vocab[i] for i in perm], 3) == top_k_terms(w, vocab, 3)
