"""Evaluation metrics: clean-data objective, masked RMSE and topic words."""

import numpy as np

__all__ = ["objective_value", "masked_rmse", "top_k_terms"]


def objective_value(clean, w, h):
    """Reconstruction objective ``||clean - W H||_F^2 / (2N)`` against clean data."""
    clean = np.asarray(clean, dtype=float)
    w = np.asarray(w, dtype=float)
    h = np.asarray(h, dtype=float)
    if w.shape[0] != clean.shape[0] or h.shape != (w.shape[1], clean.shape[1]):
        raise ValueError(
            f"shape mismatch: clean {clean.shape}, W {w.shape}, H {h.shape}"
        )
    resid = clean - w @ h
    return float(np.sum(resid * resid) / (2 * clean.shape[1]))


def masked_rmse(v, v_hat, mask):
    """Root-mean-square error over the entries where ``mask`` is true.

    The difference is taken only on observed entries; unobserved entries of
    ``v`` are not compared against anything.
    """
    v = np.asarray(v, dtype=float)
    v_hat = np.asarray(v_hat, dtype=float)
    mask = np.asarray(mask, dtype=bool)
    if v.shape != v_hat.shape or v.shape != mask.shape:
        raise ValueError(
            f"shape mismatch: v {v.shape}, v_hat {v_hat.shape}, mask {mask.shape}"
        )
    n_obs = int(mask.sum())
    if n_obs == 0:
        raise ValueError("mask selects no entries")
    diff = (v - v_hat)[mask]
    return float(np.sqrt(np.sum(diff * diff) / n_obs))


def top_k_terms(w, vocab, k):
    """Top ``k`` terms of every dictionary column, heaviest first.

    Ties are broken in favour of the term with the lower vocabulary index.
    Returns a list with one list of term strings per column of ``w``.
    """
    w = np.asarray(w, dtype=float)
    vocab = list(vocab)
    if len(vocab) != w.shape[0]:
        raise ValueError(f"vocabulary has {len(vocab)} terms but W has {w.shape[0]} rows")
    if not 1 <= k <= w.shape[0]:
        raise ValueError(f"k must lie in [1, {w.shape[0]}], got {k}")
    topics = []
    for col in w.T:
        # stable sort on the negated weights keeps lower indices first on ties
        order = np.argsort(-col, kind="stable")[:k]
        topics.append([vocab[i] for i in order])
    return topics
