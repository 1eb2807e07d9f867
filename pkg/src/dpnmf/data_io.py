"""Loading, normalising, synthesising and corrupting data matrices."""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .matrix_core import clip_column_norms

__all__ = [
    "CorpusCounts",
    "DataError",
    "contaminate",
    "dictionary_mosaic",
    "load_coordinate",
    "load_dense_csv",
    "load_mask_csv",
    "load_movielens_ratings",
    "load_vocabulary",
    "normalize_columns",
    "save_dense_csv",
    "save_pgm",
    "synth_lowrank",
    "tfidf",
]


class DataError(ValueError):
    """Malformed or invalid input data; messages carry 1-based positions."""


def _parse_float(token, row, col):
    try:
        value = float(token)
    except ValueError:
        raise DataError(f"row {row}, column {col}: not a number: {token.strip()!r}") from None
    if not math.isfinite(value):
        raise DataError(f"row {row}, column {col}: non-finite value {token.strip()!r}")
    return value


def load_dense_csv(path, allow_negative=False):
    """Read a headerless comma-separated matrix (rows = features, columns = samples)."""
    rows = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tokens = line.split(",")
            if width is None:
                width = len(tokens)
            elif len(tokens) != width:
                raise DataError(
                    f"row {lineno}: ragged row with {len(tokens)} fields, expected {width}"
                )
            values = [_parse_float(tok, lineno, c) for c, tok in enumerate(tokens, start=1)]
            if not allow_negative:
                for c, x in enumerate(values, start=1):
                    if x < 0:
                        raise DataError(f"row {lineno}, column {c}: negative entry {x!r}")
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def save_dense_csv(path, x):
    """Write a matrix in the format read by :func:`load_dense_csv`.

    Values use ``repr`` so every double round-trips exactly.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    with open(path, "w", encoding="utf-8") as fh:
        for row in x:
            fh.write(",".join(repr(float(e)) for e in row))
            fh.write("\n")


def load_mask_csv(path):
    """Read a 0/1 CSV matrix as a boolean mask."""
    m = load_dense_csv(path)
    if not np.all((m == 0) | (m == 1)):
        raise DataError(f"{path}: mask entries must be 0 or 1")
    return m.astype(bool)


def load_coordinate(path):
    """Read a 1-based coordinate-format sparse matrix into a dense array.

    The first non-comment line is ``rows cols nnz``; each following line is an
    ``i j value`` triple.  Lines starting with ``%`` are comments.
    """
    header = None
    out = None
    seen = set()
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("%"):
                continue
            parts = line.split()
            if header is None:
                if len(parts) != 3:
                    raise DataError(f"line {lineno}: header must be 'rows cols nnz'")
                try:
                    header = tuple(int(p) for p in parts)
                except ValueError:
                    raise DataError(f"line {lineno}: header must hold three integers") from None
                d, n, _ = header
                if d < 1 or n < 1:
                    raise DataError(f"line {lineno}: matrix dimensions must be positive")
                out = np.zeros((d, n))
                continue
            if len(parts) != 3:
                raise DataError(f"line {lineno}: expected 'i j value'")
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError:
                raise DataError(f"line {lineno}: indices must be integers") from None
            value = _parse_float(parts[2], lineno, 3)
            d, n, _ = header
            if not (1 <= i <= d and 1 <= j <= n):
                raise DataError(f"line {lineno}: index ({i}, {j}) outside {d}x{n}")
            if (i, j) in seen:
                raise DataError(f"line {lineno}: duplicate entry ({i}, {j})")
            if value < 0:
                raise DataError(f"line {lineno}: negative value {value!r}")
            seen.add((i, j))
            out[i - 1, j - 1] = value
    if header is None:
        raise DataError(f"{path}: missing header line")
    if len(seen) != header[2]:
        raise DataError(f"{path}: header declares {header[2]} entries, found {len(seen)}")
    return out


def load_movielens_ratings(path, scale=5.0):
    """Read a ``user::item::rating::timestamp`` ratings file.

    Returns ``(v, mask)`` with one row per item and one column per user, so
    that each user is a sample.  Ratings are divided by ``scale``; unobserved
    pairs are zero in ``v`` and False in ``mask``.  Ids are mapped to rows and
    columns in increasing order.
    """
    triples = []
    with open(path, encoding="latin-1") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("::")
            if len(parts) < 3:
                raise DataError(f"line {lineno}: expected 'user::item::rating[::timestamp]'")
            try:
                user, item = int(parts[0]), int(parts[1])
            except ValueError:
                raise DataError(f"line {lineno}: ids must be integers") from None
            rating = _parse_float(parts[2], lineno, 3)
            if rating < 0:
                raise DataError(f"line {lineno}: negative rating {rating!r}")
            triples.append((item, user, rating))
    if not triples:
        raise DataError(f"{path}: no ratings found")
    items, users, ratings = (np.array(col) for col in zip(*triples))
    item_ids, rows = np.unique(items, return_inverse=True)
    user_ids, cols = np.unique(users, return_inverse=True)
    v = np.zeros((item_ids.size, user_ids.size))
    mask = np.zeros(v.shape, dtype=bool)
    v[rows, cols] = ratings / scale
    mask[rows, cols] = True
    return v, mask


def load_vocabulary(path):
    """One term per line; line ``i`` names row ``i`` of the data matrix."""
    terms = Path(path).read_text(encoding="utf-8").splitlines()
    if len(set(terms)) != len(terms):
        raise DataError(f"{path}: vocabulary terms must be unique")
    return terms


def normalize_columns(v, mode):
    """Rescale columns.

    ``"unit-max"`` divides every nonzero column by its largest entry;
    ``"unit-l2-clip"`` shrinks columns with l2 norm above one onto the unit
    sphere and leaves the rest alone; ``"none"`` returns a copy.
    """
    v = np.array(v, dtype=float)
    if mode == "none":
        return v
    if mode == "unit-l2-clip":
        return clip_column_norms(v)
    if mode == "unit-max":
        peak = v.max(axis=0)
        peak[peak == 0] = 1.0
        return v / peak
    raise ValueError(f"unknown normalization mode {mode!r}")


def contaminate(v, col_frac, entry_frac, rng):
    """Add uniform [-1, 1] noise to a random subset of columns and entries.

    ``floor(col_frac * N)`` columns are picked without replacement; inside
    each, ``floor(entry_frac * D)`` entries get an independent U[-1, 1] draw.
    Results are clamped at zero so the output stays non-negative.

    Returns the contaminated copy and the boolean mask of touched entries.
    """
    if not (0 <= col_frac <= 1 and 0 <= entry_frac <= 1):
        raise ValueError("col_frac and entry_frac must lie in [0, 1]")
    rng = np.random.default_rng(rng)
    v = np.array(v, dtype=float)
    d, n = v.shape
    mask = np.zeros((d, n), dtype=bool)
    n_cols = int(math.floor(col_frac * n))
    n_rows = int(math.floor(entry_frac * d))
    for j in rng.choice(n, size=n_cols, replace=False):
        rows = rng.choice(d, size=n_rows, replace=False)
        mask[rows, j] = True
        v[rows, j] = np.maximum(v[rows, j] + rng.uniform(-1.0, 1.0, size=n_rows), 0.0)
    return v, mask


@dataclass(frozen=True)
class CorpusCounts:
    """Raw term counts: ``counts[w, d]`` is how often term ``w`` occurs in document ``d``."""

    counts: np.ndarray

    @property
    def n_docs(self):
        return self.counts.shape[1]

    @property
    def doc_freq(self):
        return np.count_nonzero(self.counts, axis=1)


def tfidf(corpus):
    """TF-IDF weights ``f[w, d] * ln(N / df[w])``; terms absent everywhere get zero."""
    if not isinstance(corpus, CorpusCounts):
        corpus = CorpusCounts(np.asarray(corpus))
    counts = np.asarray(corpus.counts, dtype=float)
    if np.any(counts < 0):
        raise DataError("term counts must be non-negative")
    df = corpus.doc_freq
    idf = np.zeros(len(df))
    present = df > 0
    idf[present] = np.log(corpus.n_docs / df[present])
    return counts * idf[:, None]


def synth_lowrank(d, n, k, rng):
    """Exactly low-rank non-negative data with a known factorization.

    ``w_true`` has non-negative unit-norm columns.  ``h_true`` is non-negative
    with columns scaled so that every column of ``clean = w_true @ h_true``
    has l2 norm at most one (so ``h_true`` columns are inside the unit ball
    as well), which makes the result directly usable by the private solver.
    """
    if not 1 <= k <= min(d, n):
        raise ValueError(f"k must lie in [1, {min(d, n)}], got {k}")
    rng = np.random.default_rng(rng)
    w = rng.random((d, k))
    w /= np.linalg.norm(w, axis=0)
    h = rng.random((k, n))
    h = clip_column_norms(h)
    h /= np.maximum(np.linalg.norm(w @ h, axis=0), 1.0)
    return w @ h, w, h


def dictionary_mosaic(w, height, width, ncols=None, pad=1):
    """Arrange dictionary columns as image tiles in one grid array.

    Each column of ``w`` (length ``height * width``, row-major pixels) is
    rescaled to [0, 1] and placed in a grid with ``ncols`` tiles per row.
    Padding pixels are zero.
    """
    w = np.asarray(w, dtype=float)
    d, k = w.shape
    if d != height * width:
        raise ValueError(f"W has {d} rows, expected {height}*{width}")
    if ncols is None:
        ncols = int(math.ceil(math.sqrt(k)))
    nrows = int(math.ceil(k / ncols))
    out = np.zeros((nrows * (height + pad) + pad, ncols * (width + pad) + pad))
    for idx in range(k):
        tile = w[:, idx].reshape(height, width)
        peak = tile.max()
        if peak > 0:
            tile = tile / peak
        r, c = divmod(idx, ncols)
        top = pad + r * (height + pad)
        left = pad + c * (width + pad)
        out[top:top + height, left:left + width] = tile
    return out


def save_pgm(path, image):
    """Write a [0, 1] grayscale array as an ASCII (P2) PGM file."""
    pixels = np.clip(np.rint(np.asarray(image) * 255), 0, 255).astype(int)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"P2\n{pixels.shape[1]} {pixels.shape[0]}\n255\n")
        for row in pixels:
            fh.write(" ".join(map(str, row)))
            fh.write("\n")
