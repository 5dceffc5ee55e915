"""Integer inner loops for the exhaustive enumerations.

Two kernels carry almost all of the exhaustive work:

* :func:`first_uncovered` walks every coloring of a list of items (points or
  pairs) in lexicographic order and returns the first one under which no
  candidate item-set is monochromatic.
* :func:`consistency_mask` decides local consistency for a whole batch of
  predicate tables on one point set.

Each exists as a numba ``@njit`` function and as a vectorised numpy function.
Numba is used when importable unless ``ORDERTYPES_DISABLE_NUMBA`` is set to a
non-empty value other than ``0``. Both paths operate on small integer arrays,
so they return identical results.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


_flag = os.environ.get("ORDERTYPES_DISABLE_NUMBA", "")
USE_NUMBA = NUMBA_AVAILABLE and _flag in ("", "0")

_CHUNK = 1 << 15


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _resolve(name):
    if name is None:
        return backend()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    return name


# ---------------------------------------------------------------- colorings


@njit(cache=True)
def _first_uncovered_nb(n_items, k, cand_items, cand_len, cand_color, start, stop):
    digits = np.zeros(max(n_items, 1), np.int64)
    rem = start
    for t in range(n_items - 1, -1, -1):
        digits[t] = rem % k
        rem //= k
    m = cand_items.shape[0]
    for idx in range(start, stop):
        covered = False
        for c in range(m):
            length = cand_len[c]
            if length == 0:
                covered = True
                break
            col = digits[cand_items[c, 0]]
            req = cand_color[c]
            if req >= 0 and col != req:
                continue
            ok = True
            for t in range(1, length):
                if digits[cand_items[c, t]] != col:
                    ok = False
                    break
            if ok:
                covered = True
                break
        if not covered:
            return idx
        t = n_items - 1
        while t >= 0:
            digits[t] += 1
            if digits[t] < k:
                break
            digits[t] = 0
            t -= 1
    return -1


def _first_uncovered_np(n_items, k, cand_items, cand_len, cand_color, start, stop):
    if np.any(cand_len == 0):
        return -1
    powers = np.array([k ** (n_items - 1 - t) for t in range(n_items)], dtype=np.int64)
    groups = []
    for length in np.unique(cand_len):
        sel = cand_len == length
        groups.append((cand_items[sel, :length], cand_color[sel]))
    for s in range(start, stop, _CHUNK):
        idx = np.arange(s, min(stop, s + _CHUNK), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % k
        covered = np.zeros(idx.size, dtype=bool)
        for items, req in groups:
            cols = digits[:, items]  # (chunk, cands, length)
            mono = np.all(cols == cols[:, :, :1], axis=2)
            need = req >= 0
            if need.any():
                mono &= ~need[None, :] | (cols[:, :, 0] == req[None, :])
            covered |= mono.any(axis=1)
        bad = np.flatnonzero(~covered)
        if bad.size:
            return int(idx[bad[0]])
    return -1


def pack_candidates(candidates, colors=None):
    """Pad a list of item-index lists into the kernel's array layout."""
    m = len(candidates)
    width = max((len(c) for c in candidates), default=0)
    items = np.zeros((m, max(width, 1)), dtype=np.int64)
    lens = np.zeros(m, dtype=np.int64)
    for r, c in enumerate(candidates):
        items[r, : len(c)] = c
        lens[r] = len(c)
    if colors is None:
        req = np.full(m, -1, dtype=np.int64)
    else:
        req = np.asarray(colors, dtype=np.int64)
    return items, lens, req


def first_uncovered(n_items, k, candidates, colors=None, start=0, stop=None, backend=None):
    """Index of the first coloring of ``n_items`` items with ``k`` colors under
    which no candidate is monochromatic, or ``-1``.

    Colorings are numbered in lexicographic order with item 0 as the most
    significant digit. ``colors[c]`` (if given and ``>= 0``) forces candidate
    ``c`` to be monochromatic in that specific color.
    """
    total = k**n_items
    stop = total if stop is None else min(stop, total)
    items, lens, req = pack_candidates(candidates, colors)
    if _resolve(backend) == "numba":
        return int(_first_uncovered_nb(n_items, k, items, lens, req, start, stop))
    return _first_uncovered_np(n_items, k, items, lens, req, start, stop)


def decode_coloring(index: int, n_items: int, k: int) -> list[int]:
    digits = [0] * n_items
    for t in range(n_items - 1, -1, -1):
        digits[t] = index % k
        index //= k
    return digits


# ------------------------------------------------------ local consistency


def _labeled_pairs(t):
    a1, a2, a3 = t
    return ((a1, a2), (a1, a3), (a2, a1), (a2, a3), (a3, a1), (a3, a2))


def mismatch_combos(orient: np.ndarray):
    """Flattened pair indices for every (sorted triple A, labeled triple B)
    with A < B whose orientations differ.

    A table is locally inconsistent iff its values agree on the six ordered
    pairs of some listed combination.
    """
    n = orient.shape[0]
    triples = list(itertools.combinations(range(n), 3))
    a_rows, b_rows = [], []
    for ia, A in enumerate(triples):
        oa = orient[A]
        pa = [i * n + j for i, j in _labeled_pairs(A)]
        for B in triples[ia + 1 :]:
            for perm in itertools.permutations(B):
                if orient[perm] != oa:
                    a_rows.append(pa)
                    b_rows.append([i * n + j for i, j in _labeled_pairs(perm)])
    a_idx = np.array(a_rows, dtype=np.int64).reshape(-1, 6)
    b_idx = np.array(b_rows, dtype=np.int64).reshape(-1, 6)
    return a_idx, b_idx


@njit(cache=True)
def _consistency_mask_nb(flat, a_idx, b_idx):
    b = flat.shape[0]
    m = a_idx.shape[0]
    out = np.ones(b, np.bool_)
    for r in range(b):
        for c in range(m):
            same = True
            for t in range(6):
                if flat[r, a_idx[c, t]] != flat[r, b_idx[c, t]]:
                    same = False
                    break
            if same:
                out[r] = False
                break
    return out


def _consistency_mask_np(flat, a_idx, b_idx):
    b = flat.shape[0]
    out = np.ones(b, dtype=bool)
    if a_idx.shape[0] == 0:
        return out
    step = max(1, (1 << 22) // max(1, a_idx.shape[0] * 6))
    for s in range(0, b, step):
        block = flat[s : s + step]
        same = np.all(block[:, a_idx] == block[:, b_idx], axis=2)
        out[s : s + step] = ~same.any(axis=1)
    return out


def consistency_mask(tables: np.ndarray, orient: np.ndarray, backend=None) -> np.ndarray:
    """Boolean mask: which of the ``(batch, n, n)`` integer tables are locally
    consistent on the point set with orientation array ``orient``.
    """
    tables = np.asarray(tables)
    batch, n = tables.shape[0], orient.shape[0]
    flat = np.ascontiguousarray(tables.reshape(batch, n * n).astype(np.int64))
    a_idx, b_idx = mismatch_combos(orient)
    if _resolve(backend) == "numba":
        return _consistency_mask_nb(flat, a_idx, b_idx)
    return _consistency_mask_np(flat, a_idx, b_idx)


def orientation_tables(n: int, pairs_bits: np.ndarray, low: int = 0, high: int = 1) -> np.ndarray:
    """Tables of a two-valued single-class predicate from orientation bits.

    Bit ``e`` of each row refers to the e-th unordered pair ``i < j`` in
    lexicographic order; a set bit orients ``i -> j`` (``T(i,j) = low``,
    ``T(j,i) = high``), a clear bit the reverse.
    """
    pairs = list(itertools.combinations(range(n), 2))
    bits = np.asarray(pairs_bits, dtype=np.int64)
    out = np.full((bits.shape[0], n, n), -1, dtype=np.int64)
    for e, (i, j) in enumerate(pairs):
        fwd = ((bits >> (len(pairs) - 1 - e)) & 1).astype(bool)
        out[:, i, j] = np.where(fwd, low, high)
        out[:, j, i] = np.where(fwd, high, low)
    return out
