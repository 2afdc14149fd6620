"""Hot numeric kernels: min-plus products and all-pairs shortest paths.

Every kernel exists twice: a numba @njit build and a pure-numpy build.
The numba build is used unless numba is unavailable or the environment
variable ``GLUESPACE_DISABLE_NUMBA`` is set to 1/true/yes.  Both builds
produce bitwise-identical results (same relaxation order, ties broken by
fewer hops), which the test suite checks; ``benchmarks/bench_kernels.py``
compares their speed.

Conventions: distance matrices are float64 with +inf for "no edge";
hop counts are int64 with HOP_INF for unreachable entries.
"""

from __future__ import annotations

import os

import numpy as np

HOP_INF = np.int64(1) << 40

_DISABLE = os.environ.get("GLUESPACE_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

try:
    if _DISABLE:
        raise ImportError("numba disabled by GLUESPACE_DISABLE_NUMBA")
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag
    HAVE_NUMBA = False


def minplus_product_numpy(bval, bhop, w, whop):
    """Min-plus product with carry: out[k,j] = min(b[k,j], min_i b[k,i] + w[i,j]).

    Ties on value keep the smaller hop count bhop[k,i] + whop[i,j].
    """
    k_rows, n = bval.shape
    out_v = bval.copy()
    out_h = bhop.copy()
    # Keep the temporary below ~2^24 floats.
    block = max(1, int(2**24) // max(n * n, 1))
    for lo in range(0, k_rows, block):
        hi = min(lo + block, k_rows)
        s = bval[lo:hi, :, None] + w[None, :, :]  # (rows, i, j)
        sv = s.min(axis=1)
        hcand = np.where(
            s == sv[:, None, :], bhop[lo:hi, :, None] + whop[None, :, :], HOP_INF
        ).min(axis=1)
        better = sv < out_v[lo:hi]
        tie = (sv == out_v[lo:hi]) & (hcand < out_h[lo:hi])
        upd = better | tie
        out_v[lo:hi] = np.where(upd, sv, out_v[lo:hi])
        out_h[lo:hi] = np.where(upd, hcand, out_h[lo:hi])
    return out_v, out_h


def floyd_warshall_numpy(d, h):
    """In-place all-pairs shortest paths with hop-count tie-breaking."""
    n = d.shape[0]
    for k in range(n):
        cand = d[:, k : k + 1] + d[k : k + 1, :]
        cand_h = h[:, k : k + 1] + h[k : k + 1, :]
        upd = (cand < d) | ((cand == d) & (cand_h < h))
        np.copyto(d, cand, where=upd)
        np.copyto(h, cand_h, where=upd)
    return d, h


def combine_pairs_numpy(tval, thop, dval, dhop, ia, ib):
    """For each pair (ia, ib): min over j of tval[ia,j] + dval[ib,j], fewest hops."""
    m = ia.shape[0]
    vals = np.empty(m, dtype=np.float64)
    hops = np.empty(m, dtype=np.int64)
    n = tval.shape[1]
    block = max(1, int(2**22) // max(n, 1))
    for lo in range(0, m, block):
        hi = min(lo + block, m)
        s = tval[ia[lo:hi]] + dval[ib[lo:hi]]
        sv = s.min(axis=1)
        hcand = np.where(
            s == sv[:, None], thop[ia[lo:hi]] + dhop[ib[lo:hi]], HOP_INF
        ).min(axis=1)
        vals[lo:hi] = sv
        hops[lo:hi] = hcand
    return vals, hops


if HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _minplus_product_numba(bval, bhop, w, whop):
        k_rows, n = bval.shape
        out_v = np.empty_like(bval)
        out_h = np.empty_like(bhop)
        for k in prange(k_rows):
            for j in range(n):
                bv = bval[k, j]
                bh = bhop[k, j]
                for i in range(n):
                    v = bval[k, i] + w[i, j]
                    if v < bv:
                        bv = v
                        bh = bhop[k, i] + whop[i, j]
                    elif v == bv:
                        hh = bhop[k, i] + whop[i, j]
                        if hh < bh:
                            bh = hh
                out_v[k, j] = bv
                out_h[k, j] = bh
        return out_v, out_h

    @njit(cache=True, parallel=True)
    def _floyd_warshall_numba(d, h):
        n = d.shape[0]
        for k in range(n):
            for i in prange(n):
                if i == k:
                    continue
                dik = d[i, k]
                if dik == np.inf:
                    continue
                hik = h[i, k]
                for j in range(n):
                    v = dik + d[k, j]
                    if v < d[i, j]:
                        d[i, j] = v
                        h[i, j] = hik + h[k, j]
                    elif v == d[i, j] and hik + h[k, j] < h[i, j]:
                        h[i, j] = hik + h[k, j]
        return d, h

    @njit(cache=True, parallel=True)
    def _combine_pairs_numba(tval, thop, dval, dhop, ia, ib):
        m = ia.shape[0]
        n = tval.shape[1]
        vals = np.empty(m, dtype=np.float64)
        hops = np.empty(m, dtype=np.int64)
        for p in prange(m):
            a = ia[p]
            b = ib[p]
            bv = np.inf
            bh = HOP_INF
            for j in range(n):
                v = tval[a, j] + dval[b, j]
                if v < bv:
                    bv = v
                    bh = thop[a, j] + dhop[b, j]
                elif v == bv:
                    hh = thop[a, j] + dhop[b, j]
                    if hh < bh:
                        bh = hh
            vals[p] = bv
            hops[p] = bh
        return vals, hops

    minplus_product = _minplus_product_numba
    floyd_warshall = _floyd_warshall_numba
    combine_pairs = _combine_pairs_numba
else:
    minplus_product = minplus_product_numpy
    floyd_warshall = floyd_warshall_numpy
    combine_pairs = combine_pairs_numpy
