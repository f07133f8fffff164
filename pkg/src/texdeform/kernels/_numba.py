"""numba @njit implementations of the hot kernels.

Same signatures as kernels._numpy. All loops are serial or per-item
independent so results are deterministic run to run.
"""

import numpy as np
from numba import njit


# Distances accumulate in double-double arithmetic (value + compensation) so
# the rounded path length does not depend on traversal direction; heap order
# is lexicographic on (hi, lo).


@njit(cache=True, inline="always")
def _dd_less(ah, al, bh, bl):
    return ah < bh or (ah == bh and al < bl)


@njit(cache=True)
def _dijkstra_one(indptr, indices, lengths, source, dist_hi, dist_lo):
    n = dist_hi.shape[0]
    for i in range(n):
        dist_hi[i] = np.inf
        dist_lo[i] = 0.0
    dist_hi[source] = 0.0
    cap = indices.shape[0] + 1
    heap_h = np.empty(cap, dtype=np.float64)
    heap_l = np.empty(cap, dtype=np.float64)
    heap_v = np.empty(cap, dtype=np.int64)
    heap_h[0] = 0.0
    heap_l[0] = 0.0
    heap_v[0] = source
    size = 1
    while size > 0:
        dh = heap_h[0]
        dl = heap_l[0]
        u = heap_v[0]
        # pop root, sift down
        size -= 1
        last_h = heap_h[size]
        last_l = heap_l[size]
        last_v = heap_v[size]
        pos = 0
        while True:
            child = 2 * pos + 1
            if child >= size:
                break
            if child + 1 < size and _dd_less(
                heap_h[child + 1], heap_l[child + 1], heap_h[child], heap_l[child]
            ):
                child += 1
            if not _dd_less(heap_h[child], heap_l[child], last_h, last_l):
                break
            heap_h[pos] = heap_h[child]
            heap_l[pos] = heap_l[child]
            heap_v[pos] = heap_v[child]
            pos = child
        if size > 0:
            heap_h[pos] = last_h
            heap_l[pos] = last_l
            heap_v[pos] = last_v
        if _dd_less(dist_hi[u], dist_lo[u], dh, dl):
            continue
        for k in range(indptr[u], indptr[u + 1]):
            t = indices[k]
            w = lengths[k]
            s = dh + w
            b = s - dh
            err = (dh - (s - b)) + (w - b)
            nl0 = dl + err
            nh = s + nl0
            nl = nl0 - (nh - s)
            if _dd_less(nh, nl, dist_hi[t], dist_lo[t]):
                dist_hi[t] = nh
                dist_lo[t] = nl
                # push, sift up
                pos = size
                size += 1
                while pos > 0:
                    parent = (pos - 1) // 2
                    if not _dd_less(nh, nl, heap_h[parent], heap_l[parent]):
                        break
                    heap_h[pos] = heap_h[parent]
                    heap_l[pos] = heap_l[parent]
                    heap_v[pos] = heap_v[parent]
                    pos = parent
                heap_h[pos] = nh
                heap_l[pos] = nl
                heap_v[pos] = t


@njit(cache=True)
def multi_source_dijkstra(indptr, indices, lengths, sources):
    p = sources.shape[0]
    n = indptr.shape[0] - 1
    out = np.empty((p, n), dtype=np.float64)
    dist_lo = np.empty(n, dtype=np.float64)
    for row in range(p):
        _dijkstra_one(indptr, indices, lengths, sources[row], out[row], dist_lo)
    return out


@njit(cache=True)
def fit_cameras(feat, pix, weights, cond_limit):
    p = feat.shape[0]
    ncams = weights.shape[1]
    a = np.empty((p, 4), dtype=np.float64)
    for j in range(p):
        a[j, 0] = feat[j, 0]
        a[j, 1] = feat[j, 1]
        a[j, 2] = feat[j, 2]
        a[j, 3] = 1.0
    m = np.empty((ncams, 2, 3), dtype=np.float64)
    c = np.empty((ncams, 2), dtype=np.float64)
    cond = np.empty(ncams, dtype=np.float64)
    for i in range(ncams):
        g = np.zeros((4, 4), dtype=np.float64)
        rhs = np.zeros((4, 2), dtype=np.float64)
        for j in range(p):
            w = weights[j, i]
            for x in range(4):
                wax = w * a[j, x]
                for y in range(4):
                    g[x, y] += wax * a[j, y]
                rhs[x, 0] += wax * pix[j, 0]
                rhs[x, 1] += wax * pix[j, 1]
        ev = np.linalg.eigvalsh(g)
        if ev[0] > 0.0:
            cnd = ev[3] / ev[0]
        else:
            cnd = np.inf
        if cnd <= cond_limit:
            cond[i] = cnd
            sol = np.linalg.solve(g, rhs)
            for axis in range(2):
                m[i, axis, 0] = sol[0, axis]
                m[i, axis, 1] = sol[1, axis]
                m[i, axis, 2] = sol[2, axis]
                c[i, axis] = sol[3, axis]
        else:
            cond[i] = np.inf
            for axis in range(2):
                m[i, axis, 0] = np.nan
                m[i, axis, 1] = np.nan
                m[i, axis, 2] = np.nan
                c[i, axis] = np.nan
    return m, c, cond


@njit(cache=True)
def projection_energy(m, c, feat, pix, weights):
    ncams = m.shape[0]
    p = feat.shape[0]
    total = 0.0
    for i in range(ncams):
        for j in range(p):
            du = (
                m[i, 0, 0] * feat[j, 0]
                + m[i, 0, 1] * feat[j, 1]
                + m[i, 0, 2] * feat[j, 2]
                + c[i, 0]
                - pix[j, 0]
            )
            dv = (
                m[i, 1, 0] * feat[j, 0]
                + m[i, 1, 1] * feat[j, 1]
                + m[i, 1, 2] * feat[j, 2]
                + c[i, 1]
                - pix[j, 1]
            )
            total += weights[j, i] * (du * du + dv * dv)
    return total
