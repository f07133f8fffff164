"""Pure NumPy (plus stdlib heapq) implementations of the hot kernels.

Fallback backend used when numba is unavailable or disabled via
TEXDEFORM_NUMBA=0. Signatures and semantics match kernels._numba exactly.
"""

import heapq

import numpy as np


def _dd_add(hi, lo, w):
    # double-double accumulation: path sums carry a compensation term so the
    # rounded distance is independent of traversal direction
    s = hi + w
    b = s - hi
    err = (hi - (s - b)) + (w - b)
    lo2 = lo + err
    hi2 = s + lo2
    return hi2, lo2 - (hi2 - s)


def multi_source_dijkstra(indptr, indices, lengths, sources):
    """Shortest-path distances over a CSR edge graph, one row per source.

    Unreachable vertices are reported as +inf; the caller decides whether
    that is an error.
    """
    n = indptr.shape[0] - 1
    out = np.empty((sources.shape[0], n), dtype=np.float64)
    for row, s in enumerate(sources):
        dist_hi = np.full(n, np.inf)
        dist_lo = np.zeros(n)
        dist_hi[s] = 0.0
        heap = [(0.0, 0.0, int(s))]
        while heap:
            hi, lo, u = heapq.heappop(heap)
            if hi > dist_hi[u] or (hi == dist_hi[u] and lo > dist_lo[u]):
                continue
            for k in range(indptr[u], indptr[u + 1]):
                t = indices[k]
                nhi, nlo = _dd_add(hi, lo, lengths[k])
                if nhi < dist_hi[t] or (nhi == dist_hi[t] and nlo < dist_lo[t]):
                    dist_hi[t] = nhi
                    dist_lo[t] = nlo
                    heapq.heappush(heap, (nhi, nlo, int(t)))
        out[row] = dist_hi
    return out


def fit_cameras(feat, pix, weights, cond_limit):
    """Weighted affine-camera fit per weight column.

    feat (P, 3) are world points, pix (P, 2) their image pixels, weights a
    (P, C) matrix giving one weight column per camera to fit. For each column
    the 2x3 matrix and 2-vector offset minimizing the weighted squared pixel
    residual are solved via per-axis 4-unknown normal equations.

    Returns (m (C, 2, 3), c (C, 2), cond (C,)); columns whose normal-matrix
    condition number exceeds cond_limit get NaN cameras and cond=inf.
    """
    p = feat.shape[0]
    a = np.concatenate([feat, np.ones((p, 1))], axis=1)  # (P, 4)
    g = np.einsum("jp,jq,jc->cpq", a, a, weights)  # (C, 4, 4)
    rhs = np.einsum("jp,jc,jk->cpk", a, weights, pix)  # (C, 4, 2)
    ev = np.linalg.eigvalsh(g)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(ev[:, 0] > 0.0, ev[:, -1] / ev[:, 0], np.inf)
    bad = ~(cond <= cond_limit)
    cond = np.where(bad, np.inf, cond)
    g_safe = np.where(bad[:, None, None], np.eye(4), g)
    sol = np.linalg.solve(g_safe, rhs)  # (C, 4, 2)
    sol[bad] = np.nan
    m = np.ascontiguousarray(sol[:, :3, :].transpose(0, 2, 1))  # (C, 2, 3)
    c = np.ascontiguousarray(sol[:, 3, :])  # (C, 2)
    return m, c, cond


def projection_energy(m, c, feat, pix, weights):
    """Sum over cameras i and pairs j of w[j,i] * |m_i feat_j + c_i - pix_j|^2."""
    proj = np.einsum("iab,jb->ija", m, feat) + c[:, None, :]  # (C, P, 2)
    r2 = ((proj - pix[None, :, :]) ** 2).sum(axis=2)  # (C, P)
    return float((weights.T * r2).sum())
