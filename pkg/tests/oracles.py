"""Independent reference implementations used to check the package.

Everything here is deliberately written the slow, obvious way (dense
matrices, scalar loops, no shared code with the package kernels) so each
test pits two formulations of the same quantity against each other.
"""

import numpy as np


def naive_dijkstra(mesh, source):
    """O(N^2) Dijkstra with a linear-scan frontier (no heap).

    Consumes the same edge lengths as the package so path sums are
    bit-comparable; only the search is independent. Distances carry a
    compensation term (value, error) like the package kernels so the
    rounded result is traversal-order independent.
    """
    n = mesh.vertex_count
    indptr, indices, lengths = mesh.edge_graph()
    adj = np.full((n, n), np.inf)
    for i in range(n):
        for k in range(indptr[i], indptr[i + 1]):
            adj[i, indices[k]] = lengths[k]

    def add_compensated(hi, lo, w):
        total = hi + w
        w_part = total - hi
        rounding = (hi - (total - w_part)) + (w - w_part)
        lo = lo + rounding
        new_hi = total + lo
        return new_hi, lo - (new_hi - total)

    dist = [(np.inf, 0.0)] * n
    dist[source] = (0.0, 0.0)
    done = [False] * n
    for _ in range(n):
        u = -1
        best = (np.inf, np.inf)
        for i in range(n):
            if not done[i] and dist[i] < best:
                best = dist[i]
                u = i
        if u < 0 or best[0] == np.inf:
            break
        done[u] = True
        for t in range(n):
            if adj[u, t] < np.inf:
                cand = add_compensated(dist[u][0], dist[u][1], adj[u, t])
                if cand < dist[t]:
                    dist[t] = cand
    return np.array([d[0] for d in dist])


def dense_camera_fit(points3, points2, weights):
    """4-unknown-per-axis normal equations, assembled with explicit loops."""
    p = len(points3)
    g = np.zeros((4, 4))
    bx = np.zeros(4)
    by = np.zeros(4)
    for j in range(p):
        a = np.array([points3[j][0], points3[j][1], points3[j][2], 1.0])
        w = weights[j]
        for r in range(4):
            for s in range(4):
                g[r, s] += w * a[r] * a[s]
            bx[r] += w * a[r] * points2[j][0]
            by[r] += w * a[r] * points2[j][1]
    sx = np.linalg.solve(g, bx)
    sy = np.linalg.solve(g, by)
    m = np.vstack([sx[:3], sy[:3]])
    c = np.array([sx[3], sy[3]])
    return m, c


def camera_sse(m, c, points3, points2, weights):
    """Weighted sum of squared reprojection errors, scalar loops."""
    total = 0.0
    for j in range(len(points3)):
        r = m @ np.asarray(points3[j]) + c - np.asarray(points2[j])
        total += weights[j] * float(r @ r)
    return total


def scalar_projection_energy(m_field, c_field, feat, pix, weights):
    """Triple-loop projection energy across all cameras and pairs."""
    total = 0.0
    for i in range(m_field.shape[0]):
        for j in range(feat.shape[0]):
            r = m_field[i] @ feat[j] + c_field[i] - pix[j]
            total += weights[j, i] * float(r @ r)
    return total


def dense_laplacian(mesh, scheme):
    """Dense row-normalized Laplacian built edge by edge."""
    n = mesh.vertex_count
    v = mesh.vertices
    w = np.zeros((n, n))
    if scheme == "uniform":
        for i in range(n):
            for j in mesh.ring(i):
                w[i, j] = 1.0
    else:
        for a, b, c in mesh.faces:
            for apex, e0, e1 in ((c, a, b), (a, b, c), (b, c, a)):
                u1 = v[e0] - v[apex]
                u2 = v[e1] - v[apex]
                cot = float(u1 @ u2) / max(float(np.linalg.norm(np.cross(u1, u2))), 1e-300)
                cot = min(max(cot, 0.0), 1.0e4)
                w[e0, e1] += cot
                w[e1, e0] += cot
    lap = np.eye(n)
    for i in range(n):
        row_sum = w[i].sum()
        if row_sum <= 0.0:
            for j in mesh.ring(i):
                w[i, j] = 1.0
            row_sum = w[i].sum()
        lap[i] -= w[i] / row_sum
    return lap


def position_objective(problem, frames, positions):
    """Scalar evaluation of the position solve's quadratic objective."""
    enc = problem.encoding
    alpha = problem.alpha
    if problem.mode == "lri" and frames is not None:
        targets = np.array([frames.frames[i] @ enc.deltas_local[i] for i in range(enc.vertex_count)])
    else:
        targets = enc.deltas_world
    lap = enc.laplacian.toarray()
    total = (1.0 - alpha) * float(((lap @ positions - targets) ** 2).sum())
    wbar = problem.weights.w.sum(axis=1) / enc.vertex_count
    for j, f in enumerate(problem.corr.vertex_ids):
        r = problem.camera.m @ positions[f] + problem.camera.c - problem.corr.pixels[j]
        total += alpha * wbar[j] * float(r @ r)
    r = positions[problem.anchor_vertex] - problem.anchor_position
    total += float(r @ r)
    return total


def dense_position_solve(problem, frames):
    """Stacked dense least-squares version of the position solve."""
    enc = problem.encoding
    n = enc.vertex_count
    alpha = problem.alpha
    if problem.mode == "lri" and frames is not None:
        targets = np.array([frames.frames[i] @ enc.deltas_local[i] for i in range(n)])
    else:
        targets = enc.deltas_world
    lap = enc.laplacian.toarray()
    wbar = problem.weights.w.sum(axis=1) / n
    p = problem.corr.vertex_ids.shape[0]
    rows = 3 * n + 2 * p + 3
    a = np.zeros((rows, 3 * n))
    b = np.zeros(rows)
    sqrt_detail = np.sqrt(1.0 - alpha)
    for c in range(3):
        a[c * n : (c + 1) * n, c * n : (c + 1) * n] = sqrt_detail * lap
        b[c * n : (c + 1) * n] = sqrt_detail * targets[:, c]
    row = 3 * n
    for j, f in enumerate(problem.corr.vertex_ids):
        sw = np.sqrt(alpha * wbar[j]) if alpha > 0 else 0.0
        for axis in range(2):
            for c in range(3):
                a[row, c * n + f] = sw * problem.camera.m[axis, c]
            b[row] = sw * (problem.corr.pixels[j, axis] - problem.camera.c[axis])
            row += 1
    for c in range(3):
        a[row, c * n + problem.anchor_vertex] = 1.0
        b[row] = problem.anchor_position[c]
        row += 1
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    return sol.reshape(3, n).T
