"""Detail-preserving deformation driven by image-projection constraints.

Two linear least-squares solves reconstruct the deformed mesh: one
propagates the per-vertex local frames from an anchored frame through the
stored frame-to-frame rotations, the second recovers vertex positions so
the Laplacian offsets match the (rotated) rest offsets while the feature
vertices land near their annotated pixels under the global camera.

Both systems are solved through sparse normal equations. The position
system's projection term only touches the feature vertices, so it is
applied as a low-rank update to a factorization of the fixed detail term;
the factorization is cached on the encoding and reused across iterations.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from .cameras import AffineCamera
from .differential import LriEncoding
from .errors import ContractViolationError, SingularSystemError

MODES = ("lri", "literal")

CG_TOL = 1e-10


@dataclass
class DeformProblem:
    encoding: LriEncoding
    mesh: "Mesh"  # current-pose mesh (connectivity must match the encoding)
    corr: "CorrespondenceSet"
    camera: AffineCamera  # global camera forming the projection constraints
    weights: "WeightField"
    alpha: float
    anchor_vertex: int
    anchor_position: np.ndarray
    mode: str = "lri"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        n = self.encoding.vertex_count
        if not 0 <= self.anchor_vertex < n:
            raise ValueError("anchor vertex out of range")
        if self.mesh.vertex_count != n:
            raise ValueError("mesh and encoding vertex counts differ")
        p = self.corr.vertex_ids.shape[0]
        if self.weights.w.shape[0] != p:
            raise ValueError("one weight row per correspondence required")
        if self.mode not in MODES:
            raise ValueError(f"unknown deformation mode {self.mode!r}")
        self.anchor_position = np.asarray(self.anchor_position, dtype=np.float64).reshape(3)


@dataclass(frozen=True)
class FrameField:
    frames: np.ndarray  # (N, 3, 3), orthonormal after polar projection


def _check_connected(encoding):
    if "connected" not in encoding._cache:
        n = encoding.vertex_count
        e = encoding.edges
        adj = sp.csr_matrix((np.ones(e.shape[0]), (e[:, 0], e[:, 1])), shape=(n, n))
        ncomp, _ = connected_components(adj, directed=False)
        encoding._cache["connected"] = ncomp == 1
    if not encoding._cache["connected"]:
        raise SingularSystemError("mesh is disconnected; frames and positions are not unique")


def _nearest_rotations(mats):
    u, _, vt = np.linalg.svd(mats)
    det = np.linalg.det(u @ vt)
    u = u.copy()
    u[det < 0, :, -1] *= -1.0
    return u @ vt


class _DirectSolver:
    """Factorized SPD solve with a conjugate-gradient fallback."""

    def __init__(self, mat):
        mat = mat.tocsc()
        self._mat = mat
        try:
            self._lu = spla.splu(mat)
        except RuntimeError as exc:
            if "singular" in str(exc).lower():
                raise SingularSystemError(str(exc)) from exc
            self._lu = None

    def solve(self, rhs):
        if self._lu is not None:
            return self._lu.solve(rhs)
        single = rhs.ndim == 1
        cols = rhs[:, None] if single else rhs
        out = np.empty_like(cols)
        maxiter = 10 * self._mat.shape[0]
        for k in range(cols.shape[1]):
            out[:, k], info = spla.cg(self._mat, cols[:, k], rtol=CG_TOL, maxiter=maxiter)
            if info != 0:
                raise SingularSystemError(f"conjugate gradient did not converge (info={info})")
        return out[:, 0] if single else out


def solve_frame_field(encoding, anchor_vertex, anchor_frame=None):
    """Least-squares frame field with the anchor's frame pinned.

    With anchor_frame=None the anchor keeps its rest frame; the rest frames
    are then the unique zero-residual solution, so they are returned
    directly. A supplied anchor frame triggers the sparse solve, after which
    every frame is projected to the nearest rotation.
    """
    _check_connected(encoding)
    n = encoding.vertex_count
    if anchor_frame is None:
        return FrameField(frames=encoding.frames.copy())
    anchor_frame = np.asarray(anchor_frame, dtype=np.float64).reshape(3, 3)

    edges = encoding.edges
    rot = encoding.rotations
    ne = edges.shape[0]
    # Rows of the frame matrices decouple: solve one sparse LSQ per row with
    # a shared matrix. Unknown layout: x[3*i + c] = frame_i[row, c].
    rows = np.empty(12 * ne + 3, dtype=np.int64)
    cols = np.empty(12 * ne + 3, dtype=np.int64)
    vals = np.empty(12 * ne + 3, dtype=np.float64)
    eq = np.arange(ne, dtype=np.int64)
    for b in range(3):
        base = 4 * (eq * 3 + b)
        rows[base] = eq * 3 + b
        cols[base] = 3 * edges[:, 1] + b
        vals[base] = 1.0
        for ci in range(3):
            rows[base + 1 + ci] = eq * 3 + b
            cols[base + 1 + ci] = 3 * edges[:, 0] + ci
            vals[base + 1 + ci] = -rot[:, ci, b]
    for ci in range(3):
        rows[12 * ne + ci] = 3 * ne + ci
        cols[12 * ne + ci] = 3 * anchor_vertex + ci
        vals[12 * ne + ci] = 1.0
    a = sp.coo_matrix((vals, (rows, cols)), shape=(3 * ne + 3, 3 * n)).tocsr()
    solver = _DirectSolver((a.T @ a).tocsc())
    frames = np.empty((n, 3, 3))
    for row in range(3):
        atb = np.zeros(3 * n)
        atb[3 * anchor_vertex : 3 * anchor_vertex + 3] = anchor_frame[row]
        frames[:, row, :] = solver.solve(atb).reshape(n, 3)
    return FrameField(frames=_nearest_rotations(frames))


def solve_frames(problem, anchor_frame=None):
    return solve_frame_field(problem.encoding, problem.anchor_vertex, anchor_frame)


def detail_targets(encoding, frames):
    """Per-vertex target Laplacian offsets; frames=None keeps rest offsets."""
    if frames is None:
        return encoding.deltas_world
    return np.einsum("iab,ib->ia", frames.frames, encoding.deltas_local)


def _position_normal_k(encoding, alpha, anchor_vertex):
    """Fixed part of the position normal matrix: (1-alpha) L^T L + anchor."""
    key = ("positions-k", float(alpha), int(anchor_vertex))
    mat = encoding._cache.get(key)
    if mat is None:
        lap = encoding.laplacian
        n = lap.shape[0]
        anchor = sp.csr_matrix(
            (np.ones(1), (np.array([anchor_vertex]), np.array([anchor_vertex]))), shape=(n, n)
        )
        mat = ((1.0 - alpha) * (lap.T @ lap) + anchor).tocsr()
        encoding._cache[key] = mat
    return mat


def _position_solver(encoding, alpha, anchor_vertex, feature_ids):
    """Cached factorization of the fixed part of the position normal matrix.

    K = (1-alpha) * L^T L + e_a e_a^T is identical for the three coordinates
    and across iterations; H = K^-1 at the feature-vertex columns carries the
    low-rank projection update.
    """
    key = ("positions", float(alpha), int(anchor_vertex), tuple(int(f) for f in feature_ids))
    cached = encoding._cache.get(key)
    if cached is not None:
        return cached
    k = _position_normal_k(encoding, alpha, anchor_vertex)
    n = k.shape[0]
    solver = _DirectSolver(k.tocsc())
    ef = np.zeros((n, len(feature_ids)))
    ef[np.asarray(feature_ids), np.arange(len(feature_ids))] = 1.0
    h = solver.solve(ef)
    h_feat = h[np.asarray(feature_ids)]  # (P, P), symmetric
    cached = (solver, h, h_feat)
    encoding._cache[key] = cached
    return cached


# Iterative-refinement control for the position solve: the low-rank update
# is applied through an ill-conditioned capacitance system, so the raw
# solution is polished against the full normal operator.
REFINE_STEPS = 4
REFINE_RTOL = 1e-13


def solve_positions(problem, frames):
    """Vertex positions minimizing detail + weighted projection + anchor terms.

    Minimizes, over all positions V:

        (1 - alpha) * sum_i |L(V)_i - target_i|^2
        + alpha * sum_j Wbar_j * |M V_fj + c - p_j|^2
        + |V_anchor - anchor_position|^2

    with Wbar_j the vertex-averaged weight of feature j. The projection term
    touches only feature vertices, so it enters as a low-rank correction to
    the cached detail factorization, followed by iterative refinement on the
    full normal system.
    """
    encoding = problem.encoding
    _check_connected(encoding)
    alpha = float(problem.alpha)
    if alpha >= 1.0:
        raise ContractViolationError("position solve requires alpha < 1")
    lap = encoding.laplacian
    targets = detail_targets(encoding, frames if problem.mode == "lri" else None)

    features = problem.corr.vertex_ids
    solver, h, h_feat = _position_solver(encoding, alpha, problem.anchor_vertex, features)

    b0 = (1.0 - alpha) * (lap.T @ targets)
    b0[problem.anchor_vertex] += problem.anchor_position

    if alpha == 0.0:
        x = solver.solve(b0)
    else:
        wbar = problem.weights.w.sum(axis=1) / encoding.vertex_count  # (P,)
        s = np.sqrt(alpha * wbar)
        m = problem.camera.m  # (2, 3)
        sh = (s[:, None] * s[None, :]) * h_feat
        cap = np.eye(2 * features.shape[0]) + np.kron(sh, m @ m.T)

        def wood_solve(rhs):
            w_full = solver.solve(rhs)
            uw = s[:, None] * (w_full[features] @ m.T)  # (P, 2)
            q = np.linalg.solve(cap, uw.reshape(-1)).reshape(-1, 2)
            return w_full - h @ ((s[:, None] * q) @ m)

        def normal_apply(v):
            out = np.asarray((_position_normal_k(encoding, alpha, problem.anchor_vertex) @ v))
            uv = s[:, None] * (v[features] @ m.T)  # U v
            np.add.at(out, features, (s[:, None] * uv) @ m)
            return out

        y = s[:, None] * (problem.corr.pixels - problem.camera.c)  # (P, 2)
        b = b0.copy()
        np.add.at(b, features, (s[:, None] * y) @ m)  # b0 + U^T y
        x = wood_solve(b)
        b_norm = np.linalg.norm(b)
        for _ in range(REFINE_STEPS):
            residual = b - normal_apply(x)
            if np.linalg.norm(residual) <= REFINE_RTOL * max(b_norm, 1.0):
                break
            x = x + wood_solve(residual)

    if not np.isfinite(x).all():
        raise SingularSystemError("position solve produced non-finite coordinates")
    return x


def deform(problem):
    """Solve frames then positions; returns a mesh with updated vertices."""
    if problem.alpha >= 1.0:
        raise ContractViolationError(
            "alpha = 1 disables deformation; the optimizer must skip this step"
        )
    frames = solve_frames(problem) if problem.mode == "lri" else None
    positions = solve_positions(problem, frames)
    return problem.mesh.with_vertices(positions)
