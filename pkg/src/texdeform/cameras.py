"""Affine camera model: global estimation and per-vertex weighted fits.

A camera is a 2x3 matrix plus a 2-vector image-plane offset mapping model
coordinates to pixels. Every vertex eventually gets its own camera, fitted
against the feature correspondences with geodesic-distance falloff weights,
so nearby features dominate each vertex's projection.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateConfigurationError

# Normal-matrix condition number above which a fit is rejected as singular.
COND_LIMIT = 1e12

MIN_PAIRS = 4


@dataclass(frozen=True)
class AffineCamera:
    m: np.ndarray  # (2, 3)
    c: np.ndarray  # (2,)

    def project(self, points):
        """Map one (3,) point or an (N, 3) batch to pixel coordinates."""
        points = np.asarray(points, dtype=np.float64)
        return points @ self.m.T + self.c


@dataclass(frozen=True)
class CameraField:
    """One affine camera per mesh vertex, stored as packed arrays."""

    m: np.ndarray  # (N, 2, 3)
    c: np.ndarray  # (N, 2)

    def __len__(self):
        return self.m.shape[0]

    def __getitem__(self, i):
        return AffineCamera(m=self.m[i], c=self.c[i])

    def project_own(self, vertices):
        """Project vertex i through camera i; (N, 2) pixels."""
        return np.einsum("iab,ib->ia", self.m, vertices) + self.c


def project(cam, point):
    return cam.project(point)


def _fit_batch(points3, points2, weights):
    m, c, cond = kernels.fit_cameras(
        np.ascontiguousarray(points3, dtype=np.float64),
        np.ascontiguousarray(points2, dtype=np.float64),
        np.ascontiguousarray(weights, dtype=np.float64),
        COND_LIMIT,
    )
    return m, c, cond


def fit_affine_camera(points3, points2, weights=None):
    """Weighted least-squares camera through the given 3D-2D pairs.

    Solved per image axis via 4-unknown normal equations sharing one normal
    matrix. Requires at least 4 pairs in a non-degenerate configuration.
    """
    points3 = np.asarray(points3, dtype=np.float64).reshape(-1, 3)
    points2 = np.asarray(points2, dtype=np.float64).reshape(-1, 2)
    p = points3.shape[0]
    if points2.shape[0] != p:
        raise ValueError("points3 and points2 must pair up")
    if p < MIN_PAIRS:
        raise ValueError(f"need at least {MIN_PAIRS} pairs, got {p}")
    if weights is None:
        weights = np.ones(p)
    weights = np.asarray(weights, dtype=np.float64).reshape(-1)
    if weights.shape[0] != p:
        raise ValueError("one weight per pair required")
    if (weights <= 0).any():
        raise ValueError("weights must be positive")
    m, c, cond = _fit_batch(points3, points2, weights[:, None])
    if not np.isfinite(cond[0]):
        raise DegenerateConfigurationError(
            f"normal matrix condition exceeds {COND_LIMIT:g} (points nearly coplanar or collinear)"
        )
    return AffineCamera(m=m[0], c=c[0])


def fit_local_cameras(mesh, corr, weights):
    """Per-vertex cameras: vertex i minimizes its weight row's pixel residual.

    Positions of the feature vertices come from the current (possibly
    deformed) mesh; weights must be (P, N).
    """
    p = corr.vertex_ids.shape[0]
    if p < MIN_PAIRS:
        raise ValueError(f"need at least {MIN_PAIRS} correspondences, got {p}")
    if weights.w.shape != (p, mesh.vertex_count):
        raise ValueError(
            f"weights must be (P, N) = ({p}, {mesh.vertex_count}), got {weights.w.shape}"
        )
    feat = mesh.vertices[corr.vertex_ids]
    m, c, cond = _fit_batch(feat, corr.pixels, weights.w)
    if not np.isfinite(cond).all():
        vertex = int(np.flatnonzero(~np.isfinite(cond))[0])
        raise DegenerateConfigurationError(
            f"normal matrix condition exceeds {COND_LIMIT:g}", vertex=vertex
        )
    return CameraField(m=m, c=c)


def geodesic_medoid(geo):
    """Vertex minimizing the summed distance to all sources (ties: lowest id)."""
    return int(np.argmin(geo.dist.sum(axis=0)))


def estimate_global_camera(mesh, corr, geo, prev=None):
    """Single coarse camera for the whole mesh.

    The camera of the geodesic-medoid vertex is reused from the previous
    per-vertex field when one exists; on the first pass a plain unit-weight
    fit over all correspondences stands in.
    """
    if geo.dist.shape[0] != corr.vertex_ids.shape[0]:
        raise ValueError("distance field rows must match correspondence entries")
    medoid = geodesic_medoid(geo)
    if prev is not None:
        return AffineCamera(m=prev.m[medoid].copy(), c=prev.c[medoid].copy())
    return fit_affine_camera(mesh.vertices[corr.vertex_ids], corr.pixels)
