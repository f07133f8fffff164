"""Alternating least-squares driver.

One outer iteration recomputes the geodesic weights on the current mesh,
picks the global camera, deforms the mesh toward the annotated pixels (when
the blend weight allows it), refits every vertex's local camera, and
re-evaluates the combined energy. Iteration stops when the relative energy
change falls below the tolerance or the iteration cap is hit.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .cameras import estimate_global_camera, fit_local_cameras, geodesic_medoid
from .deform import DeformProblem, FrameField, _position_solver, deform, detail_targets
from .differential import SCHEMES, lri_encode
from .errors import PipelineError, TexDeformError
from .geodesics import DEFAULT_BETA, DEFAULT_EPS, geodesic_weights, multi_source_geodesics
from .kernels import projection_energy

MODES = ("lri", "literal")


@dataclass(frozen=True)
class SolverConfig:
    alpha: float = 0.5
    beta: float = DEFAULT_BETA
    eps: float = DEFAULT_EPS
    laplacian: str = "cotangent"
    mode: str = "lri"
    tol: float = 1e-3
    # Relative change is meaningless once the energy reaches numerical noise;
    # anything at or below this absolute floor counts as converged.
    energy_atol: float = 1e-12
    max_iterations: int = 20
    anchor: "int | str" = "medoid"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.beta <= 0 or self.eps <= 0:
            raise ValueError("beta and eps must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.laplacian not in SCHEMES:
            raise ValueError(f"unknown Laplacian scheme {self.laplacian!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not (self.anchor == "medoid" or isinstance(self.anchor, int)):
            raise ValueError("anchor must be 'medoid' or a vertex id")


@dataclass
class EnergyReport:
    detail: float
    projection: float
    total: float
    alpha: float
    history: list = field(default_factory=list)


@dataclass
class RunResult:
    mesh: "Mesh"
    cameras: "CameraField"
    uvs: np.ndarray  # (N, 2), nominally in [0,1]^2 but never clamped
    report: EnergyReport
    iterations: int
    converged: bool
    timings: dict
    uv_out_of_image: int
    anchor_vertex: int


def total_energy(mesh, corr, cameras, weights, encoding, frames, alpha):
    """Combined energy: (1-alpha) * detail + alpha * projection.

    The detail term compares current Laplacian offsets (rest weights) with
    the frame-rotated rest offsets; frames=None uses plain rest offsets. The
    projection term runs every vertex camera over every correspondence with
    its distance-falloff weight.
    """
    targets = detail_targets(encoding, frames)
    residual = encoding.laplacian @ mesh.vertices - targets
    e_detail = float(np.einsum("ij,ij->", residual, residual))
    feat = np.ascontiguousarray(mesh.vertices[corr.vertex_ids])
    e_proj = projection_energy(
        np.ascontiguousarray(cameras.m),
        np.ascontiguousarray(cameras.c),
        feat,
        np.ascontiguousarray(corr.pixels),
        np.ascontiguousarray(weights.w),
    )
    total = (1.0 - alpha) * e_detail + alpha * e_proj
    return EnergyReport(detail=e_detail, projection=e_proj, total=total, alpha=alpha)


def assign_uvs(mesh, cameras, width, height):
    """Per-vertex UVs: each vertex projected through its own camera, divided
    by the image size. Values outside [0,1] are preserved, not clamped."""
    if len(cameras) != mesh.vertex_count:
        raise ValueError("one camera per vertex required")
    return cameras.project_own(mesh.vertices) / np.array([width, height], dtype=np.float64)


class _Stages:
    def __init__(self):
        self.per_iteration = {}
        self.oneshot = {}

    def run(self, name, iteration, fn):
        start = time.perf_counter()
        try:
            out = fn()
        except TexDeformError as exc:
            raise PipelineError(name, iteration, exc) from exc
        elapsed = time.perf_counter() - start
        if iteration is None:
            self.oneshot[name] = self.oneshot.get(name, 0.0) + elapsed
        else:
            self.per_iteration.setdefault(name, []).append(elapsed)
        return out

    def as_dict(self, total):
        stage_totals = {k: sum(v) for k, v in self.per_iteration.items()}
        return {
            "per_iteration": self.per_iteration,
            "setup": self.oneshot,
            "stage_totals": stage_totals,
            "total": total,
        }


def run(mesh, image, corr, cfg=None):
    """Full texturing-and-deforming loop; deterministic for fixed inputs."""
    cfg = cfg or SolverConfig()
    corr.bind(mesh)
    p = corr.vertex_ids.shape[0]
    if p < 4:
        raise ValueError(f"at least 4 correspondences required, got {p}")
    if (corr.image_width, corr.image_height) != (image.width, image.height):
        raise ValueError(
            f"correspondence image size {corr.image_width}x{corr.image_height} "
            f"does not match texture image {image.width}x{image.height}"
        )
    if isinstance(cfg.anchor, int) and not 0 <= cfg.anchor < mesh.vertex_count:
        raise ValueError(f"anchor vertex {cfg.anchor} out of range (mesh has {mesh.vertex_count})")
    start_total = time.perf_counter()
    stages = _Stages()
    encoding = stages.run("setup", None, lambda: lri_encode(mesh, cfg.laplacian))
    rest_frames = FrameField(frames=encoding.frames) if cfg.mode == "lri" else None

    current = mesh
    cameras = None
    anchor_vertex = cfg.anchor if isinstance(cfg.anchor, int) else None
    anchor_position = None
    prev_energy = None
    history = []
    converged = False
    iterations = 0
    report = None

    for k in range(1, cfg.max_iterations + 1):
        iterations = k
        cur = current  # rebind for the closures below

        def _geodesics(cur=cur):
            geo = multi_source_geodesics(cur, corr.vertex_ids)
            return geo, geodesic_weights(geo, cfg.beta, cfg.eps)

        geo, weights = stages.run("geodesics", k, _geodesics)
        if anchor_vertex is None:
            anchor_vertex = geodesic_medoid(geo)
        if anchor_position is None:
            anchor_position = mesh.vertices[anchor_vertex].copy()
        if k == 1 and cfg.alpha < 1.0:
            # The position-solve factorization depends only on the rest
            # encoding, alpha, anchor and feature ids; pay for it here so the
            # per-iteration deform stage reflects steady-state cost.
            stages.run(
                "setup",
                None,
                lambda a=anchor_vertex: _position_solver(
                    encoding, cfg.alpha, a, corr.vertex_ids
                ),
            )

        gcam = stages.run(
            "global_camera",
            k,
            lambda cur=cur, geo=geo: estimate_global_camera(cur, corr, geo, cameras),
        )

        if cfg.alpha < 1.0:
            problem = DeformProblem(
                encoding=encoding,
                mesh=current,
                corr=corr,
                camera=gcam,
                weights=weights,
                alpha=cfg.alpha,
                anchor_vertex=anchor_vertex,
                anchor_position=anchor_position,
                mode=cfg.mode,
            )
            current = stages.run("deform", k, lambda problem=problem: deform(problem))

        cameras = stages.run(
            "local_cameras",
            k,
            lambda cur=current, w=weights: fit_local_cameras(cur, corr, w),
        )

        report = stages.run(
            "energy",
            k,
            lambda cur=current, cams=cameras, w=weights: total_energy(
                cur, corr, cams, w, encoding, rest_frames, cfg.alpha
            ),
        )
        if not np.isfinite(report.total):
            raise PipelineError("energy", k, TexDeformError("energy is not finite"))
        history.append(
            {
                "iteration": k,
                "detail": report.detail,
                "projection": report.projection,
                "total": report.total,
            }
        )
        if report.total <= cfg.energy_atol:
            converged = True
        elif prev_energy is not None:
            if prev_energy == 0.0:
                converged = report.total == 0.0
            else:
                converged = abs(report.total - prev_energy) / prev_energy < cfg.tol
        prev_energy = report.total
        if converged:
            break

    report.history = history
    uvs = stages.run(
        "uvs", None, lambda: assign_uvs(current, cameras, image.width, image.height)
    )
    out_count = int((np.any((uvs < 0.0) | (uvs > 1.0), axis=1)).sum())
    return RunResult(
        mesh=current,
        cameras=cameras,
        uvs=uvs,
        report=report,
        iterations=iterations,
        converged=converged,
        timings=stages.as_dict(time.perf_counter() - start_total),
        uv_out_of_image=out_count,
        anchor_vertex=anchor_vertex,
    )
