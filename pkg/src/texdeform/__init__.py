"""texdeform: texture a triangle mesh from a casual photograph while
deforming the mesh to match the photographed shape.

The pipeline alternates three least-squares blocks until the combined
energy settles: estimate a global affine camera, deform the mesh so feature
vertices project onto their annotated pixels while surface detail is
preserved, then refit a per-vertex camera field used for texturing.
"""

from .cameras import (
    AffineCamera,
    CameraField,
    estimate_global_camera,
    fit_affine_camera,
    fit_local_cameras,
    geodesic_medoid,
    project,
)
from .deform import DeformProblem, FrameField, deform, solve_frame_field, solve_frames, solve_positions
from .differential import LaplacianCoords, LriEncoding, build_laplacian, laplacian_coords, lri_encode
from .errors import TexDeformError
from .formats import (
    CorrespondenceSet,
    ImageInfo,
    image_info,
    load_correspondences,
    save_correspondences,
    save_result,
)
from .geodesics import GeodesicField, WeightField, geodesic_weights, multi_source_geodesics
from .kernels import BACKEND
from .mesh import Mesh, load_obj, save_obj
from .optimize import EnergyReport, RunResult, SolverConfig, assign_uvs, run, total_energy

__version__ = "0.1.0"

__all__ = [
    "AffineCamera",
    "BACKEND",
    "CameraField",
    "CorrespondenceSet",
    "DeformProblem",
    "EnergyReport",
    "FrameField",
    "GeodesicField",
    "ImageInfo",
    "LaplacianCoords",
    "LriEncoding",
    "Mesh",
    "RunResult",
    "SolverConfig",
    "TexDeformError",
    "WeightField",
    "assign_uvs",
    "build_laplacian",
    "deform",
    "estimate_global_camera",
    "fit_affine_camera",
    "fit_local_cameras",
    "geodesic_medoid",
    "geodesic_weights",
    "image_info",
    "laplacian_coords",
    "load_correspondences",
    "load_obj",
    "lri_encode",
    "multi_source_geodesics",
    "project",
    "run",
    "save_correspondences",
    "save_obj",
    "save_result",
    "solve_frame_field",
    "solve_frames",
    "solve_positions",
    "total_energy",
    "__version__",
]
