"""Geodesic distance fields between feature vertices and the whole mesh.

Distances are shortest paths over the mesh edge graph (Dijkstra with edge
lengths). This is the documented bottleneck of the pipeline, so the search
runs in the selected kernel backend; swapping in an exact polyhedral
algorithm later only requires replacing `multi_source_geodesics`.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import UnreachableVertexError

DEFAULT_BETA = 2.0
DEFAULT_EPS = 1e-3


@dataclass(frozen=True)
class GeodesicField:
    """dist[j, i] is the distance from source vertex sources[j] to vertex i."""

    dist: np.ndarray     # (P, N)
    sources: np.ndarray  # (P,)


@dataclass(frozen=True)
class WeightField:
    """w[j, i] = 1 / (eps + dist[j, i] ** beta); raw, never normalized."""

    w: np.ndarray  # (P, N)
    beta: float
    eps: float


def multi_source_geodesics(mesh, sources):
    """Distance field with one row per source vertex.

    Raises UnreachableVertexError if any vertex is disconnected from a
    source rather than leaving silent infinities in the field.
    """
    sources = np.asarray(sources, dtype=np.int64).reshape(-1)
    if sources.size == 0:
        raise ValueError("need at least one source vertex")
    if sources.min() < 0 or sources.max() >= mesh.vertex_count:
        raise ValueError("source vertex id out of range")
    indptr, indices, lengths = mesh.edge_graph()
    dist = kernels.multi_source_dijkstra(indptr, indices, lengths, sources)
    if not np.isfinite(dist).all():
        j, i = np.argwhere(~np.isfinite(dist))[0]
        raise UnreachableVertexError(int(sources[j]), int(i))
    return GeodesicField(dist=dist, sources=sources)


def geodesic_weights(field, beta=DEFAULT_BETA, eps=DEFAULT_EPS):
    """Distance-falloff weights used by both camera fitting and deformation."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if eps <= 0:
        raise ValueError("eps must be positive")
    return WeightField(w=1.0 / (eps + field.dist**beta), beta=float(beta), eps=float(eps))


def field_to_csv(field, path):
    """Debug dump: one CSV row per source, one column per vertex."""
    np.savetxt(path, field.dist, delimiter=",", fmt="%.17g")
