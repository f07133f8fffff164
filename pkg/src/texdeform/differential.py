"""Differential mesh coordinates.

Two representations of local surface shape feed the deformation solver:

* Laplacian coordinates: the offset of each vertex from the weighted mean of
  its one-ring, under uniform or (clamped) cotangent weights.
* A frame-relative encoding: an orthonormal local frame per vertex plus the
  relative rotation between the frames of adjacent vertices and the Laplacian
  offset expressed in the local frame.  Both quantities are unchanged by a
  rigid rotation of the whole mesh, which is what lets the deformation solver
  reproduce surface detail in a rotated pose.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DegenerateFrameError, IsolatedVertexError, MeshError

SCHEMES = ("uniform", "cotangent")

# Near-degenerate triangles produce huge cotangents; clamping keeps the
# operator bounded and positive semi-definite.
COT_CLAMP = 1.0e4


@dataclass(frozen=True)
class LaplacianCoords:
    """Per-vertex Laplacian offsets (N, 3) and the weight scheme used."""

    deltas: np.ndarray
    scheme: str


def _cotangent_weights(mesh):
    """Symmetric cotangent weight matrix, entries clamped to [0, COT_CLAMP]."""
    v = mesh.vertices
    f = mesh.faces
    n = mesh.vertex_count
    rows = []
    cols = []
    vals = []
    # Corner k faces edge (a, b); its cotangent weights that edge.
    for k, a, b in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        u1 = v[f[:, a]] - v[f[:, k]]
        u2 = v[f[:, b]] - v[f[:, k]]
        cross = np.linalg.norm(np.cross(u1, u2), axis=1)
        cot = np.einsum("ij,ij->i", u1, u2) / np.maximum(cross, 1e-300)
        cot = np.clip(cot, 0.0, COT_CLAMP)
        rows.append(f[:, a])
        cols.append(f[:, b])
        vals.append(cot)
        rows.append(f[:, b])
        cols.append(f[:, a])
        vals.append(cot)
    w = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    w.sum_duplicates()
    return w


def _uniform_weights(mesh):
    n = mesh.vertex_count
    rings = mesh.rings
    rows = np.repeat(np.arange(n, dtype=np.int64), [r.shape[0] for r in rings])
    cols = np.concatenate(rings)
    return sp.csr_matrix((np.ones(cols.shape[0]), (rows, cols)), shape=(n, n))


def build_laplacian(mesh, scheme="cotangent"):
    """Sparse N x N operator L = I - W_normalized for the chosen scheme.

    Rows of W are normalized to sum to 1; cotangent rows whose clamped
    weights all vanish fall back to uniform weights for that vertex.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown Laplacian scheme {scheme!r}")
    for i, ring in enumerate(mesh.rings):
        if ring.shape[0] == 0:
            raise IsolatedVertexError(i)
    w = _cotangent_weights(mesh) if scheme == "cotangent" else _uniform_weights(mesh)
    row_sum = np.asarray(w.sum(axis=1)).reshape(-1)
    dead = row_sum <= 0.0
    if dead.any():
        uni = _uniform_weights(mesh)
        keep = sp.diags((~dead).astype(np.float64))
        add = sp.diags(dead.astype(np.float64))
        w = keep @ w + add @ uni
        row_sum = np.asarray(w.sum(axis=1)).reshape(-1)
    w = sp.diags(1.0 / row_sum) @ w
    lap = sp.eye(mesh.vertex_count, format="csr") - w.tocsr()
    lap.sum_duplicates()
    return lap.tocsr()


def laplacian_coords(mesh, scheme="cotangent"):
    """Laplacian offsets delta_i = v_i - sum_j w_ij v_j for every vertex."""
    lap = build_laplacian(mesh, scheme)
    return LaplacianCoords(deltas=lap @ mesh.vertices, scheme=scheme)


def vertex_normals(mesh):
    """Area-weighted vertex normals, unit length."""
    v = mesh.vertices
    f = mesh.faces
    fn = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])  # 2*area*normal
    normals = np.zeros_like(v)
    for k in range(3):
        np.add.at(normals, f[:, k], fn)
    norms = np.linalg.norm(normals, axis=1)
    bad = norms <= 1e-300
    if bad.any():
        raise DegenerateFrameError(int(np.flatnonzero(bad)[0]), "zero-length vertex normal")
    return normals / norms[:, None]


@dataclass
class LriEncoding:
    """Rotation-invariant rest-shape encoding.

    frames holds one orthonormal 3x3 matrix per vertex whose *columns* are
    (tangent, bitangent, normal); rotations[e] relates the frames across
    directed edge e = (i, j) via frames[j] = frames[i] @ rotations[e]; and
    deltas_local is the Laplacian offset expressed in the vertex frame, so
    frames[i] @ deltas_local[i] reproduces the world-space offset.
    """

    frames: np.ndarray          # (N, 3, 3)
    edges: np.ndarray           # (E, 2) directed
    rotations: np.ndarray       # (E, 3, 3)
    deltas_local: np.ndarray    # (N, 3)
    deltas_world: np.ndarray    # (N, 3)
    laplacian: sp.csr_matrix
    scheme: str
    rest_vertices: np.ndarray   # (N, 3)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def vertex_count(self):
        return self.frames.shape[0]


def lri_encode(mesh, scheme="cotangent"):
    """Build the frame-relative encoding of the mesh's rest shape.

    The tangent is the first one-ring edge (in winding order) projected to
    the tangent plane, which makes the frames reproducible for a given mesh.
    """
    n = mesh.vertex_count
    v = mesh.vertices
    normals = vertex_normals(mesh)
    scale = max(mesh.bbox_diagonal(), 1e-300)
    frames = np.empty((n, 3, 3))
    for i in range(n):
        ring = mesh.winding_ordered_ring(i)
        edge = v[ring[0]] - v[i]
        nrm = normals[i]
        tangent = edge - nrm * np.dot(edge, nrm)
        t_len = np.linalg.norm(tangent)
        if t_len <= 1e-12 * scale:
            raise DegenerateFrameError(i, "first ring edge is degenerate in the tangent plane")
        tangent = tangent / t_len
        bitangent = np.cross(nrm, tangent)
        frames[i] = np.column_stack([tangent, bitangent, nrm])
    edges = mesh.directed_edges()
    # frames[j] = frames[i] @ rot  =>  rot = frames[i]^T frames[j]
    rotations = np.einsum("eab,eac->ebc", frames[edges[:, 0]], frames[edges[:, 1]])
    lap = build_laplacian(mesh, scheme)
    deltas_world = lap @ v
    deltas_local = np.einsum("iab,ia->ib", frames, deltas_world)
    return LriEncoding(
        frames=frames,
        edges=edges,
        rotations=rotations,
        deltas_local=deltas_local,
        deltas_world=deltas_world,
        laplacian=lap,
        scheme=scheme,
        rest_vertices=v.copy(),
    )
