"""Triangle mesh container plus ASCII OBJ/MTL reading and writing."""

import os

import numpy as np

from .errors import (
    IsolatedVertexError,
    MeshError,
    NonTriangleFaceError,
    ObjParseError,
)


class Mesh:
    """Indexed triangle mesh with positions, faces and one-ring adjacency.

    Vertices are float64 (N, 3), faces are int64 (F, 3) with 0-based indices.
    Instances are treated as immutable after construction; deformations
    produce new meshes via :meth:`with_vertices`.
    """

    def __init__(self, vertices, faces):
        vertices = np.ascontiguousarray(vertices, dtype=np.float64)
        faces = np.ascontiguousarray(faces, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise MeshError(f"vertices must be (N, 3), got {vertices.shape}")
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise MeshError(f"faces must be (F, 3), got {faces.shape}")
        if not np.isfinite(vertices).all():
            raise MeshError("vertex positions contain NaN or infinity")
        n = vertices.shape[0]
        if faces.size and (faces.min() < 0 or faces.max() >= n):
            raise MeshError("face index out of range")
        same = (
            (faces[:, 0] == faces[:, 1])
            | (faces[:, 1] == faces[:, 2])
            | (faces[:, 0] == faces[:, 2])
        )
        if same.any():
            raise MeshError(f"degenerate face {int(np.flatnonzero(same)[0])} repeats a vertex")
        used = np.zeros(n, dtype=bool)
        used[faces.reshape(-1)] = True
        if not used.all():
            raise IsolatedVertexError(int(np.flatnonzero(~used)[0]))
        self.vertices = vertices
        self.faces = faces
        self._rings = None
        self._csr = None
        self._incident = None

    @property
    def vertex_count(self):
        return self.vertices.shape[0]

    @property
    def face_count(self):
        return self.faces.shape[0]

    def with_vertices(self, vertices):
        """New mesh with the same connectivity; adjacency caches are shared."""
        other = Mesh.__new__(Mesh)
        vertices = np.ascontiguousarray(vertices, dtype=np.float64)
        if vertices.shape != self.vertices.shape:
            raise MeshError("replacement vertices must match the original shape")
        if not np.isfinite(vertices).all():
            raise MeshError("vertex positions contain NaN or infinity")
        other.vertices = vertices
        other.faces = self.faces
        other._rings = self._rings
        other._csr = self._csr
        other._incident = self._incident
        return other

    @property
    def rings(self):
        """One-ring neighbours per vertex, each sorted ascending."""
        if self._rings is None:
            n = self.vertex_count
            nbr = [set() for _ in range(n)]
            for a, b, c in self.faces:
                nbr[a].update((b, c))
                nbr[b].update((a, c))
                nbr[c].update((a, b))
            self._rings = tuple(np.array(sorted(s), dtype=np.int64) for s in nbr)
        return self._rings

    def ring(self, i):
        return self.rings[i]

    def incident_faces(self, i):
        """Face ids containing vertex i, ascending."""
        if self._incident is None:
            flat = self.faces.reshape(-1)
            order = np.argsort(flat, kind="stable")
            counts = np.bincount(flat, minlength=self.vertex_count)
            splits = np.cumsum(counts)[:-1]
            self._incident = tuple(np.split(order // 3, splits))
        return self._incident[i]

    def winding_ordered_ring(self, i):
        """One-ring of vertex i ordered by walking the link edges in face winding.

        Starts at the boundary (if any) or at the smallest neighbour index, so
        the result does not depend on face ordering for consistently wound
        meshes. Extra link components (non-manifold fans) are appended sorted.
        """
        succ = {}
        for f in self.incident_faces(i):
            a, b, c = self.faces[f]
            if a == i:
                x, y = b, c
            elif b == i:
                x, y = c, a
            else:
                x, y = a, b
            succ.setdefault(int(x), int(y))
        if not succ:
            raise IsolatedVertexError(i)
        has_pred = set(succ.values())
        starts = sorted(set(succ) - has_pred)
        start = starts[0] if starts else min(succ)
        ring = [start]
        seen = {start}
        cur = start
        while cur in succ and succ[cur] not in seen:
            cur = succ[cur]
            ring.append(cur)
            seen.add(cur)
        for extra in sorted(set(succ) | has_pred):
            if extra not in seen:
                ring.append(extra)
                seen.add(extra)
        return np.array(ring, dtype=np.int64)

    def directed_edges(self):
        """(E, 2) array of all directed edges (i, j), i ascending, j ascending."""
        rows = []
        for i, ring in enumerate(self.rings):
            rows.append(np.column_stack([np.full(ring.shape, i, dtype=np.int64), ring]))
        return np.concatenate(rows, axis=0)

    def edge_graph(self):
        """CSR adjacency (indptr, indices, lengths) with current edge lengths."""
        if self._csr is None:
            rings = self.rings
            indptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
            indptr[1:] = np.cumsum([r.shape[0] for r in rings])
            indices = np.concatenate(rings) if rings else np.empty(0, dtype=np.int64)
            src = np.repeat(np.arange(self.vertex_count, dtype=np.int64), np.diff(indptr))
            self._csr = (indptr, indices, src)
        indptr, indices, src = self._csr
        lengths = np.linalg.norm(self.vertices[indices] - self.vertices[src], axis=1)
        return indptr, indices, lengths

    def bbox_diagonal(self):
        return float(np.linalg.norm(self.vertices.max(axis=0) - self.vertices.min(axis=0)))


def _parse_face_token(token):
    # "i", "i/t", "i/t/n", "i//n" -> vertex index (1-based, as written)
    head = token.split("/")[0]
    return int(head)


def load_obj(path):
    """Read an ASCII OBJ file with `v` and triangular `f` records.

    1-based OBJ indices are converted to 0-based. Texture/normal manifest
    lines (vt, vn, usemtl, mtllib, o, g, s, comments) are ignored; quads and
    larger polygons are rejected.
    """
    vertices = []
    faces = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            tokens = raw.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            tag = tokens[0]
            if tag == "v":
                if len(tokens) != 4:
                    raise ObjParseError(path, line_no, f"expected 'v x y z', got {raw.strip()!r}")
                try:
                    vertices.append([float(t) for t in tokens[1:4]])
                except ValueError as exc:
                    raise ObjParseError(path, line_no, f"bad vertex coordinate: {exc}") from None
            elif tag == "f":
                if len(tokens) != 4:
                    raise NonTriangleFaceError(
                        path, line_no, f"face has {len(tokens) - 1} vertices; only triangles are supported"
                    )
                try:
                    idx = [_parse_face_token(t) for t in tokens[1:4]]
                except ValueError as exc:
                    raise ObjParseError(path, line_no, f"bad face index: {exc}") from None
                for k in idx:
                    if k < 1 or k > len(vertices):
                        raise ObjParseError(path, line_no, f"face index {k} out of range (1..{len(vertices)})")
                faces.append([k - 1 for k in idx])
            elif tag in ("vt", "vn", "vp", "usemtl", "mtllib", "o", "g", "s", "l"):
                continue
            else:
                raise ObjParseError(path, line_no, f"unsupported record {tag!r}")
    if not vertices:
        raise ObjParseError(path, 0, "no vertices found")
    try:
        return Mesh(np.array(vertices, dtype=np.float64), np.array(faces, dtype=np.int64).reshape(-1, 3))
    except MeshError as exc:
        raise ObjParseError(path, 0, str(exc)) from exc


def obj_text(mesh, uvs=None, texture_name=None, mtl_name=None):
    """Serialize a mesh to OBJ text; `vt` records and MTL reference are optional.

    Floats are written with repr so a load/save round trip is exact.
    """
    if uvs is not None:
        uvs = np.asarray(uvs, dtype=np.float64)
        if uvs.shape != (mesh.vertex_count, 2):
            raise MeshError(f"need one UV per vertex, got {uvs.shape}")
    lines = []
    if texture_name is not None and mtl_name is not None:
        lines.append(f"mtllib {mtl_name}")
    for x, y, z in mesh.vertices:
        lines.append(f"v {float(x)!r} {float(y)!r} {float(z)!r}")
    if uvs is not None:
        for u, v in uvs:
            lines.append(f"vt {float(u)!r} {float(v)!r}")
    if texture_name is not None:
        lines.append("usemtl textured")
    if uvs is not None:
        for a, b, c in mesh.faces + 1:
            lines.append(f"f {a}/{a} {b}/{b} {c}/{c}")
    else:
        for a, b, c in mesh.faces + 1:
            lines.append(f"f {a} {b} {c}")
    return "\n".join(lines) + "\n"


def mtl_text(texture_name):
    return (
        "newmtl textured\n"
        "Ka 1.0 1.0 1.0\n"
        "Kd 1.0 1.0 1.0\n"
        f"map_Kd {texture_name}\n"
    )


def save_obj(mesh, path, uvs=None, texture_name=None):
    """Write OBJ (and a sibling MTL referencing `texture_name` when given)."""
    path = os.fspath(path)
    mtl_name = None
    if texture_name is not None:
        mtl_name = os.path.splitext(os.path.basename(path))[0] + ".mtl"
        mtl_path = os.path.join(os.path.dirname(path), mtl_name)
        with open(mtl_path, "w", encoding="utf-8") as fh:
            fh.write(mtl_text(texture_name))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(obj_text(mesh, uvs=uvs, texture_name=texture_name, mtl_name=mtl_name))
