import numpy as np
import pytest

from texdeform import Mesh, build_laplacian, laplacian_coords, lri_encode
from texdeform.errors import DegenerateFrameError

from conftest import make_grid_mesh, make_icosahedron, random_rotation
from oracles import dense_laplacian


class TestLaplacianCoords:
    def test_uniform_interior_grid_vertex_is_zero(self):
        mesh = make_grid_mesh(5, 5)
        coords = laplacian_coords(mesh, scheme="uniform")
        # interior vertex (2,2) of a regular triangulated grid
        assert np.allclose(coords.deltas[2 * 5 + 2], 0.0, atol=1e-12)

    def test_icosahedron_delta_parallel_to_normal(self):
        mesh = make_icosahedron()
        coords = laplacian_coords(mesh, scheme="uniform")
        for i in range(mesh.vertex_count):
            d = coords.deltas[i]
            n = mesh.vertices[i] / np.linalg.norm(mesh.vertices[i])
            cross = np.cross(d / np.linalg.norm(d), n)
            assert np.linalg.norm(cross) < 1e-10

    @pytest.mark.parametrize("scheme", ["uniform", "cotangent"])
    def test_matches_dense_assembly(self, scheme):
        mesh = make_grid_mesh(4, 5, warp=0.3, jitter=0.04, seed=11)
        assert mesh.vertex_count == 20
        coords = laplacian_coords(mesh, scheme=scheme)
        expected = dense_laplacian(mesh, scheme) @ mesh.vertices
        assert np.abs(coords.deltas - expected).max() < 1e-10

    def test_linear_in_positions_uniform(self):
        mesh = make_grid_mesh(4, 4, warp=0.2, jitter=0.03, seed=5)
        rng = np.random.default_rng(9)
        v2 = mesh.vertices + rng.normal(0, 0.1, mesh.vertices.shape)
        a, b = 0.7, -1.3
        lhs = laplacian_coords(mesh.with_vertices(a * mesh.vertices + b * v2), "uniform").deltas
        rhs = (
            a * laplacian_coords(mesh, "uniform").deltas
            + b * laplacian_coords(mesh.with_vertices(v2), "uniform").deltas
        )
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_cotangent_scale_covariance(self):
        # cotangents depend on angles only, so uniform scaling scales deltas
        mesh = make_grid_mesh(4, 4, warp=0.2, jitter=0.03, seed=6)
        d1 = laplacian_coords(mesh, "cotangent").deltas
        d2 = laplacian_coords(mesh.with_vertices(2.5 * mesh.vertices), "cotangent").deltas
        assert np.abs(d2 - 2.5 * d1).max() < 1e-10

    def test_cotangent_rows_sum_to_zero_action(self):
        # L applied to constant positions vanishes (row normalization)
        mesh = make_grid_mesh(5, 4, warp=0.25, jitter=0.02, seed=7)
        lap = build_laplacian(mesh, "cotangent")
        ones = np.ones((mesh.vertex_count, 3))
        assert np.abs(lap @ ones).max() < 1e-12


class TestLriEncoding:
    def test_frames_orthonormal(self):
        mesh = make_grid_mesh(5, 5, warp=0.3, jitter=0.03, seed=3)
        enc = lri_encode(mesh)
        eye = np.einsum("iab,icb->iac", enc.frames, enc.frames)
        assert np.abs(eye - np.eye(3)).max() < 1e-9

    def test_edge_consistency_at_rest(self):
        mesh = make_grid_mesh(5, 5, warp=0.3, jitter=0.03, seed=3)
        enc = lri_encode(mesh)
        lhs = np.einsum("eab,ebc->eac", enc.frames[enc.edges[:, 0]], enc.rotations)
        assert np.abs(lhs - enc.frames[enc.edges[:, 1]]).max() < 1e-9

    def test_flat_grid_rotations_in_plane(self):
        mesh = make_grid_mesh(5, 5)
        enc = lri_encode(mesh)
        # shared normal: bottom-right element of every relative rotation is 1
        assert np.abs(enc.rotations[:, 2, 2] - 1.0).max() < 1e-9
        assert np.abs(enc.rotations[:, 2, :2]).max() < 1e-9
        assert np.abs(enc.rotations[:, :2, 2]).max() < 1e-9

    def test_rotation_invariance(self):
        mesh = make_grid_mesh(5, 6, warp=0.3, jitter=0.04, seed=8)
        q = random_rotation(21)
        rotated = mesh.with_vertices(mesh.vertices @ q.T)
        enc_a = lri_encode(mesh)
        enc_b = lri_encode(rotated)
        assert np.array_equal(enc_a.edges, enc_b.edges)
        assert np.abs(enc_a.rotations - enc_b.rotations).max() < 1e-9
        assert np.abs(enc_a.deltas_local - enc_b.deltas_local).max() < 1e-9

    def test_local_deltas_decode_to_world(self):
        mesh = make_grid_mesh(5, 5, warp=0.2, jitter=0.02, seed=4)
        enc = lri_encode(mesh)
        decoded = np.einsum("iab,ib->ia", enc.frames, enc.deltas_local)
        assert np.abs(decoded - enc.deltas_world).max() < 1e-12

    def test_colocated_vertices_degenerate_tangent(self):
        v = np.array([[0, 0, 0], [0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=np.float64)
        f = np.array([[0, 1, 2], [0, 2, 3], [1, 3, 2]])
        mesh = Mesh(v, f)
        with pytest.raises(DegenerateFrameError):
            lri_encode(mesh)

    def test_cancelling_normals_rejected(self):
        # two faces with opposite winding share all vertices: normals cancel
        v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=np.float64)
        f = np.array([[0, 1, 2], [0, 2, 1]])
        mesh = Mesh(v, f)
        with pytest.raises(DegenerateFrameError):
            lri_encode(mesh)
