import json
import subprocess
import sys

import numpy as np
import pytest

from texdeform.cli import main
from texdeform.formats import save_correspondences
from texdeform.mesh import load_obj, save_obj

from conftest import consistent_fixture
from test_formats import make_png


@pytest.fixture
def run_inputs(tmp_path):
    mesh, corr, image, _ = consistent_fixture()
    mesh_path = tmp_path / "mesh.obj"
    save_obj(mesh, mesh_path)
    corr_path = tmp_path / "corr.json"
    save_correspondences(corr, corr_path)
    image_path = make_png(tmp_path / "texture.png", image.width, image.height)
    return mesh, mesh_path, corr_path, image_path, tmp_path


class TestCmdRun:
    def test_consistent_fixture_exits_zero(self, run_inputs):
        mesh, mesh_path, corr_path, image_path, tmp = run_inputs
        out = tmp / "out"
        code = main(
            ["run", "--mesh", str(mesh_path), "--image", str(image_path),
             "--corr", str(corr_path), "--out", str(out)]
        )
        assert code == 0
        report = json.loads((out / "report.json").read_text())
        assert report["converged"] is True
        assert report["iterations"] <= 3

    def test_alpha_one_outputs_input_mesh(self, run_inputs):
        mesh, mesh_path, corr_path, image_path, tmp = run_inputs
        out = tmp / "out1"
        code = main(
            ["run", "--mesh", str(mesh_path), "--image", str(image_path),
             "--corr", str(corr_path), "--out", str(out), "--alpha", "1"]
        )
        assert code == 0
        again = load_obj(out / "mesh.obj")
        assert np.array_equal(again.vertices, mesh.vertices)

    def test_missing_corr_is_usage_error(self, run_inputs, capsys):
        mesh, mesh_path, corr_path, image_path, tmp = run_inputs
        with pytest.raises(SystemExit) as exc:
            main(["run", "--mesh", str(mesh_path), "--image", str(image_path),
                  "--out", str(tmp / "o")])
        assert exc.value.code == 1
        assert "usage" in capsys.readouterr().err

    def test_max_iterations_stop_exits_two(self, run_inputs):
        mesh, mesh_path, corr_path, image_path, tmp = run_inputs
        # non-affine perturbation so one iteration cannot converge
        doc = json.loads(corr_path.read_text())
        for k, pair in enumerate(doc["pairs"]):
            delta = 4.0 if k % 2 == 0 else -4.0
            pair["pixel"][0] = min(max(pair["pixel"][0] + delta, 0.0), doc["image"]["width"])
        noisy = tmp / "noisy.json"
        noisy.write_text(json.dumps(doc))
        code = main(
            ["run", "--mesh", str(mesh_path), "--image", str(image_path),
             "--corr", str(noisy), "--out", str(tmp / "o2"), "--max-iters", "1"]
        )
        assert code == 2

    def test_bad_mesh_path_exits_one(self, run_inputs, capsys):
        mesh, mesh_path, corr_path, image_path, tmp = run_inputs
        code = main(
            ["run", "--mesh", str(tmp / "missing.obj"), "--image", str(image_path),
             "--corr", str(corr_path), "--out", str(tmp / "o3")]
        )
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestCmdGeodesics:
    def test_square_matches_hand_values(self, tmp_path, square_mesh):
        mesh_path = tmp_path / "sq.obj"
        save_obj(square_mesh, mesh_path)
        out = tmp_path / "field.csv"
        code = main(["geodesics", "--mesh", str(mesh_path), "--sources", "0", "--out", str(out)])
        assert code == 0
        row = np.loadtxt(out, delimiter=",")
        assert row == pytest.approx([0.0, 1.0, np.sqrt(2.0), 1.0])

    def test_all_vertices_of_triangle_diag_zero(self, tmp_path):
        mesh_path = tmp_path / "tri.obj"
        mesh_path.write_text("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")
        out = tmp_path / "f.csv"
        code = main(["geodesics", "--mesh", str(mesh_path), "--sources", "0,1,2", "--out", str(out)])
        assert code == 0
        field = np.loadtxt(out, delimiter=",")
        assert np.diag(field) == pytest.approx([0.0, 0.0, 0.0])

    def test_invalid_source_exits_one(self, tmp_path, square_mesh, capsys):
        mesh_path = tmp_path / "sq.obj"
        save_obj(square_mesh, mesh_path)
        code = main(["geodesics", "--mesh", str(mesh_path), "--sources", "99",
                     "--out", str(tmp_path / "f.csv")])
        assert code == 1

    def test_prints_timing(self, tmp_path, square_mesh, capsys):
        mesh_path = tmp_path / "sq.obj"
        save_obj(square_mesh, mesh_path)
        main(["geodesics", "--mesh", str(mesh_path), "--sources", "0",
              "--out", str(tmp_path / "f.csv")])
        assert " s" in capsys.readouterr().out

    def test_table_scale_field(self, tmp_path, lion_scale, capsys):
        mesh, corr, image = lion_scale
        mesh_path = tmp_path / "big.obj"
        save_obj(mesh, mesh_path)
        out = tmp_path / "big.csv"
        sources = ",".join(str(int(v)) for v in corr.vertex_ids)
        code = main(["geodesics", "--mesh", str(mesh_path), "--sources", sources,
                     "--out", str(out)])
        assert code == 0
        assert "86 source(s) x 5000 vertices" in capsys.readouterr().out
        field = np.loadtxt(out, delimiter=",")
        assert field.shape == (86, 5000)


class TestEntryPoint:
    def test_installed_console_script(self, tmp_path, square_mesh):
        mesh_path = tmp_path / "sq.obj"
        save_obj(square_mesh, mesh_path)
        out = subprocess.run(
            [sys.executable, "-m", "texdeform.cli", "geodesics", "--mesh", str(mesh_path),
             "--sources", "0", "--out", str(tmp_path / "f.csv")],
            capture_output=True,
            text=True,
        )
        assert out.returncode == 0
        assert (tmp_path / "f.csv").exists()
