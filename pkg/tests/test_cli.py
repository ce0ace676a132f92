"""
Tests for the dshell command-line interface
"""
import json

import pytest
from pydantic import ValidationError

from src.cli.main import build_parser, load_settings, main
from src.config.constants import EXIT_INPUT_ERROR, EXIT_OK
from src.core.errors import InputError
from src.models.config_models import PrintConfig

RUN_FILES = [
    "analysis.json",
    "partition.json",
    "shell.json",
    "report.json",
    "report.txt",
    "piece_U_0.toolpath.json",
    "piece_V_0.toolpath.json",
]

TRIANGLE_MESH = {
    "units": "mm",
    "vertices": [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
    "quads": [[0, 1, 2]],
}


@pytest.fixture
def grid_file(tmp_path):
    """A 2 x 3 grid written by the gen subcommand"""
    assert main(["gen", "grid", "--rows", "2", "--cols", "3", "--out", str(tmp_path / "meshes")]) == EXIT_OK
    return tmp_path / "meshes" / "grid.json"


class TestGen:
    """Test cases for test-mesh generation"""

    def test_writes_mesh(self, grid_file):
        data = json.loads(grid_file.read_text())

        assert len(data["vertices"]) == 12
        assert len(data["quads"]) == 6
        assert set(data["edge_labels"]) == {"U", "V"}

    def test_bad_params(self, tmp_path):
        """Test an impossible cylinder is an input error"""
        code = main(["gen", "cylinder", "--cols", "2", "--out", str(tmp_path)])
        assert code == EXIT_INPUT_ERROR


class TestRun:
    """Test cases for the full pipeline command"""

    def test_run_grid(self, grid_file, tmp_path, capsys):
        """Test every artifact is written and the report row printed"""
        out = tmp_path / "out"
        code = main(["run", "--input", str(grid_file), "--out", str(out)])

        assert code == EXIT_OK
        for name in RUN_FILES:
            assert (out / name).exists(), name
        row = capsys.readouterr().out.strip().splitlines()[-1]
        assert row.startswith("grid | 3 x 2 x 0 | 0 | 0 | 1 | 1 | ")

    def test_deterministic(self, grid_file, tmp_path):
        """Test two runs write byte-identical artifacts"""
        first, second = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--input", str(grid_file), "--out", str(first)]) == EXIT_OK
        assert main(["run", "--input", str(grid_file), "--out", str(second)]) == EXIT_OK

        names = sorted(p.name for p in first.iterdir())
        assert names == sorted(p.name for p in second.iterdir())
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes(), name

    def test_staged(self, grid_file, tmp_path, capsys):
        """Test partition -> shell -> slice -> report resumes from artifacts"""
        out = str(tmp_path / "out")

        assert main(["partition", "--input", str(grid_file), "--out", out]) == EXIT_OK
        assert main(["shell", "--out", out]) == EXIT_OK
        assert main(["slice", "--out", out]) == EXIT_OK
        capsys.readouterr()
        assert main(["report", "--out", out, "--name", "grid"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("grid | 3 x 2 x 0")

    def test_d2_residual_reported(self, tmp_path):
        """Test a D2 disk reports its shared cut edges, at most dq per arm"""
        meshes, out = tmp_path / "meshes", tmp_path / "out"
        assert main(["gen", "d2", "--sector", "4", "--out", str(meshes)]) == EXIT_OK
        code = main(["run", "--input", str(meshes / "d2.json"), "--out", str(out), "--dq", "2"])

        assert code == EXIT_OK

        report = json.loads((out / "report.json").read_text())
        partition = json.loads((out / "partition.json").read_text())
        assert report["singularities"] == 1
        assert len(report["residual_edges"]) <= 2 * 2
        assert all(len(r["edges"]) <= 2 for r in partition["registry"]["residuals"])

    def test_bbox_leaves_room_for_support(self, tmp_path):
        """Test a 120 mm grid in a 120 mm box is split so pieces fit with their support"""
        meshes, out = tmp_path / "meshes", tmp_path / "out"
        assert main(["gen", "grid", "--rows", "8", "--cols", "12", "--out", str(meshes)]) == EXIT_OK
        code = main(["run", "--input", str(meshes / "grid.json"), "--out", str(out), "--bbox", "120,120,120"])

        assert code == EXIT_OK
        report = json.loads((out / "report.json").read_text())
        assert report["pieces_u"] >= 2
        assert not any("bbox" in v for v in report.get("violations", []))

    def test_invalid_mesh(self, tmp_path):
        """Test a triangle mesh fails before anything is written"""
        bad = tmp_path / "tri.json"
        bad.write_text(json.dumps(TRIANGLE_MESH))
        out = tmp_path / "out"

        assert main(["run", "--input", str(bad), "--out", str(out)]) == EXIT_INPUT_ERROR
        assert not out.exists()

    def test_missing_input(self, tmp_path):
        assert main(["run", "--out", str(tmp_path)]) == EXIT_INPUT_ERROR

    def test_missing_artifact(self, tmp_path):
        """Test resuming without an earlier stage"""
        assert main(["shell", "--out", str(tmp_path)]) == EXIT_INPUT_ERROR

    @pytest.mark.parametrize("flags", [
        ["--gamma", "-1"],
        ["--nozzle", "2.5", "--thickness", "4"],
        ["--dq", "-1"],
    ])
    def test_invalid_parameters(self, grid_file, tmp_path, flags):
        """Test invalid parameters exit 2 without output"""
        out = tmp_path / "out"
        code = main(["run", "--input", str(grid_file), "--out", str(out)] + flags)

        assert code == EXIT_INPUT_ERROR
        assert not out.exists()


class TestAnalyzeAndPreview:
    """Test cases for the inspection commands"""

    def test_analyze(self, grid_file, capsys):
        """Test the census is printed as JSON"""
        assert main(["analyze", "--input", str(grid_file)]) == EXIT_OK
        analysis = json.loads(capsys.readouterr().out)

        assert analysis["singularities"] == []
        assert analysis["index_check"] is True
        assert analysis["strips"]["U"]["strips"] == 2

    def test_preview_patches(self, grid_file, tmp_path):
        out = tmp_path / "out"
        main(["run", "--input", str(grid_file), "--out", str(out)])

        assert main(["preview", "--kind", "patches", "--out", str(out)]) == EXIT_OK
        assert "o patch_0" in (out / "preview_patches_U.obj").read_text()

    def test_preview_paths(self, grid_file, tmp_path):
        out = tmp_path / "out"
        main(["run", "--input", str(grid_file), "--out", str(out)])

        assert main(["preview", "--kind", "paths", "--out", str(out)]) == EXIT_OK
        assert (out / "preview_paths_U_0.obj").exists()
        assert (out / "preview_paths_V_0.svg").exists()


class TestSettings:
    """Test cases for parameter precedence"""

    def test_defaults(self):
        settings = load_settings(build_parser().parse_args(["run"]))

        assert settings.nozzle == pytest.approx(2.5)
        assert settings.shell_config().thickness == pytest.approx(10.0)

    def test_precedence(self, tmp_path, monkeypatch):
        """Test environment < config file < flags"""
        monkeypatch.setenv("DSHELL_GAMMA", "1.0")
        monkeypatch.setenv("DSHELL_DQ", "1")
        config = tmp_path / "params.json"
        config.write_text(json.dumps({"gamma": 1.2, "hatch": 8.0}))

        args = build_parser().parse_args(["run", "--config", str(config), "--hatch", "6"])
        settings = load_settings(args)

        assert settings.dq == 1
        assert settings.gamma == pytest.approx(1.2)
        assert settings.hatch == pytest.approx(6.0)

    def test_unknown_config_key(self, tmp_path):
        config = tmp_path / "params.json"
        config.write_text(json.dumps({"gama": 1.0}))

        with pytest.raises(InputError):
            load_settings(build_parser().parse_args(["run", "--config", str(config)]))

    def test_support_allowance(self):
        """Test partitioning keeps the default support height free in every direction"""
        settings = load_settings(build_parser().parse_args(["run"]))

        assert settings.print_config().support_height == pytest.approx(4.5)
        assert settings.partition_config().usable_bbox == pytest.approx((495.5, 495.5, 495.5))

    def test_support_below_platform(self):
        with pytest.raises(ValidationError):
            PrintConfig(support_height=1.0)
