"""End-to-end figure rendering against real harness artifacts."""

import hashlib

import pytest

from ldmd.harness import ExperimentConfig, run_experiment
from plotkit import FIGURE_KINDS, FigureSpec, ParseError, render
from plotkit.figures import (read_errors, read_residuals, read_solution,
                             read_stages)

SMALL_ALDMD = {
    "equation": "burgers",
    "grid": {"n_intervals": 50, "n_steps": 200},
    "name": "small_aldmd",
    "method": "aldmd",
    "params": {"epsilon": 1e-5, "n1": 50, "m": 25, "n_next": 40, "r": 10},
}

SMALL_ALDMD_LOOSE = {
    "equation": "burgers",
    "grid": {"n_intervals": 50, "n_steps": 200},
    "name": "small_aldmd_loose",
    "method": "aldmd",
    "params": {"epsilon": 1e-3, "n1": 50, "m": 25, "n_next": 40, "r": 10},
}


@pytest.fixture(scope="module")
def run_dirs(tmp_path_factory):
    root = tmp_path_factory.mktemp("plotkit_runs")
    dirs = {}
    for cfg_dict in (SMALL_ALDMD, SMALL_ALDMD_LOOSE):
        cfg = ExperimentConfig.from_dict(cfg_dict)
        run_experiment(cfg, root / cfg.name)
        dirs[cfg.name] = root / cfg.name
    return dirs


def _specs(run_dirs, out_dir):
    a = run_dirs["small_aldmd"]
    p = run_dirs["small_aldmd_loose"]
    return {
        "heatmap": FigureSpec("heatmap", (a / "solution.csv",),
                              out_dir / "heatmap.png"),
        "error_curves": FigureSpec(
            "error_curves", (a / "errors.csv", p / "errors.csv"),
            out_dir / "errors.png", labels=("tight", "loose")),
        "residual_trace": FigureSpec(
            "residual_trace", (a / "residuals.csv", a / "stages.csv"),
            out_dir / "residuals.png"),
        "segmentation_compare": FigureSpec(
            "segmentation_compare",
            (a / "residuals.csv", a / "stages.csv",
             p / "residuals.csv", p / "stages.csv"),
            out_dir / "segmentation.png", labels=("tight", "loose")),
    }


class TestRendering:
    def test_all_kinds_render(self, run_dirs, tmp_path):
        specs = _specs(run_dirs, tmp_path)
        assert set(specs) == set(FIGURE_KINDS)
        for spec in specs.values():
            out = render(spec)
            assert out.exists()
            assert out.stat().st_size > 1000

    def test_rerender_is_byte_stable(self, run_dirs, tmp_path):
        spec1 = _specs(run_dirs, tmp_path / "a")["residual_trace"]
        spec2 = _specs(run_dirs, tmp_path / "b")["residual_trace"]
        h1 = hashlib.sha256(render(spec1).read_bytes()).hexdigest()
        h2 = hashlib.sha256(render(spec2).read_bytes()).hexdigest()
        assert h1 == h2

    def test_inputs_not_mutated(self, run_dirs, tmp_path):
        before = {p: p.read_bytes()
                  for p in run_dirs["small_aldmd"].glob("*.csv")}
        for spec in _specs(run_dirs, tmp_path).values():
            render(spec)
        for p, data in before.items():
            assert p.read_bytes() == data


class TestReaders:
    def test_solution_round_trip_shapes(self, run_dirs):
        t, states = read_solution(run_dirs["small_aldmd"] / "solution.csv")
        assert states.shape == (len(t), 51)
        assert states.dtype.kind == "c"

    def test_errors_and_residuals_align(self, run_dirs):
        d = run_dirs["small_aldmd"]
        t_err, re = read_errors(d / "errors.csv")
        assert len(t_err) == len(re) == 200
        t_res, delta = read_residuals(d / "residuals.csv")
        assert len(t_res) == len(delta)
        assert (delta >= 0).all()

    def test_stages_fields(self, run_dirs):
        stages = read_stages(run_dirs["small_aldmd"] / "stages.csv")
        assert stages[0]["i"] == 1
        assert all(s["t_end"] > s["t_start"] for s in stages)
        assert all(isinstance(s["correction_invoked"], bool) for s in stages)


class TestParseErrors:
    def test_empty_errors_file(self, tmp_path):
        bad = tmp_path / "errors.csv"
        bad.write_text("")
        with pytest.raises(ParseError, match="empty file"):
            read_errors(bad)

    def test_header_only(self, tmp_path):
        bad = tmp_path / "errors.csv"
        bad.write_text("t,re\n")
        with pytest.raises(ParseError, match="no data rows"):
            read_errors(bad)

    def test_wrong_column_named(self, tmp_path):
        bad = tmp_path / "residuals.csv"
        bad.write_text("t,value\n0.0,1.0\n")
        with pytest.raises(ParseError, match="delta"):
            read_residuals(bad)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError, match="not found"):
            read_stages(tmp_path / "nope.csv")

    def test_ragged_row(self, tmp_path):
        bad = tmp_path / "residuals.csv"
        bad.write_text("t,delta\n0.0,1.0\n0.1\n")
        with pytest.raises(ParseError, match="line 3"):
            read_residuals(bad)

    def test_solution_bad_header(self, tmp_path):
        bad = tmp_path / "solution.csv"
        bad.write_text("t,re0\n0.0,1.0\n")
        with pytest.raises(ParseError):
            read_solution(bad)


class TestSpecValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown figure kind"):
            FigureSpec("pie", ("x.csv",), "out.png")

    def test_wrong_input_count(self):
        with pytest.raises(ValueError, match="exactly 2"):
            FigureSpec("residual_trace", ("x.csv",), "out.png")

    def test_error_curves_needs_inputs(self):
        with pytest.raises(ValueError, match="at least one"):
            FigureSpec("error_curves", (), "out.png")
