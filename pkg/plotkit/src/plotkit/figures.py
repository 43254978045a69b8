"""Figure specs, CSV parsers, and the render dispatcher.

Four figure kinds are supported:

``heatmap``
    Space-time rendering of ``solution.csv`` (real part of the state).
``error_curves``
    Overlaid per-step relative-error curves from one or more
    ``errors.csv`` files, log-scaled vertical axis.
``residual_trace``
    Residual-vs-time trace from ``residuals.csv`` with dashed vertical
    lines at the stage boundaries from ``stages.csv``.
``segmentation_compare``
    Two residual/stage pairs stacked on a shared time axis, for
    comparing segmentation strategies.

All parsers validate the harness's fixed column headers and raise
:class:`ParseError` naming the offending column or file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

FIGURE_KINDS = ("heatmap", "error_curves", "residual_trace",
                "segmentation_compare")

# Fixed save options keep re-renders byte-identical.
_SAVE_KW = {"dpi": 150, "metadata": {"Software": None}}


class ParseError(ValueError):
    """A CSV input does not match the expected schema."""


def _read_rows(path, expected, optional=()):
    """Header-checked CSV rows as lists of strings."""
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: file not found")
    lines = path.read_text().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file")
    header = lines[0].split(",")
    allowed = [list(expected)] + [list(expected) + list(o) for o in optional]
    if header not in allowed:
        want = ",".join(expected)
        got = ",".join(header)
        missing = [c for c in expected if c not in header]
        col = missing[0] if missing else got
        raise ParseError(f"{path}: expected columns '{want}', got '{got}' "
                         f"(column '{col}')")
    rows = [line.split(",") for line in lines[1:] if line]
    if not rows:
        raise ParseError(f"{path}: no data rows")
    width = len(header)
    for i, row in enumerate(rows, start=2):
        if len(row) != width:
            raise ParseError(f"{path}: line {i} has {len(row)} fields, "
                             f"expected {width}")
    return header, rows


def read_solution(path):
    """solution.csv -> (times, complex state matrix (steps, n))."""
    path = Path(path)
    if not path.exists():
        raise ParseError(f"{path}: file not found")
    lines = path.read_text().splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file")
    header = lines[0].split(",")
    if header[0] != "t" or len(header) < 3 or (len(header) - 1) % 2 != 0:
        raise ParseError(f"{path}: expected columns 't,re0,im0,...' "
                         f"(column 't')")
    n = (len(header) - 1) // 2
    for i in range(n):
        if header[1 + 2 * i] != f"re{i}" or header[2 + 2 * i] != f"im{i}":
            raise ParseError(f"{path}: expected column 're{i}'/'im{i}' at "
                             f"position {1 + 2 * i}")
    data = np.array([[float(v) for v in line.split(",")]
                     for line in lines[1:] if line])
    if data.size == 0:
        raise ParseError(f"{path}: no data rows")
    times = data[:, 0]
    states = data[:, 1::2] + 1j * data[:, 2::2]
    return times, states


def read_errors(path):
    """errors.csv -> (times, relative errors)."""
    _, rows = _read_rows(path, ("t", "re"), optional=(("flag",),))
    data = np.array([[float(r[0]), float(r[1])] for r in rows])
    return data[:, 0], data[:, 1]


def read_residuals(path):
    """residuals.csv -> (times, residual values)."""
    _, rows = _read_rows(path, ("t", "delta"))
    data = np.array([[float(r[0]), float(r[1])] for r in rows])
    return data[:, 0], data[:, 1]


def read_stages(path):
    """stages.csv -> list of per-stage dicts."""
    header, rows = _read_rows(
        path, ("i", "t_start", "t_end", "n_i", "c_i", "correction_invoked"))
    out = []
    for r in rows:
        out.append({"i": int(r[0]), "t_start": float(r[1]),
                    "t_end": float(r[2]), "n_i": int(r[3]), "c_i": int(r[4]),
                    "correction_invoked": r[5] == "true"})
    return out


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: figure kind, input CSVs, labels, and output path."""

    kind: str
    inputs: tuple
    out: str
    labels: tuple = ()
    log_y: bool = True

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind: {self.kind}")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        object.__setattr__(self, "labels", tuple(self.labels))
        need = {"heatmap": 1, "residual_trace": 2,
                "segmentation_compare": 4}.get(self.kind)
        if need is not None and len(self.inputs) != need:
            raise ValueError(f"{self.kind} takes exactly {need} input files, "
                             f"got {len(self.inputs)}")
        if self.kind == "error_curves" and not self.inputs:
            raise ValueError("error_curves needs at least one input file")


def _stage_boundaries(stages):
    """Interior boundary times: the start of every stage after the first."""
    return [s["t_start"] for s in stages[1:]]


def _draw_residual_axis(ax, times, values, stages, label=None, log_y=True):
    positive = values > 0
    ax.plot(times[positive], values[positive], color="tab:blue", lw=1.0,
            label=label)
    if log_y:
        ax.set_yscale("log")
    for t in _stage_boundaries(stages):
        ax.axvline(t, color="red", linestyle="--", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("residual")


def _render_heatmap(spec, fig):
    times, states = read_solution(spec.inputs[0])
    ax = fig.add_subplot(111)
    im = ax.imshow(states.real.T, origin="lower", aspect="auto",
                   extent=(times[0], times[-1], 0, states.shape[1] - 1),
                   cmap="viridis")
    fig.colorbar(im, ax=ax, label="Re u")
    ax.set_xlabel("t")
    ax.set_ylabel("grid index")
    title = spec.labels[0] if spec.labels else "solution"
    ax.set_title(title)


def _render_error_curves(spec, fig):
    ax = fig.add_subplot(111)
    labels = spec.labels or [Path(p).parent.name or f"run {i}"
                             for i, p in enumerate(spec.inputs, start=1)]
    if len(labels) != len(spec.inputs):
        raise ValueError("need one label per input file")
    lo, hi = np.inf, 0.0
    for path, label in zip(spec.inputs, labels):
        times, res = read_errors(path)
        positive = res > 0
        ax.plot(times[positive], res[positive], lw=1.0, label=label)
        if positive.any():
            lo = min(lo, res[positive].min())
            hi = max(hi, res[positive].max())
    if spec.log_y:
        ax.set_yscale("log")
        ax.set_ylim(max(min(lo, 1e-10), 1e-16), max(hi * 2, 1.0))
    ax.set_xlabel("t")
    ax.set_ylabel("relative error")
    ax.legend(loc="best")


def _render_residual_trace(spec, fig):
    times, values = read_residuals(spec.inputs[0])
    stages = read_stages(spec.inputs[1])
    ax = fig.add_subplot(111)
    label = spec.labels[0] if spec.labels else None
    _draw_residual_axis(ax, times, values, stages, label=label,
                        log_y=spec.log_y)
    if label:
        ax.legend(loc="best")


def _render_segmentation_compare(spec, fig):
    labels = spec.labels or ("segmentation A", "segmentation B")
    if len(labels) != 2:
        raise ValueError("segmentation_compare needs exactly two labels")
    axes = fig.subplots(2, 1, sharex=True)
    for ax, (res_path, stage_path), label in zip(
            axes, (spec.inputs[:2], spec.inputs[2:]), labels):
        times, values = read_residuals(res_path)
        stages = read_stages(stage_path)
        _draw_residual_axis(ax, times, values, stages, log_y=spec.log_y)
        ax.set_title(label)
    axes[0].set_xlabel("")


_RENDERERS = {
    "heatmap": _render_heatmap,
    "error_curves": _render_error_curves,
    "residual_trace": _render_residual_trace,
    "segmentation_compare": _render_segmentation_compare,
}


def render(spec: FigureSpec) -> Path:
    """Render the figure and write it to spec.out; returns the path."""
    fig = plt.figure(figsize=(7.0, 4.5))
    try:
        _RENDERERS[spec.kind](spec, fig)
        fig.tight_layout()
        out = Path(spec.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, **_SAVE_KW)
    finally:
        plt.close(fig)
    return Path(spec.out)
