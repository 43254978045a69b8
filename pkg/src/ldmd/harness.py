"""Experiment runner: config parsing, method dispatch, error reports,
and deterministic CSV artifacts.

Emitted files per run (fixed column orders):
  solution.csv  -> t, then state entries as interleaved (re, im) pairs
  errors.csv    -> t,re[,flag]
  residuals.csv -> t,delta            (adaptive / oracle methods only)
  stages.csv    -> i,t_start,t_end,n_i,c_i,correction_invoked
  summary.csv   -> method,equation,gamma,stages,mre,wall_time_s,status
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fom
from .baselines import (HodmdConfig, fit_hodmd, fit_pod_rbf, predict_hodmd,
                        predict_pod_rbf)
from .dmd import ObservableMap, RankSpec
from .fom import IntegrationFailure, integrate, make_problem, position_density
from .segmentation import (LdmdResult, ResidualConfig, StageRecord,
                           TaylorConfig, run_aldmd, run_optldmd, run_pldmd)

METHODS = ("dmd", "pldmd", "aldmd", "optldmd", "hodmd", "podrbf")


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass
class ExperimentConfig:
    name: str
    equation: str
    method: str
    grid: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    observable: str = "identity"
    save_solution: bool = True
    record_timing: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        for key in ("equation", "method"):
            if key not in d:
                raise ConfigError(f"missing required field: {key}")
        if d["equation"] not in fom._EQUATIONS:
            raise ConfigError(f"unknown equation: {d['equation']}")
        if d["method"] not in METHODS:
            raise ConfigError(f"unknown method: {d['method']}")
        known = {"name", "equation", "method", "grid", "params", "observable",
                 "save_solution", "record_timing"}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        d.setdefault("name", f"{d['equation']}_{d['method']}")
        cfg = cls(**d)
        if cfg.observable not in ("identity", "augment_exp"):
            raise ConfigError(f"unknown observable: {cfg.observable}")
        cfg._validate_params()
        return cfg

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def _validate_params(self):
        p = self.params
        need = {
            "dmd": ["M", "r"],
            "pldmd": ["schedule", "r"],
            "aldmd": ["epsilon", "n1", "m", "r"],
            "optldmd": ["varepsilon", "r"],
            "hodmd": ["d", "M", "r"],
            "podrbf": ["r_pod"],
        }[self.method]
        missing = [k for k in need if k not in p and not (k == "r" and "eta" in p)]
        if missing:
            raise ConfigError(
                f"method {self.method!r} missing parameters: {missing}")
        for key in ("r", "M", "n1", "m", "d", "r_pod", "n_next"):
            if key in p and (not isinstance(p[key], int) or p[key] < 1):
                raise ConfigError(f"parameter {key!r} must be a positive integer")
        for key in ("epsilon", "varepsilon", "eta"):
            if key in p and not (isinstance(p[key], (int, float)) and p[key] > 0):
                raise ConfigError(f"parameter {key!r} must be positive")

    def rank_spec(self) -> RankSpec:
        if "eta" in self.params:
            return RankSpec(mode="energy", eta=float(self.params["eta"]))
        return RankSpec(mode="fixed", r=int(self.params["r"]))


@dataclass
class ErrorReport:
    method: str
    equation: str
    per_step: np.ndarray      # (N_t, 2) columns t, RE
    mre: float
    gamma: float
    stage_count: int
    wall_time_s: float
    status: str = "ok"
    zero_norm_flags: np.ndarray = None
    field_mre: dict = field(default_factory=dict)
    fom_wall_time_s: float = 0.0
    result: LdmdResult = None


def relative_error(u_hat, u_ref) -> tuple[float, bool]:
    """L2 relative error; falls back to the absolute norm (flagged) when
    the reference has zero norm."""
    u_hat = np.asarray(u_hat)
    u_ref = np.asarray(u_ref)
    if u_hat.shape != u_ref.shape:
        raise ValueError("relative_error requires equal lengths")
    den = np.linalg.norm(u_ref)
    if den == 0.0:
        return float(np.linalg.norm(u_hat)), True
    return float(np.linalg.norm(u_hat - u_ref) / den), False


def _error_metric(problem, trajectory):
    """Per-step comparison vectors: density for NLSE, raw state otherwise."""
    if problem.equation == "nlse":
        return np.asarray([position_density(u) for u in trajectory])
    return np.asarray(trajectory)


def _uniform_schedule(n_stages: int, n_steps: int, snapshot_fraction: float):
    if n_steps % n_stages != 0:
        raise ConfigError(f"{n_steps} steps not divisible into {n_stages} stages")
    length = n_steps // n_stages
    n_i = round(snapshot_fraction * length)
    return [(n_i, length - n_i)] * n_stages


def _dispatch(cfg: ExperimentConfig, problem, reference):
    """Run the configured method; returns (LdmdResult-like, trajectory)."""
    p = cfg.params
    spec = cfg.rank_spec() if cfg.method != "podrbf" else None
    obs = ObservableMap(cfg.observable, problem.state_dim)
    n_steps = problem.n_steps

    if cfg.method == "dmd":
        M = p["M"]
        return run_pldmd(problem, [(M, n_steps - M)], spec, obs)
    if cfg.method == "pldmd":
        sched = p["schedule"]
        if isinstance(sched, dict):
            sched = _uniform_schedule(sched["stages"], n_steps,
                                      sched.get("snapshot_fraction", 0.5))
        try:
            return run_pldmd(problem, sched, spec, obs)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if cfg.method == "aldmd":
        res = ResidualConfig(epsilon=float(p["epsilon"]), m=p["m"])
        return run_aldmd(problem, p["n1"], res, spec, obs,
                         n_next=p.get("n_next"))
    if cfg.method == "optldmd":
        tc = TaylorConfig(varepsilon=float(p["varepsilon"]),
                          snapshot_fraction=p.get("snapshot_fraction", 0.5))
        return run_optldmd(reference, problem, tc, spec, obs)
    if cfg.method == "hodmd":
        M = p["M"]
        wall0 = time.perf_counter()
        snaps = np.asarray(reference[: M + 1]).T
        model = fit_hodmd(snaps, HodmdConfig(d=p["d"], rank=spec), problem.dt)
        traj = list(reference[: M + 1])
        for k in range(M + 1, n_steps + 1):
            traj.append(predict_hodmd(model, problem.state_dim, k))
        return LdmdResult(trajectory=np.asarray(traj), stages=[],
                          gamma=1.0 - M / n_steps, fom_steps_used=M,
                          wall_time=time.perf_counter() - wall0)
    if cfg.method == "podrbf":
        wall0 = time.perf_counter()
        idx = _podrbf_sample_indices(p, n_steps)
        times = idx * problem.dt
        snaps = np.asarray(reference)[idx].T
        model = fit_pod_rbf(snaps, times, p["r_pod"],
                            shape=p.get("shape"))
        traj = [predict_pod_rbf(model, k * problem.dt)
                for k in range(n_steps + 1)]
        return LdmdResult(trajectory=np.asarray(traj), stages=[],
                          gamma=1.0 - len(idx) / n_steps,
                          fom_steps_used=len(idx),
                          wall_time=time.perf_counter() - wall0)
    raise ConfigError(f"unknown method: {cfg.method}")


def _podrbf_sample_indices(p, n_steps):
    """Sample times for POD-RBF: the FOM phases of a stage schedule, or
    the first M+1 steps."""
    if "schedule" in p:
        sched = p["schedule"]
        if isinstance(sched, dict):
            sched = _uniform_schedule(sched["stages"], n_steps,
                                      sched.get("snapshot_fraction", 0.5))
        idx, k = [0], 0
        for n_i, m_i in sched:
            idx.extend(range(k + 1, k + n_i + 1))
            k += n_i + m_i
        return np.asarray(idx)
    if "M" in p:
        return np.arange(p["M"] + 1)
    raise ConfigError("podrbf needs either 'schedule' or 'M'")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def run_experiment(cfg: ExperimentConfig, out_dir) -> ErrorReport:
    """Run one experiment and write its CSV artifacts into out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem = make_problem(cfg.equation, **cfg.grid)
    n_steps = problem.n_steps

    fom_wall0 = time.perf_counter()
    reference = integrate(problem, problem.initial_condition(), 0.0, n_steps)
    fom_wall = time.perf_counter() - fom_wall0

    result = _dispatch(cfg, problem, reference)

    ref_metric = _error_metric(problem, reference)
    hat_metric = _error_metric(problem, result.trajectory)
    per_step = np.zeros((n_steps, 2))
    flags = np.zeros(n_steps, dtype=bool)
    for k in range(1, n_steps + 1):
        re, flagged = relative_error(hat_metric[k], ref_metric[k])
        per_step[k - 1] = (k * problem.dt, re)
        flags[k - 1] = flagged
    mre = float(np.mean(per_step[:, 1]))

    field_mre = {}
    if cfg.equation == "maxwell_tm":
        for name in ("Hx", "Hy", "Ez", "Jz", "Kx", "Ky"):
            sl = problem.layout[name]
            res_f = [relative_error(result.trajectory[k][sl], reference[k][sl])[0]
                     for k in range(1, n_steps + 1)]
            field_mre[name] = float(np.mean(res_f))

    wall = result.wall_time if cfg.record_timing else 0.0
    report = ErrorReport(method=cfg.method, equation=cfg.equation,
                         per_step=per_step, mre=mre, gamma=result.gamma,
                         stage_count=len(result.stages),
                         wall_time_s=result.wall_time, status="ok",
                         zero_norm_flags=flags, field_mre=field_mre,
                         fom_wall_time_s=fom_wall, result=result)

    if cfg.save_solution:
        rows = []
        for k, u in enumerate(result.trajectory):
            u = np.asarray(u)
            inter = np.empty(2 * u.size)
            inter[0::2] = u.real
            inter[1::2] = u.imag
            rows.append([k * problem.dt, *inter])
        ncols = (len(rows[0]) - 1) // 2
        header = ["t"] + [f"{p}{i}" for i in range(ncols) for p in ("re", "im")]
        _write_csv(out / "solution.csv", header, rows)

    if np.any(flags):
        _write_csv(out / "errors.csv", ["t", "re", "flag"],
                   [(t, re, bool(f)) for (t, re), f in zip(per_step, flags)])
    else:
        _write_csv(out / "errors.csv", ["t", "re"], per_step)

    if cfg.method in ("aldmd", "optldmd"):
        rows = [(k * problem.dt, v)
                for rec in result.stages for k, v in rec.residual_trace]
        _write_csv(out / "residuals.csv", ["t", "delta"], rows)

    _write_csv(out / "stages.csv",
               ["i", "t_start", "t_end", "n_i", "c_i", "correction_invoked"],
               [(rec.index, rec.t_start, rec.t_end, rec.n_snapshots,
                 rec.window_count, rec.correction_invoked)
                for rec in result.stages])

    _write_csv(out / "summary.csv",
               ["method", "equation", "gamma", "stages", "mre",
                "wall_time_s", "status"],
               [(cfg.method, cfg.equation, result.gamma, len(result.stages),
                 mre, wall, "ok")])
    return report


def sweep(configs, out_dir) -> list:
    """Run a sequence of configs; failures become non-ok summary rows."""
    configs = list(configs)
    if not configs:
        raise ConfigError("sweep requires at least one config")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows, reports = [], []
    for cfg in configs:
        try:
            rep = run_experiment(cfg, out / cfg.name)
            rows.append((cfg.method, cfg.equation, rep.gamma, rep.stage_count,
                         rep.mre, rep.wall_time_s if cfg.record_timing else 0.0,
                         "ok"))
            reports.append(rep)
        except (ConfigError, IntegrationFailure) as exc:
            status = "config_error" if isinstance(exc, ConfigError) else "numerical_failure"
            rows.append((cfg.method, cfg.equation, 0.0, 0, float("nan"), 0.0,
                         status))
            reports.append(None)
    _write_csv(out / "summary.csv",
               ["method", "equation", "gamma", "stages", "mre",
                "wall_time_s", "status"], rows)
    return reports


def bundled_config_dir() -> Path:
    return Path(__file__).parent / "configs"


def list_bundled_configs() -> list:
    return sorted(p.name for p in bundled_config_dir().glob("*.json"))
