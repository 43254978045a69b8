"""Standard dynamic mode decomposition on shifted snapshot matrices.

Fits a rank-r linear one-step operator to the pair (Y1, Y2) of
time-shifted observable snapshots and exposes discrete and continuous
modal prediction, plus the two observable maps used by the benchmarks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numerics


@dataclass(frozen=True)
class ObservableMap:
    """State-to-observable transform applied before fitting.

    ``identity`` leaves the state alone; ``augment_exp`` stacks the
    componentwise exponential under the state, doubling the dimension.
    """

    kind: str = "identity"
    state_dim: int = 0

    def __post_init__(self):
        if self.kind not in ("identity", "augment_exp"):
            raise ValueError(f"unknown observable kind: {self.kind}")

    @property
    def observable_dim(self) -> int:
        return self.state_dim if self.kind == "identity" else 2 * self.state_dim

    def apply(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        if u.shape != (self.state_dim,):
            raise ValueError(f"state length {u.shape} != {self.state_dim}")
        if self.kind == "identity":
            return u
        return np.concatenate([u, np.exp(u)])

    def invert(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=complex)
        if y.shape != (self.observable_dim,):
            raise ValueError(f"observable length {y.shape} != {self.observable_dim}")
        if self.kind == "identity":
            return y
        # First-block extraction: exact minimizer for consistent augmented
        # vectors, and avoids a nonlinear solve.
        return y[: self.state_dim]


def apply_observable(obs_map: ObservableMap, u: np.ndarray) -> np.ndarray:
    return obs_map.apply(u)


def invert_observable(obs_map: ObservableMap, y: np.ndarray) -> np.ndarray:
    return obs_map.invert(y)


@dataclass(frozen=True)
class SnapshotPair:
    """One-step-shifted observable data matrices with time metadata."""

    Y1: np.ndarray
    Y2: np.ndarray
    dt: float
    t0: float = 0.0

    def __post_init__(self):
        if self.Y1.shape != self.Y2.shape:
            raise ValueError("Y1 and Y2 must have the same shape")
        if self.Y1.shape[1] < 2:
            raise ValueError("need at least 2 snapshot columns")
        if self.dt <= 0:
            raise ValueError("dt must be positive")


def build_snapshot_pair(states, dt: float, t0: float = 0.0) -> SnapshotPair:
    """Stack ordered states y_0..y_M into the shifted pair (Y1, Y2)."""
    Y = np.column_stack([np.asarray(s, dtype=complex) for s in states])
    if Y.shape[1] < 3:
        raise ValueError("need at least 3 states to form a snapshot pair")
    return SnapshotPair(Y1=Y[:, :-1], Y2=Y[:, 1:], dt=float(dt), t0=float(t0))


@dataclass(frozen=True)
class RankSpec:
    """Truncation rank choice: fixed r, or smallest r reaching the
    cumulative squared-singular-value energy 1 - eta."""

    mode: str = "fixed"
    r: int = 1
    eta: float = 1e-10

    def __post_init__(self):
        if self.mode not in ("fixed", "energy"):
            raise ValueError(f"unknown rank mode: {self.mode}")
        if self.mode == "fixed" and self.r < 1:
            raise ValueError("fixed rank must be >= 1")
        if self.mode == "energy" and not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")


def select_rank(sigma, spec: RankSpec) -> int:
    """Number of singular directions to keep for the given spec."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.size == 0:
        raise ValueError("empty singular value sequence")
    if np.any(np.diff(sigma) > 1e-12 * max(sigma[0], 1.0)) or np.any(sigma < 0):
        raise ValueError("sigma must be nonincreasing and nonnegative")
    l = sigma.size
    if spec.mode == "fixed":
        return min(spec.r, l)
    energy = np.cumsum(sigma**2)
    total = energy[-1]
    if total == 0.0:
        raise ValueError("all-zero singular values: energy criterion degenerate")
    return int(np.searchsorted(energy / total, 1.0 - spec.eta) + 1)


@dataclass(frozen=True)
class DmdModel:
    """Fitted rank-r DMD model.

    Prediction in the observable space is Phi @ diag(Lambda**k) @ b for
    step k past t0, or Phi @ diag(exp(omega*(t-t0))) @ b in continuous
    time with omega on the principal log branch.
    """

    Phi: np.ndarray            # (observable_dim, r) modes
    Lambda: np.ndarray         # (r,) discrete eigenvalues
    b: np.ndarray              # (r,) amplitudes fit to the first snapshot
    omega: np.ndarray          # (r,) continuous frequencies ln(lambda)/dt
    dt: float
    t0: float
    rank: int
    observable: ObservableMap
    reconstruction_re: float = float("nan")
    rank_reduced: bool = False
    Phi_pinv: np.ndarray = field(default=None, repr=False)

    def pinv_modes(self) -> np.ndarray:
        if self.Phi_pinv is not None:
            return self.Phi_pinv
        return numerics.pinv(self.Phi)


def fit_dmd(pair: SnapshotPair, spec: RankSpec, obs_map: ObservableMap,
            rcond: float = 1e-12) -> DmdModel:
    """Fit a DMD model to a snapshot pair.

    The reduced operator U^H Y2 V Sigma^-1 is eigendecomposed and the
    modes are lifted as Phi = U W. If the requested fixed rank exceeds
    the numerical rank of Y1 the rank is reduced and the model flagged.
    """
    U, s, V = np.linalg.svd(pair.Y1, full_matrices=False)
    V = V.conj().T
    r = select_rank(s, spec)
    numerical_rank = int(np.sum(s > rcond * s[0]))
    rank_reduced = False
    if r > numerical_rank:
        r = max(numerical_rank, 1)
        rank_reduced = True
    U, s, V = U[:, :r], s[:r], V[:, :r]

    Atilde = U.conj().T @ pair.Y2 @ V / s  # right-multiply by Sigma^-1
    lam, W = numerics.eig_dense(Atilde)
    Phi = U @ W
    Phi_pinv = numerics.pinv(Phi, rcond=rcond)
    b = Phi_pinv @ pair.Y1[:, 0]

    with np.errstate(divide="ignore"):
        omega = np.where(lam != 0, np.log(np.where(lam != 0, lam, 1.0)) / pair.dt, -np.inf)

    recon = Phi @ (lam[:, None] * (Phi_pinv @ pair.Y1))
    re = float(np.linalg.norm(recon - pair.Y2) / np.linalg.norm(pair.Y2))

    return DmdModel(Phi=Phi, Lambda=lam, b=b, omega=omega, dt=pair.dt,
                    t0=pair.t0, rank=r, observable=obs_map,
                    reconstruction_re=re, rank_reduced=rank_reduced,
                    Phi_pinv=Phi_pinv)


def predict_discrete(model: DmdModel, k: int) -> np.ndarray:
    """Observable-space prediction Phi @ diag(lambda^k) @ b at step k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    lam_k = model.Lambda**k  # 0**0 == 1, matching the amplitude definition
    return model.Phi @ (lam_k * model.b)


def predict_continuous(model: DmdModel, t: float) -> np.ndarray:
    """Observable-space prediction at continuous time t >= t0."""
    if t < model.t0:
        raise ValueError("t must be >= model.t0")
    tau = t - model.t0
    coeff = np.zeros_like(model.b)
    alive = model.Lambda != 0
    coeff[alive] = np.exp(model.omega[alive] * tau) * model.b[alive]
    if tau == 0.0:
        coeff[~alive] = model.b[~alive]
    return model.Phi @ coeff


def mode_diagnostics(model: DmdModel) -> tuple[float, float, float]:
    """Spectral norms of Phi and its pseudo-inverse, and max |lambda|."""
    sig = np.linalg.svd(model.Phi, compute_uv=False)
    norm_phi = float(sig[0])
    norm_phi_pinv = float(1.0 / sig[sig > 0][-1]) if np.any(sig > 0) else float("inf")
    return norm_phi, norm_phi_pinv, float(np.max(np.abs(model.Lambda)))
