"""Comparison baselines: delay-embedded DMD and POD-RBF.

HODMD here is plain delay-stacked DMD: d consecutive snapshots per
column, fit with the standard machinery, predictions unstacked from
the leading block. POD-RBF projects snapshots on the leading left
singular vectors and interpolates the projection coefficients over
time with a Gaussian radial basis plus a constant term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dmd import (DmdModel, ObservableMap, RankSpec, SnapshotPair, fit_dmd,
                  predict_discrete)


@dataclass(frozen=True)
class HodmdConfig:
    d: int
    rank: RankSpec

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be >= 1")


def delay_stack(states: np.ndarray, d: int) -> np.ndarray:
    """Columns of d consecutive snapshots: shape (d*n, M-d+1)."""
    Y = np.asarray(states, dtype=complex)
    n, M = Y.shape
    if d >= M:
        raise ValueError(f"d={d} too large for {M} snapshots")
    return np.vstack([Y[:, j:M - d + 1 + j] for j in range(d)])


def fit_hodmd(states, cfg: HodmdConfig, dt: float, t0: float = 0.0) -> DmdModel:
    """DMD over the delay-stacked observable.

    ``states`` is (n, M+1) with columns ordered in time. The returned
    model lives in the stacked space; use :func:`predict_hodmd` to
    recover the leading (current-time) block.
    """
    Y = np.asarray(states, dtype=complex)
    if Y.shape[1] - cfg.d < 2:
        raise ValueError("not enough snapshots for the requested delay")
    stacked = delay_stack(Y, cfg.d)
    pair = SnapshotPair(Y1=stacked[:, :-1], Y2=stacked[:, 1:], dt=dt, t0=t0)
    obs = ObservableMap("identity", state_dim=stacked.shape[0])
    return fit_dmd(pair, cfg.rank, obs)


def predict_hodmd(model: DmdModel, state_dim: int, k: int) -> np.ndarray:
    """Leading block of the stacked prediction at step k.

    The stacked column at step k starts with the snapshot at step k, so
    the first ``state_dim`` entries are the current-time state.
    """
    return predict_discrete(model, k)[:state_dim]


@dataclass
class PodRbfModel:
    pod_basis: np.ndarray          # (n, r_pod), orthonormal columns
    weights: np.ndarray            # (M + 1, r_pod) kernel weights + constant row
    sample_times: np.ndarray       # (M,), strictly increasing
    shape: float                   # Gaussian kernel width
    singular_values: np.ndarray
    regularized: bool = False


def _gaussian(dist2, width):
    return np.exp(-dist2 / (2.0 * width**2))


def fit_pod_rbf(states, times, r_pod: int, shape: float = None,
                rcond: float = 1e-13) -> PodRbfModel:
    """POD projection plus Gaussian-RBF time interpolation.

    ``states`` is (n, M) with one column per sample time. The kernel
    width defaults to the median gap between consecutive sample times
    scaled by the typical sampling-cluster span, which keeps the
    interpolation matrix solvable while bridging the gaps between
    snapshot bursts.
    """
    Y = np.asarray(states, dtype=complex)
    times = np.asarray(times, dtype=float)
    M = Y.shape[1]
    if times.shape != (M,):
        raise ValueError("times must match the number of snapshot columns")
    if np.any(np.diff(times) <= 0):
        raise ValueError("sample times must be strictly increasing")
    if M < r_pod:
        raise ValueError("need at least r_pod snapshots")
    if r_pod > Y.shape[0]:
        raise ValueError("r_pod cannot exceed the state dimension")

    U, s, _ = np.linalg.svd(Y, full_matrices=False)
    basis = U[:, :r_pod]
    coeffs = basis.conj().T @ Y      # (r_pod, M)

    if shape is None:
        gaps = np.diff(times)
        shape = 10.0 * float(np.median(gaps))
    dist2 = (times[:, None] - times[None, :])**2
    K = _gaussian(dist2, shape)
    # Constant-term augmentation: [K 1; 1^T 0] for exact reproduction of
    # constants.
    A = np.zeros((M + 1, M + 1))
    A[:M, :M] = K
    A[:M, M] = 1.0
    A[M, :M] = 1.0
    B = np.zeros((M + 1, r_pod), dtype=complex)
    B[:M] = coeffs.T
    regularized = False
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > 1.0 / rcond:
        regularized = True
        weights, *_ = np.linalg.lstsq(A, B, rcond=rcond)
    else:
        weights = np.linalg.solve(A, B)
    return PodRbfModel(pod_basis=basis, weights=weights, sample_times=times,
                       shape=shape, singular_values=s,
                       regularized=regularized)


def predict_pod_rbf(model: PodRbfModel, t: float) -> np.ndarray:
    """State reconstruction basis @ interpolated coefficients at time t."""
    dist2 = (float(t) - model.sample_times)**2
    phi = np.concatenate([_gaussian(dist2, model.shape), [1.0]])
    coeff = phi @ model.weights
    return model.pod_basis @ coeff
