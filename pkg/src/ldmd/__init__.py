"""Localized dynamic mode decomposition toolkit.

Standard DMD plus time-domain segmentation (predefined, adaptive
residual-driven, and Taylor-remainder oracle), full-order solvers for
four benchmark PDEs, comparison baselines, and an experiment harness.
"""

from .baselines import (HodmdConfig, PodRbfModel, fit_hodmd, fit_pod_rbf,
                        predict_hodmd, predict_pod_rbf)
from .dmd import (DmdModel, ObservableMap, RankSpec, SnapshotPair,
                  apply_observable, build_snapshot_pair, fit_dmd,
                  invert_observable, mode_diagnostics, predict_continuous,
                  predict_discrete, select_rank)
from .fom import (FomProblem, IntegrationFailure, integrate, make_problem,
                  position_density)
from .harness import (ConfigError, ErrorReport, ExperimentConfig,
                      relative_error, run_experiment, sweep)
from .segmentation import (LdmdResult, ResidualConfig, StageRecord,
                           TaylorConfig, prediction_rate, residual_estimator,
                           run_aldmd, run_optldmd, run_pldmd,
                           taylor_remainder_burgers)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
