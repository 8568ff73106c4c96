"""Photon statistics of a weakly driven three-mode Kerr/optomechanical
system: master-equation steady states, delayed correlations, and the
interference-optimum analytics, with a sweep CLI on top."""

__version__ = "0.1.0"

from .analytics import (AmplitudeState, OptimalPoint, amplitude_rhs,
                        amplitude_steady_state, determinant_condition,
                        g2_from_amplitudes, optimal_conditions,
                        optimal_from_determinant)
from .config import RunConfig, SweepAxis, load_config
from .dynamics import CorrelationSeries, evolve, g2_tau, propagate
from .errors import (AntibunchError, ConfigError, DegenerateParametersError,
                     DimensionError, IntegrationError, NoRealSolutionError,
                     SteadyStateError, TaskError, UndefinedCorrelationError)
from .fock import (ModeDims, QOperator, annihilator, creator, embed_mode,
                   identity, ladder, number)
from .liouville import (DensityMatrix, Liouvillian, build_liouvillian,
                        expectation, g2_zero, mode_populations, residual_norm,
                        steady_state)
from .model import (CollapseOp, StrongDriveWarning, SystemParams,
                    build_collapse_ops, build_effective_hamiltonian,
                    build_hamiltonian)
from .tasks import SweepResult, run_task, write_csv, write_metadata

__all__ = [name for name in dir() if not name.startswith("_")]
