"""Cournot duopoly with tax evasion: equilibria, gradient dynamics, delay-induced Hopf bifurcation."""

from .bifurcation import (Classification, HopfAnalysis, classify, critical_delay,
                          crossing_frequencies, omega_polynomial, transversality)
from .dynamics import (AdjustmentSpeeds, HistorySpec, Trajectory, Verdict, dde_rhs,
                       integrate_dde, integrate_ode, ode_rhs, oscillation_metrics)
from .errors import (DegenerateCrossingError, ParameterError, PriceSingularityError,
                     RootFindingError)
from .linear import (char_poly_no_delay, delay_split, eigenvalue_oracle, jacobian_coefficients,
                     jacobian_matrix, routh_hurwitz)
from .model import (MarketState, ModelParams, equilibrium, evaluate_primitives,
                    feasibility_check, foc_residual, profit, static_sweep)

__version__ = "0.1.0"
