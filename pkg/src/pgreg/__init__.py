"""Periodic Gaussian kernel regularization: sequence-model theory and regression."""

from .asymptotics import (asymptotic_minimax_Hinf, efficiency_Hm, gauss_risk_Hm, minimax_Hm, pinsker_solve,
                          risk_analytic)
from .kernels import KernelSpec, fourier_kernel, gauss_density, gram, spline_kernel, wrapped_gauss
from .regression import (RegressionData, SpectralSmoother, average_squared_error, cp_score, fit_penalized,
                         fit_unpenalized_constant, predict, tune_fit)
from .sequence import Ellipsoid, Penalty, SequenceObservations, analyze, sample_observations, synthesize
from .shrinkage import (TuningGrid, exact_risk, shrink_weights, tune, unbiased_risk_estimate, variance_sum,
                        asymptotic_variance)

__version__ = "0.1.0"
