"""Multiquadric h-spline interpolation on simplices with certified error bounds."""

__version__ = "0.1.0"

from mqbound.bounds import (BoundConstants, OldBoundConstants, choose_degree,
                            compare_bounds, ln_cl_upper, ln_new_bound, new_constants,
                            old_constants, rho_delta0, verify_factorial_lemma,
                            verify_moment_lemma)
from mqbound.interpolation import (HSpline, InterpolationProblem, evaluate, fit,
                                   native_seminorm)
from mqbound.kernel import KernelParams, cpd_order, evaluate_h
from mqbound.measure import NormingMeasure, norming_weights, total_variation
from mqbound.simplex import Simplex, barycentric, equally_spaced_points
from mqbound.special import SignedLog, gamma_signed, ln_binomial, ln_factorial
