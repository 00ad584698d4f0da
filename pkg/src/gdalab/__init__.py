"""Gradient descent-ascent dynamics on smooth payoffs S(x, y)."""

from .certify import (BoxDomain, Certificate, ExtremalEigenvalues, certify, extremal_eigenvalues, find_saddle,
                      inner_max, inner_min, kose_uzawa_check, minimax_candidates, select_r, verify_global_bounds)
from .classify import Classification, ClassifierConfig, classify_trajectory, find_steady_states
from .dynamics import IntegratorConfig, State, Trajectory, integrate, step_fixed_rk4, vector_field
from .energy import AuditReport, coupling_matrices, energy_audit, force_decomposition, lyapunov
from .payoff import ExpressionPayoff, LienardPayoff, PayoffFunction, QuadraticPayoff, parse_expression, payoff_from_spec

__all__ = [
    "AuditReport", "BoxDomain", "Certificate", "Classification", "ClassifierConfig", "ExpressionPayoff",
    "ExtremalEigenvalues", "IntegratorConfig", "LienardPayoff", "PayoffFunction", "QuadraticPayoff", "State",
    "Trajectory", "certify", "classify_trajectory", "coupling_matrices", "energy_audit", "extremal_eigenvalues",
    "find_saddle", "find_steady_states", "force_decomposition", "inner_max", "inner_min", "integrate",
    "kose_uzawa_check", "lyapunov", "minimax_candidates", "parse_expression", "payoff_from_spec", "select_r",
    "step_fixed_rk4", "vector_field", "verify_global_bounds",
]
