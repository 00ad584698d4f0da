"""Total-energy Lyapunov function L = T - r·S and the induced force split.

Differentiating ż = (-S_x, S_y) in time gives z̈ = M ż with
M = [[-S_xx, -S_xy], [S_yx, S_yy]]. Writing Φ = -r·S,

    z̈ = -∇Φ - K_A ż - K_S ż,
    K_A = [[0, S_xy], [-S_yx, 0]]                  (antisymmetric, does no work)
    K_S = [[S_xx - rI, 0], [0, -(S_yy - rI)]]      (dissipative when positive definite)

and along trajectories dL/dt = -żᵀ K_S ż.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import State, Trajectory
from .payoff import PayoffFunction


@dataclass(frozen=True)
class EnergyReading:
    r: float
    kinetic: float
    potential: float
    total: float
    rate: float


@dataclass(frozen=True)
class ForceDecomposition:
    electric: np.ndarray
    magnetic: np.ndarray
    residual: np.ndarray
    acceleration: np.ndarray
    velocity: np.ndarray


def _velocity_parts(p: PayoffFunction, x, y):
    g = p.grad(x, y)
    return -g.x, g.y


def dissipation_rate(xdot: np.ndarray, ydot: np.ndarray, hess, r: float) -> float:
    """dL/dt = -ẋᵀ(S_xx - rI)ẋ + ẏᵀ(S_yy - rI)ẏ from the Hessian blocks."""
    return float(-(xdot @ hess.xx @ xdot - r * (xdot @ xdot)) + (ydot @ hess.yy @ ydot - r * (ydot @ ydot)))


def lyapunov(p: PayoffFunction, s: State, r: float) -> EnergyReading:
    xdot, ydot = _velocity_parts(p, s.x, s.y)
    kinetic = 0.5 * float(xdot @ xdot + ydot @ ydot)
    potential = -r * p.value(s.x, s.y)
    rate = dissipation_rate(xdot, ydot, p.hessian(s.x, s.y), r)
    return EnergyReading(float(r), kinetic, potential, kinetic + potential, rate)


def coupling_matrices(p: PayoffFunction, s: State, r: float) -> tuple[np.ndarray, np.ndarray]:
    """(K_A, K_S) at s."""
    H = p.hessian(s.x, s.y)
    m, n = p.m, p.n
    K_A = np.zeros((m + n, m + n))
    K_A[:m, m:] = H.xy
    K_A[m:, :m] = -H.xy.T
    K_S = np.zeros((m + n, m + n))
    K_S[:m, :m] = H.xx - r * np.eye(m)
    K_S[m:, m:] = -(H.yy - r * np.eye(n))
    return K_A, K_S


def force_decomposition(p: PayoffFunction, s: State, r: float) -> ForceDecomposition:
    g = p.grad(s.x, s.y)
    H = p.hessian(s.x, s.y)
    zdot = np.concatenate((-g.x, g.y))
    M = np.block([[-H.xx, -H.xy], [H.xy.T, H.yy]])
    K_A, K_S = coupling_matrices(p, s, r)
    return ForceDecomposition(
        electric=r * np.concatenate((g.x, g.y)),
        magnetic=-K_A @ zdot,
        residual=-K_S @ zdot,
        acceleration=M @ zdot,
        velocity=zdot,
    )


def energy_along(p: PayoffFunction, traj: Trajectory, r: float) -> tuple[np.ndarray, np.ndarray]:
    """L and analytic dL/dt at every recorded point."""
    L = traj.kinetic - r * traj.payoff
    rate = np.empty(len(traj))
    m = traj.m
    for i in range(len(traj)):
        x, y = traj.z[i, :m], traj.z[i, m:]
        v = traj.velocity[i]
        rate[i] = dissipation_rate(v[:m], v[m:], p.hessian(x, y), r)
    return L, rate


@dataclass(frozen=True)
class AuditReport:
    max_rate_discrepancy: float
    max_scaled_discrepancy: float
    monotone: bool
    worst_t: float
    max_increase: float
    max_drift: float
    interior_points: int

    def to_json(self) -> dict:
        return asdict(self)


def monotone_slack(values: np.ndarray, rel: float = 1e-7) -> tuple[bool, float]:
    """Whether a sampled series never rises by more than rel·(1 + |value|) between samples.

    Returns the verdict and the largest rise (in absolute units).
    """
    if len(values) < 2:
        return True, 0.0
    rise = np.diff(values)
    slack = rel * (1.0 + np.maximum(np.abs(values[:-1]), np.abs(values[1:])))
    return bool(np.all(rise <= slack)), float(max(0.0, rise.max()))


def energy_audit(p: PayoffFunction, traj: Trajectory, r: float, slack: float = 1e-7) -> AuditReport:
    """Compare analytic dL/dt with a central difference of recorded L.

    Only interior samples whose two neighbours are equally spaced are used, so
    a final off-grid sample (blowup) is ignored for the rate check.
    """
    if len(traj) < 3:
        raise ValueError("energy audit needs at least 3 recorded points")
    L, rate = energy_along(p, traj, r)
    t = traj.t
    dt_left = t[1:-1] - t[:-2]
    dt_right = t[2:] - t[1:-1]
    uniform = np.abs(dt_left - dt_right) <= 1e-9 * np.maximum(dt_left, dt_right)
    idx = np.nonzero(uniform)[0] + 1
    if len(idx) == 0:
        raise ValueError("no uniformly spaced interior points to audit")
    fd = (L[idx + 1] - L[idx - 1]) / (t[idx + 1] - t[idx - 1])
    disc = np.abs(fd - rate[idx])
    scaled = disc / (1.0 + np.abs(L[idx]))
    worst = int(np.argmax(scaled))
    ok, increase = monotone_slack(L, slack)
    return AuditReport(
        max_rate_discrepancy=float(disc.max()),
        max_scaled_discrepancy=float(scaled.max()),
        monotone=ok,
        worst_t=float(t[idx[worst]]),
        max_increase=increase,
        max_drift=float(np.max(np.abs(L - L[0]))),
        interior_points=int(len(idx)),
    )
