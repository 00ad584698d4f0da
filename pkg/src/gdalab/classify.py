"""Trajectory verdicts and steady-state search."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal, Optional

import numpy as np

from .certify import BoxDomain
from .dynamics import Trajectory
from .payoff import PayoffFunction

Verdict = Literal["Converged", "BoundedNonConvergent", "Diverged", "Undetermined"]


@dataclass(frozen=True)
class ClassifierConfig:
    """Thresholds; the recurrence distance is ``eps_ret`` times the post-transient diameter."""

    eps_ss: float = 1e-8
    window: int = 50
    eps_ret: float = 1e-4
    v_min: float = 1e-3
    transient_frac: float = 0.5

    def __post_init__(self):
        for name in ("eps_ss", "eps_ret", "v_min"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not 0 <= self.transient_frac < 1:
            raise ValueError("transient_frac must lie in [0, 1)")


@dataclass
class Classification:
    verdict: Verdict
    point: Optional[list[float]] = None
    period: Optional[float] = None
    evidence: dict = field(default_factory=dict)

    def to_json(self, cfg: Optional[ClassifierConfig] = None) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.point is not None:
            out["point"] = self.point
        if self.period is not None:
            out["period"] = self.period
        out["evidence"] = self.evidence
        if cfg is not None:
            out["config_echo"] = asdict(cfg)
        return out


def _hermite(za, zb, va, vb, dt, s):
    """Cubic Hermite interpolant on one recording interval at fractions ``s``."""
    s = s[:, None]
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    return h00 * za + h10 * dt * va + h01 * zb + h11 * dt * vb


def _closest_approach(traj: Trajectory, k: int, ref: np.ndarray) -> tuple[float, float]:
    """Minimum distance to ``ref`` and its time, over the intervals either side of sample k."""
    s = np.linspace(0.0, 1.0, 401)
    best = (math.inf, traj.t[k])
    for a in (k - 1, k):
        if a < 0 or a + 1 >= len(traj):
            continue
        dt = traj.t[a + 1] - traj.t[a]
        pts = _hermite(traj.z[a], traj.z[a + 1], traj.velocity[a], traj.velocity[a + 1], dt, s)
        d2 = np.sum((pts - ref) ** 2, axis=1)
        j = int(np.argmin(d2))
        sj = s[j]
        if 0 < j < len(s) - 1:
            # vertex of the parabola through the three samples around the minimum
            y0, y1, y2 = d2[j - 1], d2[j], d2[j + 1]
            denom = y0 - 2 * y1 + y2
            if denom > 0:
                sj = s[j] + 0.5 * (y0 - y2) / denom * (s[1] - s[0])
                p = _hermite(traj.z[a], traj.z[a + 1], traj.velocity[a], traj.velocity[a + 1], dt, np.array([sj]))
                d = float(np.linalg.norm(p[0] - ref))
                if d < best[0]:
                    best = (d, traj.t[a] + sj * dt)
                continue
        d = math.sqrt(float(d2[j]))
        if d < best[0]:
            best = (d, traj.t[a] + sj * dt)
    return best


def _find_recurrence(traj: Trajectory, cfg: ClassifierConfig) -> Optional[dict]:
    n = len(traj)
    i0 = int(cfg.transient_frac * n)
    if n - i0 < 8:
        return None
    tail = traj.z[i0:]
    diameter = float(np.linalg.norm(tail.max(axis=0) - tail.min(axis=0)))
    if diameter == 0.0:
        return None
    eps_ret = cfg.eps_ret * diameter
    escape = max(10 * eps_ret, 0.01 * diameter)
    speed = np.linalg.norm(traj.velocity, axis=1)

    best = None
    span = max(1, (n - i0) // 4)
    for ref in np.unique(np.linspace(i0, i0 + span, 5).astype(int)):
        d = np.linalg.norm(traj.z[ref + 1 :] - traj.z[ref], axis=1)
        away = np.nonzero(d > escape)[0]
        if len(away) == 0:
            continue
        for j in range(away[0] + 1, len(d) - 1):
            if not (d[j] <= d[j - 1] and d[j] <= d[j + 1]):
                continue
            k = ref + 1 + j
            dist, t2 = _closest_approach(traj, k, traj.z[ref])
            if dist >= eps_ret:
                continue
            mean_speed = float(np.mean(speed[ref : k + 1]))
            if mean_speed < cfg.v_min:
                break
            cand = {"t1": float(traj.t[ref]), "t2": float(t2), "distance": dist, "eps_ret": eps_ret,
                    "mean_speed": mean_speed}
            if best is None or dist < best["distance"]:
                best = cand
            break
    if best is not None:
        best["amplitude"] = ((tail.max(axis=0) - tail.min(axis=0)) / 2).tolist()
        best["center"] = ((tail.max(axis=0) + tail.min(axis=0)) / 2).tolist()
    return best


def classify_trajectory(p: PayoffFunction, traj: Trajectory, cfg: Optional[ClassifierConfig] = None) -> Classification:
    """Diverged > Converged > BoundedNonConvergent > Undetermined, first match wins."""
    cfg = cfg or ClassifierConfig()
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    if traj.stop_reason in ("blowup", "non_finite"):
        return Classification(
            "Diverged",
            evidence={
                "stop_reason": traj.stop_reason,
                "detail": traj.stop_detail,
                "time": float(traj.t[-1]),
                "radius": float(np.linalg.norm(traj.z[-1])),
                "note": "blowup radius is a proxy for unboundedness",
            },
        )

    speed = np.linalg.norm(traj.velocity, axis=1)
    if len(traj) >= cfg.window and np.all(speed[-cfg.window :] < cfg.eps_ss):
        g = p.velocity(traj.z[-1])
        return Classification(
            "Converged",
            point=traj.z[-1].tolist(),
            evidence={"final_gradient_norm": float(np.linalg.norm(g)), "window": cfg.window},
        )

    rec = _find_recurrence(traj, cfg)
    if rec is not None:
        return Classification("BoundedNonConvergent", period=rec["t2"] - rec["t1"], evidence=rec)

    return Classification(
        "Undetermined",
        evidence={
            "horizon": float(traj.t[-1]),
            "final_speed": float(speed[-1]),
            "max_window_speed": float(speed[-cfg.window :].max()),
            "note": "no steady-state window and no recurrence before the horizon",
        },
    )


@dataclass(frozen=True)
class SteadyState:
    point: list[float]
    residual: float


@dataclass
class SteadyStateSearch:
    states: list[SteadyState]
    starts: int
    dropped: int

    def to_json(self) -> dict:
        return {"states": [asdict(s) for s in self.states], "starts": self.starts, "dropped": self.dropped}


def _full_gradient(p: PayoffFunction, z: np.ndarray) -> np.ndarray:
    g = p.grad(z[: p.m], z[p.m :])
    return np.concatenate((g.x, g.y))


def _damped_root(p: PayoffFunction, z0: np.ndarray, max_iter: int = 200, tol: float = 1e-13) -> np.ndarray:
    """Levenberg-Marquardt on ½|∇S|² using the exact Hessian as Jacobian."""
    z = z0.copy()
    g = _full_gradient(p, z)
    lam = 1e-3
    d = len(z)
    for _ in range(max_iter):
        gn = float(np.linalg.norm(g))
        if gn < tol or not math.isfinite(gn):
            break
        H = p.hessian(z[: p.m], z[p.m :]).full()
        A = H.T @ H
        rhs = -H.T @ g
        while True:
            try:
                step = np.linalg.solve(A + lam * (np.diag(np.diag(A)) + np.eye(d) * 1e-12), rhs)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            zn = z + step
            try:
                gnew = _full_gradient(p, zn)
            except ArithmeticError:
                gnew = None
            if gnew is not None and np.linalg.norm(gnew) < gn:
                z, g = zn, gnew
                lam = max(lam / 3, 1e-12)
                break
            lam *= 4
            if lam > 1e12:
                return z
    return z


def find_steady_states(p: PayoffFunction, box: BoxDomain, starts: int = 64, seed: int = 0,
                       residual_tol: float = 1e-10, cluster_tol: float = 1e-6) -> SteadyStateSearch:
    """Roots of ∇S reached from low-discrepancy starts in ``box``, clustered.

    Starts that fail to converge, or converge outside the box, count as dropped.
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    if box.dim != p.m + p.n:
        raise ValueError("box dimension does not match the payoff")
    found: list[SteadyState] = []
    dropped = 0
    margin = 1e-9 * (1 + np.abs(box.upper - box.lower))
    for z0 in box.sample(starts, seed):
        try:
            z = _damped_root(p, z0)
            res = float(np.linalg.norm(_full_gradient(p, z)))
        except ArithmeticError:
            dropped += 1
            continue
        inside = np.all(z >= box.lower - margin) and np.all(z <= box.upper + margin)
        if not (res < residual_tol and inside):
            dropped += 1
            continue
        if not any(np.linalg.norm(np.asarray(s.point) - z) < cluster_tol for s in found):
            found.append(SteadyState(z.tolist(), res))
    found.sort(key=lambda s: s.point)
    return SteadyStateSearch(found, starts, dropped)
