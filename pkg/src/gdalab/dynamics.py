"""Integration of gradient descent-ascent: ẋ = -S_x, ẏ = +S_y."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .expr import DomainError
from .payoff import PayoffFunction

StopReason = Literal["horizon", "blowup", "non_finite"]


class NonFiniteStateError(ValueError):
    pass


@dataclass(frozen=True)
class State:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise NonFiniteStateError(f"non-finite state x={x}, y={y}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def z(self) -> np.ndarray:
        return np.concatenate((self.x, self.y))

    @classmethod
    def from_z(cls, z, m: int) -> "State":
        z = np.asarray(z, dtype=float)
        return cls(z[:m], z[m:])


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    state: State
    velocity: np.ndarray
    payoff: float
    kinetic: float


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration settings.

    ``record_every`` is the spacing of the output time grid; ``None`` means
    ``t_max / 10_000``. Steps are shortened to land exactly on grid times, so
    recorded samples are uniformly spaced without interpolation.
    """

    method: Literal["adaptive_embedded", "fixed_rk4"] = "adaptive_embedded"
    step: float = 1e-2
    rel_tol: float = 1e-9
    abs_tol: float = 1e-9
    t_max: float = 100.0
    record_every: Optional[float] = None
    blowup_radius: float = 1e6

    def __post_init__(self):
        if self.method not in ("adaptive_embedded", "fixed_rk4"):
            raise ValueError(f"unknown integration method {self.method!r}")
        for name in ("step", "rel_tol", "abs_tol", "t_max", "blowup_radius"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if self.record_every is not None and not (self.record_every > 0 and math.isfinite(self.record_every)):
            raise ValueError(f"record_every must be positive, got {self.record_every!r}")

    @property
    def record_interval(self) -> float:
        return self.record_every if self.record_every is not None else self.t_max / 10_000


@dataclass
class Trajectory:
    """Recorded samples, stored column-wise; row i is one ``TrajectoryPoint``."""

    m: int
    n: int
    t: np.ndarray
    z: np.ndarray
    velocity: np.ndarray
    payoff: np.ndarray
    kinetic: np.ndarray
    stop_reason: StopReason = "horizon"
    stop_detail: str = ""
    steps: int = 0
    rejected: int = 0

    def __len__(self) -> int:
        return len(self.t)

    @property
    def x(self) -> np.ndarray:
        return self.z[:, : self.m]

    @property
    def y(self) -> np.ndarray:
        return self.z[:, self.m :]

    def point(self, i: int) -> TrajectoryPoint:
        return TrajectoryPoint(
            float(self.t[i]),
            State.from_z(self.z[i], self.m),
            self.velocity[i].copy(),
            float(self.payoff[i]),
            float(self.kinetic[i]),
        )

    @property
    def final_state(self) -> State:
        return State.from_z(self.z[-1], self.m)


def vector_field(p: PayoffFunction, s: State) -> np.ndarray:
    """(-S_x, S_y) at s."""
    return p.velocity(s.z)


def _rk4(f, z: np.ndarray, h: float) -> np.ndarray:
    k1 = f(z)
    k2 = f(z + 0.5 * h * k1)
    k3 = f(z + 0.5 * h * k2)
    k4 = f(z + h * k3)
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_fixed_rk4(p: PayoffFunction, s: State, h: float) -> State:
    """One classical Runge-Kutta step; raises ``NonFiniteStateError`` on overflow."""
    if not h > 0:
        raise ValueError("step must be positive")
    return State.from_z(_rk4(p.velocity, s.z, h), p.m)


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_DP_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_DP_E = _DP_B - _DP_B4


def _dopri_step(f, z: np.ndarray, k1: np.ndarray, h: float, K: np.ndarray):
    """Returns (z_new, f(z_new), error vector). ``K`` is a (7, d) scratch array."""
    K[0] = k1
    for i in range(1, 6):
        K[i] = f(z + h * (_DP_A[i] @ K[:i]))
    z_new = z + h * (_DP_A[6] @ K[:6])
    K[6] = f(z_new)
    return z_new, K[6].copy(), h * (_DP_E @ K)


class _Recorder:
    def __init__(self, p: PayoffFunction):
        self.p = p
        self.t, self.z, self.v, self.S = [], [], [], []

    def add(self, t: float, z: np.ndarray, v: np.ndarray) -> None:
        self.t.append(t)
        self.z.append(z.copy())
        self.v.append(v.copy())
        self.S.append(self.p.value(z[: self.p.m], z[self.p.m :]))

    def build(self, **kw) -> Trajectory:
        v = np.array(self.v)
        return Trajectory(
            self.p.m,
            self.p.n,
            np.array(self.t),
            np.array(self.z),
            v,
            np.array(self.S),
            0.5 * np.sum(v**2, axis=1),
            **kw,
        )


def integrate(p: PayoffFunction, s0: State, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate from s0 to ``cfg.t_max`` or until the state leaves the blowup radius.

    Never raises for numerical trouble: overflow, domain errors and step-size
    collapse end the run with ``stop_reason == "non_finite"``.
    """
    cfg = cfg or IntegratorConfig()
    f = p.velocity
    z = s0.z
    dt_out = cfg.record_interval
    rec = _Recorder(p)
    stop: StopReason = "horizon"
    detail = ""
    steps = rejected = 0

    try:
        k1 = f(z)
    except (DomainError, OverflowError) as exc:
        raise ValueError(f"payoff cannot be evaluated at the initial state: {exc}") from exc
    rec.add(0.0, z, k1)
    if np.linalg.norm(z) > cfg.blowup_radius:
        return rec.build(stop_reason="blowup", stop_detail=f"|z| > {cfg.blowup_radius:g} at t=0")

    t = 0.0
    k_out = 1
    h = cfg.step
    K = np.empty((7, len(z)))
    adaptive = cfg.method == "adaptive_embedded"
    try:
        while t < cfg.t_max:
            t_target = min(k_out * dt_out, cfg.t_max)
            remaining = t_target - t
            hit = h >= remaining * (1 - 1e-12)
            h_try = remaining if hit else h
            if adaptive:
                z_new, k_new, err_vec = _dopri_step(f, z, k1, h_try, K)
                scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(z), np.abs(z_new))
                w = err_vec / scale
                err = math.sqrt(float(w @ w) / len(w))
                if not math.isfinite(err) or err > 1.0:
                    rejected += 1
                    fac = 0.2 if not math.isfinite(err) else max(0.2, 0.9 * err**-0.2)
                    h = h_try * fac
                    if h < 1e-14 * max(1.0, t):
                        stop, detail = "non_finite", f"step size underflow at t={t:.17g}"
                        break
                    continue
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err**-0.2))
                h_next = h_try * fac
                if hit and h_try < h:
                    h_next = max(h_next, h)
                h = h_next
            else:
                z_new = _rk4(f, z, h_try)
                k_new = f(z_new) if np.all(np.isfinite(z_new)) else z_new
            steps += 1
            t = t_target if hit else t + h_try
            z, k1 = z_new, k_new
            if not (math.isfinite(float(z.sum())) and math.isfinite(float(k1.sum()))):
                stop, detail = "non_finite", f"non-finite state at t={t:.17g}"
                break
            if math.sqrt(float(z @ z)) > cfg.blowup_radius:
                rec.add(t, z, k1)
                stop, detail = "blowup", f"|z| > {cfg.blowup_radius:g} at t={t:.17g}"
                break
            if hit:
                rec.add(t, z, k1)
                k_out += 1
    except (DomainError, OverflowError, FloatingPointError) as exc:
        stop, detail = "non_finite", f"evaluation failed near t={t:.17g}: {exc}"

    return rec.build(stop_reason=stop, stop_detail=detail, steps=steps, rejected=rejected)


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def trajectory_csv(traj: Trajectory, L: np.ndarray | None = None, Ldot: np.ndarray | None = None) -> str:
    """CSV text with columns ``t, x1..xm, y1..yn, S, T, L, Ldot`` at 17 significant digits."""
    names = ["t"] + [f"x{i + 1}" for i in range(traj.m)] + [f"y{j + 1}" for j in range(traj.n)]
    names += ["S", "T", "L", "Ldot"]
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for i in range(len(traj)):
        row = [traj.t[i], *traj.z[i], traj.payoff[i], traj.kinetic[i]]
        cells = [_fmt(v) for v in row]
        cells.append(_fmt(L[i]) if L is not None else "")
        cells.append(_fmt(Ldot[i]) if Ldot is not None else "")
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()
