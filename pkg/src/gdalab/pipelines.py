"""Per-start and per-cell jobs behind the command line.

Jobs take plain data (spec dicts, lists, dataclass configs) so they can be
shipped to worker processes, and return plain data.
"""

from __future__ import annotations

import itertools
import math
from typing import Optional

import numpy as np

from .certify import BoxDomain, Certificate, certify, verify_global_bounds
from .classify import ClassifierConfig, classify_trajectory
from .dynamics import IntegratorConfig, State, integrate, trajectory_csv
from .energy import energy_along, energy_audit
from .payoff import PayoffFunction, payoff_from_spec

SWEEP_FIELDS = {"quadratic": ("a", "b", "c"), "lienard": ("mu", "alpha")}


def resolve_r(r_override: Optional[float], cert: Optional[Certificate]) -> tuple[float, str]:
    """Explicit override, then the certified value, then 0."""
    if r_override is not None:
        return float(r_override), "override"
    if cert is not None and cert.r is not None:
        return float(cert.r), "certificate"
    return 0.0, "default"


def simulate_job(spec: dict, z0: list[float], icfg: IntegratorConfig, r: float) -> tuple[str, dict]:
    p = payoff_from_spec(spec)
    traj = integrate(p, State.from_z(np.asarray(z0, dtype=float), p.m), icfg)
    L, Ldot = energy_along(p, traj, r)
    audit: dict = {"r": r, "stop_reason": traj.stop_reason, "stop_detail": traj.stop_detail,
                   "points": len(traj), "steps": traj.steps, "rejected": traj.rejected}
    try:
        audit.update(energy_audit(p, traj, r).to_json())
    except ValueError as exc:
        audit["audit_skipped"] = str(exc)
    return trajectory_csv(traj, L, Ldot), audit


def classify_job(spec: dict, z0: list[float], icfg: IntegratorConfig, ccfg: ClassifierConfig) -> dict:
    p = payoff_from_spec(spec)
    traj = integrate(p, State.from_z(np.asarray(z0, dtype=float), p.m), icfg)
    out = {"start": list(map(float, z0))}
    out.update(classify_trajectory(p, traj, ccfg).to_json(ccfg))
    return out


def certify_job(spec: dict, box: BoxDomain, samples: int, seed: int) -> dict:
    p = payoff_from_spec(spec)
    cert = certify(p, box, samples, seed)
    lemmas = verify_global_bounds(p, pairs=1000, box=box, seed=seed, eigs=cert.eigs)
    out = cert.to_json()
    out["box"] = box.to_json()
    out["samples"] = samples
    out["seed"] = seed
    out["lemmas"] = lemmas.to_json()
    return out


def sweep_cells(spec: dict, parameters: dict[str, list[float]]) -> list[dict]:
    """Payoff specs for the cartesian product of the swept values, first parameter slowest."""
    kind = spec.get("builtin")
    allowed = SWEEP_FIELDS.get(kind, ())
    for name in parameters:
        if name not in allowed or name not in spec:
            raise ValueError(f"sweep.parameters.{name}: not a scalar parameter of this payoff "
                             f"(sweepable: {', '.join(allowed) or 'none'})")
    names = list(parameters)
    cells = []
    for combo in itertools.product(*(parameters[k] for k in names)):
        cell = dict(spec)
        cell.update(zip(names, map(float, combo)))
        cells.append(cell)
    return cells


def sweep_job(spec: dict, starts: list[list[float]], icfg: IntegratorConfig, ccfg: ClassifierConfig,
              box: Optional[list[list[float]]], samples: int, seed: int,
              r_override: Optional[float]) -> list[dict]:
    p = payoff_from_spec(spec)
    bx = BoxDomain(*box) if box is not None else None
    cert = certify(p, bx, samples, seed)
    r, _ = resolve_r(r_override, cert)
    rows = []
    for z0 in starts:
        traj = integrate(p, State.from_z(np.asarray(z0, dtype=float), p.m), icfg)
        verdict = classify_trajectory(p, traj, ccfg).verdict
        rows.append({"theorem1": cert.theorem1, "theorem2_case": cert.theorem2_case,
                     "corollary1": cert.corollary1, "verdict": verdict, "r": r})
    return rows


def payoff_dims(spec: dict) -> tuple[int, int]:
    p: PayoffFunction = payoff_from_spec(spec)
    return p.m, p.n


def fmt17(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float, np.floating)) and not isinstance(v, str):
        v = float(v)
        return format(v, ".17g") if math.isfinite(v) else str(v)
    return str(v)
