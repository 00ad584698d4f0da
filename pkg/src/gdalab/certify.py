"""Certification of convergence and boundedness from extremal Hessian eigenvalues.

With lam_inf = inf λ_min(S_xx) and lam_sup = sup λ_max(S_yy):

* lam_sup < lam_inf: for lam_sup < r < lam_inf the energy L = T - r·S never
  increases, so bounded trajectories converge to steady states.
* lam_sup < 0 < lam_inf is the convex-concave regime (r = 0, kinetic energy).
* Boundedness of every trajectory additionally needs lam_inf > 0 with
  -V(y) = -min_x S radially unbounded (case 1), or lam_sup < 0 with
  U(x) = max_y S radially unbounded (case 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple, Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .dynamics import State, Trajectory
from .energy import monotone_slack
from .linalg import symmetric_eigenvalues
from .payoff import LienardPayoff, PayoffFunction, QuadraticPayoff

Case = Literal["theorem1", "theorem2_case1", "theorem2_case2"]


class PreconditionError(ValueError):
    pass


class InnerSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class BoxDomain:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("box bounds must be vectors of equal length")
        if not np.all(lo < hi):
            raise ValueError("box lower bound must be below upper bound in every coordinate")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def cube(cls, dim: int, half_width: float = 5.0) -> "BoxDomain":
        return cls(-half_width * np.ones(dim), half_width * np.ones(dim))

    @property
    def dim(self) -> int:
        return len(self.lower)

    def sample(self, count: int, seed: int = 0) -> np.ndarray:
        """Scrambled Halton points in the box, reproducible for a given seed."""
        pts = qmc.Halton(d=self.dim, scramble=True, seed=seed).random(count)
        return qmc.scale(pts, self.lower, self.upper)

    def clip(self, z: np.ndarray) -> np.ndarray:
        return np.clip(z, self.lower, self.upper)

    def to_json(self) -> dict:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}


def _default_box(p: PayoffFunction, box: Optional[BoxDomain]) -> BoxDomain:
    box = box or BoxDomain.cube(p.m + p.n)
    if box.dim != p.m + p.n:
        raise ValueError(f"box has dimension {box.dim}, payoff needs {p.m + p.n}")
    return box


@dataclass(frozen=True)
class ExtremalEigenvalues:
    lambda_inf: float
    lambda_sup: float
    provenance: Literal["analytic", "sampled"] = "analytic"
    box: Optional[BoxDomain] = None
    samples: int = 0

    @property
    def caveat(self) -> Optional[str]:
        if self.provenance == "analytic":
            return None
        return (
            f"heuristic certificate: eigenvalues sampled at {self.samples} points of the box "
            f"{self.box.lower.tolist()}..{self.box.upper.tolist()}; lambda_inf is an upper bound on the "
            "true infimum and lambda_sup a lower bound on the true supremum"
        )


def _lambda_min_xx(p: PayoffFunction, z: np.ndarray) -> float:
    return symmetric_eigenvalues(p.hessian(z[: p.m], z[p.m :]).xx)[0]


def _lambda_max_yy(p: PayoffFunction, z: np.ndarray) -> float:
    return symmetric_eigenvalues(p.hessian(z[: p.m], z[p.m :]).yy)[-1]


def _coordinate_descent(fun: Callable[[np.ndarray], float], z0: np.ndarray, f0: float, box: BoxDomain,
                        step: np.ndarray, iterations: int = 100) -> float:
    z, best, step = z0.copy(), f0, step.copy()
    for _ in range(iterations):
        improved = False
        for i in range(len(z)):
            for sign in (1.0, -1.0):
                trial = z.copy()
                trial[i] += sign * step[i]
                trial = box.clip(trial)
                v = fun(trial)
                if v < best:
                    z, best, improved = trial, v, True
        if not improved:
            step /= 2
    return best


def extremal_eigenvalues(p: PayoffFunction, box: Optional[BoxDomain] = None, samples: int = 1000,
                         seed: int = 0) -> ExtremalEigenvalues:
    """Exact values for builtins; otherwise a sampled estimate over ``box`` plus local refinement."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    exact = p.analytic_extremal_eigenvalues()
    if exact is not None:
        return ExtremalEigenvalues(float(exact[0]), float(exact[1]), "analytic")
    box = _default_box(p, box)
    pts = box.sample(samples, seed)
    lmin = np.array([_lambda_min_xx(p, z) for z in pts])
    lmax = np.array([_lambda_max_yy(p, z) for z in pts])
    step = 0.05 * (box.upper - box.lower)
    lam_inf = float(lmin.min())
    for k in np.argsort(lmin, kind="stable")[:10]:
        lam_inf = min(lam_inf, _coordinate_descent(lambda z: _lambda_min_xx(p, z), pts[k], lmin[k], box, step))
    lam_sup = float(lmax.max())
    for k in np.argsort(-lmax, kind="stable")[:10]:
        lam_sup = max(lam_sup, -_coordinate_descent(lambda z: -_lambda_max_yy(p, z), pts[k], -lmax[k], box, step))
    return ExtremalEigenvalues(lam_inf, lam_sup, "sampled", box, samples)


class RSelection(NamedTuple):
    r: float
    gamma: Optional[float]


def select_r(eigs: ExtremalEigenvalues, case: Case) -> RSelection:
    """Midpoint of the open interval of admissible energy parameters for ``case``."""
    li, ls = eigs.lambda_inf, eigs.lambda_sup
    if not ls < li:
        raise PreconditionError(f"need lambda_sup < lambda_inf, got {ls} >= {li}")
    if case == "theorem1":
        return RSelection((li + ls) / 2, None)
    if case == "theorem2_case1":
        if not li > 0:
            raise PreconditionError("case 1 needs lambda_inf > 0")
        r = (li + max(ls, 0.0)) / 2
        return RSelection(r, r / li)
    if case == "theorem2_case2":
        if not ls < 0:
            raise PreconditionError("case 2 needs lambda_sup < 0")
        # mirror of case 1 under x <-> y, S -> -S
        r = (ls + min(li, 0.0)) / 2
        return RSelection(r, r / ls)
    raise ValueError(f"unknown case {case!r}")


# --- inner optimisation ----------------------------------------------------


def _minimize(fun: Callable[[np.ndarray], float], grad: Callable[[np.ndarray], np.ndarray], z0: np.ndarray,
              tol: float = 1e-10, max_iter: int = 100_000) -> tuple[np.ndarray, float]:
    """Gradient descent with backtracking until |grad| < tol.

    A step is accepted on sufficient decrease, or, once the decrease is lost
    in rounding, when it still shrinks the gradient norm.
    """
    z = np.array(z0, dtype=float)
    f, g = fun(z), grad(z)
    t = 1.0
    for _ in range(max_iter):
        gn2 = float(g @ g)
        if math.sqrt(gn2) < tol:
            return z, f
        while True:
            zn = z - t * g
            fn = fun(zn)
            gn = grad(zn)
            noise = 1e-12 * (1 + abs(f))
            shrinks = fn <= f + noise and float(gn @ gn) < gn2
            if 1e-4 * t * gn2 > noise:
                if fn <= f - 1e-4 * t * gn2 or shrinks:
                    break
            elif shrinks:
                # the Armijo decrease is below rounding in f; only the gradient is informative
                break
            t *= 0.5
            if t < 1e-30:
                raise InnerSolverError(f"line search failed at |grad| = {math.sqrt(gn2):.3g}")
        z, f, g = zn, fn, gn
        t = min(2 * t, 1e6)
    raise InnerSolverError(f"no convergence in {max_iter} iterations (|grad| = {math.sqrt(float(g @ g)):.3g})")


def _known_eigs(p: PayoffFunction, eigs: Optional[ExtremalEigenvalues]) -> Optional[ExtremalEigenvalues]:
    if eigs is not None:
        return eigs
    exact = p.analytic_extremal_eigenvalues()
    return ExtremalEigenvalues(*exact) if exact is not None else None


def inner_min(p: PayoffFunction, y, eigs: Optional[ExtremalEigenvalues] = None, x0=None,
              tol: float = 1e-10) -> tuple[float, np.ndarray]:
    """V(y) = min_x S(x, y) and its minimiser; needs lambda_inf > 0."""
    e = _known_eigs(p, eigs)
    if e is not None and not e.lambda_inf > 0:
        raise PreconditionError(f"inner_min needs lambda_inf > 0, got {e.lambda_inf}")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    x0 = np.zeros(p.m) if x0 is None else np.asarray(x0, dtype=float)
    x, v = _minimize(lambda x: p.value(x, y), lambda x: p.grad(x, y).x, x0, tol)
    return float(v), x


def inner_max(p: PayoffFunction, x, eigs: Optional[ExtremalEigenvalues] = None, y0=None,
              tol: float = 1e-10) -> tuple[float, np.ndarray]:
    """U(x) = max_y S(x, y) and its maximiser; needs lambda_sup < 0."""
    e = _known_eigs(p, eigs)
    if e is not None and not e.lambda_sup < 0:
        raise PreconditionError(f"inner_max needs lambda_sup < 0, got {e.lambda_sup}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y0 = np.zeros(p.n) if y0 is None else np.asarray(y0, dtype=float)
    y, v = _minimize(lambda y: -p.value(x, y), lambda y: -p.grad(x, y).y, y0, tol)
    return float(-v), y


def closed_form_V(p: PayoffFunction) -> Optional[Callable[[np.ndarray], float]]:
    """Exact V(y) = min_x S for builtins where it exists."""
    if isinstance(p, QuadraticPayoff) and symmetric_eigenvalues(p.A)[0] > 0:
        schur = p.C - p.B.T @ np.linalg.solve(p.A, p.B)
        return lambda y: float(np.atleast_1d(y) @ schur @ np.atleast_1d(y) / 2)
    return None


def closed_form_U(p: PayoffFunction) -> Optional[Callable[[np.ndarray], float]]:
    """Exact U(x) = max_y S for builtins where it exists."""
    if isinstance(p, QuadraticPayoff) and symmetric_eigenvalues(p.C)[-1] < 0:
        schur = p.A - p.B @ np.linalg.solve(p.C, p.B.T)
        return lambda x: float(np.atleast_1d(x) @ schur @ np.atleast_1d(x) / 2)
    if isinstance(p, LienardPayoff) and p.alpha > 0:
        return lambda x: float(p.F(np.atleast_1d(x)[0]) + np.atleast_1d(x)[0] ** 2 / (2 * p.alpha))
    return None


# --- radial unboundedness --------------------------------------------------

CONSISTENT = "consistent with radially unbounded"
NOT_ESTABLISHED = "not established"


@dataclass(frozen=True)
class ProbeSummary:
    target: str
    verdict: str
    rays: int
    failing_ray: Optional[list[float]] = None
    note: str = ""

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT

    def to_json(self) -> dict:
        out = {"target": self.target, "verdict": self.verdict, "rays": self.rays}
        if self.failing_ray is not None:
            out["failing_ray"] = self.failing_ray
        if self.note:
            out["note"] = self.note
        return out


def probe_directions(dim: int, rays: int, seed: int = 0) -> np.ndarray:
    """± coordinate axes followed by seeded random unit vectors."""
    if rays < 2 * dim:
        raise ValueError(f"need at least {2 * dim} rays in dimension {dim}")
    eye = np.eye(dim)
    dirs = [v for i in range(dim) for v in (eye[i], -eye[i])]
    rng = np.random.default_rng(seed)
    while len(dirs) < rays:
        v = rng.standard_normal(dim)
        dirs.append(v / np.linalg.norm(v))
    return np.array(dirs)


def radial_probe(fn: Callable[[np.ndarray], float], dim: int, rays: Optional[int] = None,
                 radii: Sequence[float] = (1, 2, 4, 8, 16, 32, 64), target: str = "",
                 seed: int = 0) -> ProbeSummary:
    """Evaluate ``fn`` along rays at growing radii.

    Consistent iff on every ray the value at the largest radius exceeds the
    value at the previous radius and exceeds fn(0) + 1.
    """
    rays = rays if rays is not None else (2 * dim if dim == 1 else 4 * dim)
    radii = [float(r) for r in radii]
    if len(radii) < 2 or any(b <= a for a, b in zip(radii, radii[1:])) or radii[0] <= 0:
        raise ValueError("radii must be positive and strictly increasing, at least two of them")
    try:
        f0 = fn(np.zeros(dim))
        for d in probe_directions(dim, rays, seed):
            prev, last = fn(radii[-2] * d), fn(radii[-1] * d)
            if not (last > prev and last > f0 + 1):
                return ProbeSummary(target, NOT_ESTABLISHED, rays, d.tolist())
    except (InnerSolverError, ArithmeticError) as exc:
        return ProbeSummary(target, NOT_ESTABLISHED, rays, None, f"evaluation failed: {exc}")
    return ProbeSummary(target, CONSISTENT, rays)


# --- certificate -----------------------------------------------------------


@dataclass
class Certificate:
    eigs: ExtremalEigenvalues
    theorem1: bool
    corollary1: bool
    theorem2_case: Literal["case1", "case2", "none"]
    r: Optional[float]
    gamma: Optional[float]
    radial_probe: Optional[ProbeSummary]
    caveats: list[str] = field(default_factory=list)

    @property
    def bounded(self) -> bool:
        return self.theorem2_case != "none"

    def to_json(self) -> dict:
        probe = self.radial_probe.to_json() if self.radial_probe else {"target": None, "verdict": "not attempted", "rays": 0}
        return {
            "lambda_inf": self.eigs.lambda_inf,
            "lambda_sup": self.eigs.lambda_sup,
            "provenance": self.eigs.provenance,
            "theorem1": self.theorem1,
            "corollary1": self.corollary1,
            "theorem2_case": self.theorem2_case,
            "r": self.r,
            "gamma": self.gamma,
            "radial_probe": probe,
            "caveats": list(self.caveats),
        }


def _minus_V(p: PayoffFunction, eigs: ExtremalEigenvalues) -> tuple[Callable, bool]:
    V = closed_form_V(p)
    if V is not None:
        return (lambda y: -V(y)), True
    return (lambda y: -inner_min(p, y, eigs)[0]), False


def _U(p: PayoffFunction, eigs: ExtremalEigenvalues) -> tuple[Callable, bool]:
    U = closed_form_U(p)
    if U is not None:
        return U, True
    return (lambda x: inner_max(p, x, eigs)[0]), False


def certify(p: PayoffFunction, box: Optional[BoxDomain] = None, samples: int = 1000, seed: int = 0) -> Certificate:
    eigs = extremal_eigenvalues(p, box, samples, seed)
    li, ls = eigs.lambda_inf, eigs.lambda_sup
    theorem1 = ls < li
    corollary1 = ls < 0 < li
    caveats = []
    if eigs.caveat:
        caveats.append(eigs.caveat)

    case = "none"
    probe = None
    if theorem1 and li > 0:
        fn, exact = _minus_V(p, eigs)
        probe = radial_probe(fn, p.n, target="-V", seed=seed)
        if not exact:
            caveats.append("radial unboundedness of -V probed numerically, not proven")
        if probe.consistent:
            case = "case1"
    if case == "none" and theorem1 and ls < 0:
        fn, exact = _U(p, eigs)
        probe = radial_probe(fn, p.m, target="U", seed=seed)
        if not exact:
            caveats.append("radial unboundedness of U probed numerically, not proven")
        if probe.consistent:
            case = "case2"

    r = gamma = None
    if case == "case1":
        r, gamma = select_r(eigs, "theorem2_case1")
    elif case == "case2":
        r, gamma = select_r(eigs, "theorem2_case2")
        caveats.append("case 2 energy parameter mirrors the case 1 construction (x <-> y, S -> -S)")
    elif theorem1:
        r, gamma = select_r(eigs, "theorem1")
    if theorem1:
        caveats.append("convergence statements assume isolated steady states (not checked)")
    return Certificate(eigs, theorem1, corollary1, case, r, gamma, probe, caveats)


# --- lemma oracles ---------------------------------------------------------


@dataclass(frozen=True)
class InequalityCheck:
    checked: int
    violations: int
    worst_margin: float

    def to_json(self) -> dict:
        return {"checked": self.checked, "violations": self.violations, "worst_margin": self.worst_margin}


@dataclass
class LemmaReport:
    lambda_inf: float
    y: list[float]
    lemma1: InequalityCheck
    lemma2: Optional[InequalityCheck] = None
    lemma3: Optional[InequalityCheck] = None
    gradient_bound: Optional[InequalityCheck] = None
    skipped: str = ""

    @property
    def total_violations(self) -> int:
        checks = [self.lemma1, self.lemma2, self.lemma3, self.gradient_bound]
        return sum(c.violations for c in checks if c is not None)

    def to_json(self) -> dict:
        out = {"lambda_inf": self.lambda_inf, "y": self.y, "lemma1": self.lemma1.to_json()}
        for name in ("lemma2", "lemma3", "gradient_bound"):
            c = getattr(self, name)
            out[name] = c.to_json() if c is not None else None
        if self.skipped:
            out["skipped"] = self.skipped
        return out


def _check(margins: list[float], scales: list[float], slack: float) -> InequalityCheck:
    m = np.asarray(margins)
    s = np.asarray(scales)
    return InequalityCheck(len(m), int(np.sum(m < -slack * s)), float(m.min()) if len(m) else 0.0)


def verify_global_bounds(p: PayoffFunction, pairs: int = 1000, box: Optional[BoxDomain] = None, seed: int = 0,
                         eigs: Optional[ExtremalEigenvalues] = None, slack: float = 1e-9) -> LemmaReport:
    """Check the global quadratic, linear-gradient and gradient-magnitude bounds at random pairs.

    For x, a drawn from the box at one fixed y, with lam = lambda_inf:

    * S(x) >= S(a) + S_x(a)·(x - a) + lam |x - a|²/2            (always)
    * |S_x(x) - S_x(a)| >= lam |x - a|                          (lam > 0)
    * S(a) <= V(y) + |S_x(a)|² / (2 lam)                        (lam > 0)
    * S(x) <= V(y) + |S_x(x)|² / (2 lam)                        (lam > 0)
    """
    box = _default_box(p, box)
    eigs = eigs or extremal_eigenvalues(p, box, seed=seed)
    lam = eigs.lambda_inf
    rng = np.random.default_rng(seed)
    lo_x, hi_x = box.lower[: p.m], box.upper[: p.m]
    y = rng.uniform(box.lower[p.m :], box.upper[p.m :])
    xs = rng.uniform(lo_x, hi_x, size=(pairs, p.m))
    anchors = rng.uniform(lo_x, hi_x, size=(pairs, p.m))

    m1, s1, m2, s2, m3, s3, m4, s4 = ([] for _ in range(8))
    V = inner_min(p, y, eigs)[0] if lam > 0 else None
    for x, a in zip(xs, anchors):
        Sx, Sa = p.value(x, y), p.value(a, y)
        gx, ga = p.grad(x, y).x, p.grad(a, y).x
        d = x - a
        lin = float(ga @ d)
        quad = lam * float(d @ d) / 2
        m1.append(Sx - (Sa + lin + quad))
        s1.append(1 + abs(Sx) + abs(Sa) + abs(lin) + abs(quad))
        if lam > 0:
            lhs = float(np.linalg.norm(gx - ga))
            rhs = lam * float(np.linalg.norm(d))
            m2.append(lhs - rhs)
            s2.append(1 + lhs + rhs + float(np.linalg.norm(gx)) + float(np.linalg.norm(ga)))
            ba = float(ga @ ga) / (2 * lam)
            m3.append(V + ba - Sa)
            s3.append(1 + abs(V) + ba + abs(Sa))
            bx = float(gx @ gx) / (2 * lam)
            m4.append(V + bx - Sx)
            s4.append(1 + abs(V) + bx + abs(Sx))

    report = LemmaReport(lam, y.tolist(), _check(m1, s1, slack))
    if lam > 0:
        report.lemma2 = _check(m2, s2, slack)
        report.lemma3 = _check(m3, s3, slack)
        report.gradient_bound = _check(m4, s4, slack)
    else:
        report.skipped = "lambda_inf <= 0: only the quadratic lower bound applies"
    return report


# --- saddle points and minimax ---------------------------------------------


def find_saddle(p: PayoffFunction, eigs: Optional[ExtremalEigenvalues] = None, x0=None,
                tol: float = 1e-11) -> tuple[State, float]:
    """Saddle point of a strictly convex-concave payoff.

    Minimises U(x) = max_y S(x, y) by gradient descent, using the envelope
    gradient U_x = S_x(x, y*(x)), then takes y* = argmax_y S(x*, y).
    Returns the saddle and the residual |∇S| there.
    """
    e = _known_eigs(p, eigs)
    if e is None or not (e.lambda_sup < 0 < e.lambda_inf):
        raise PreconditionError("saddle search needs lambda_sup < 0 < lambda_inf")
    cache: dict = {"y": np.zeros(p.n)}

    def U(x):
        v, y = inner_max(p, x, e, y0=cache["y"], tol=tol / 10)
        cache["y"] = y
        return v

    def U_x(x):
        _, y = inner_max(p, x, e, y0=cache["y"], tol=tol / 10)
        cache["y"] = y
        return p.grad(x, y).x

    x, _ = _minimize(U, U_x, np.zeros(p.m) if x0 is None else np.asarray(x0, float), tol)
    _, y = inner_max(p, x, e, y0=cache["y"], tol=tol / 10)
    g = p.grad(x, y)
    return State(x, y), float(np.linalg.norm(np.concatenate((g.x, g.y))))


@dataclass(frozen=True)
class KoseUzawaReport:
    monotone: bool
    max_increase: float
    saddle_checks: int
    saddle_violations: int
    worst_saddle_margin: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def kose_uzawa_check(p: PayoffFunction, traj: Trajectory, saddle: State, eigs: Optional[ExtremalEigenvalues] = None,
                     box: Optional[BoxDomain] = None, checks: int = 100, seed: int = 0,
                     slack: float = 1e-7) -> KoseUzawaReport:
    """Distance-to-saddle monotonicity along ``traj`` plus saddle-inequality spot checks."""
    e = _known_eigs(p, eigs)
    if e is None or not (e.lambda_sup < 0 < e.lambda_inf):
        raise PreconditionError("Kose-Uzawa check needs lambda_sup < 0 < lambda_inf")
    box = _default_box(p, box)
    zs = saddle.z
    D = 0.5 * np.sum((traj.z - zs) ** 2, axis=1)
    ok, increase = monotone_slack(D, slack)

    rng = np.random.default_rng(seed)
    S_star = p.value(saddle.x, saddle.y)
    margins, scales = [], []
    for _ in range(checks):
        z = rng.uniform(box.lower, box.upper)
        x, y = z[: p.m], z[p.m :]
        left = p.value(saddle.x, y)
        right = p.value(x, saddle.y)
        margins += [S_star - left, right - S_star]
        scales += [1 + abs(S_star) + abs(left), 1 + abs(S_star) + abs(right)]
    c = _check(margins, scales, 1e-9)
    return KoseUzawaReport(ok, increase, c.checked, c.violations, c.worst_margin)


@dataclass(frozen=True)
class MinimaxCandidate:
    kind: Literal["maxmin", "minmax"]
    x: list[float]
    y: list[float]
    value: float
    residual: float
    stationary: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def minimax_candidates(p: PayoffFunction, cert: Certificate, box: Optional[BoxDomain] = None, starts: int = 8,
                       seed: int = 0) -> list[MinimaxCandidate]:
    """Optimise V (case 1) or U (case 2) from several starts; best objective first."""
    if cert.theorem2_case == "none":
        raise PreconditionError("minimax candidates need a Theorem 2 case")
    box = _default_box(p, box)
    eigs = cert.eigs
    case1 = cert.theorem2_case == "case1"
    lo, hi = (box.lower[p.m :], box.upper[p.m :]) if case1 else (box.lower[: p.m], box.upper[: p.m])
    dim = len(lo)
    inits = [np.zeros(dim)] + list(BoxDomain(lo, hi).sample(max(starts - 1, 1), seed))
    warm = {"w": None}

    def inner(v):
        if case1:
            val, w = inner_min(p, v, eigs, x0=warm["w"], tol=1e-12)
        else:
            val, w = inner_max(p, v, eigs, y0=warm["w"], tol=1e-12)
        warm["w"] = w
        return val, w

    if case1:
        obj = lambda y: -inner(y)[0]  # noqa: E731
        grd = lambda y: -p.grad(inner(y)[1], y).y  # noqa: E731
    else:
        obj = lambda x: inner(x)[0]  # noqa: E731
        grd = lambda x: p.grad(x, inner(x)[1]).x  # noqa: E731

    found: list[MinimaxCandidate] = []
    for v0 in inits:
        warm["w"] = None
        try:
            v, _ = _minimize(obj, grd, v0, tol=1e-10, max_iter=20_000)
        except InnerSolverError:
            continue
        val, w = inner(v)
        x, y = (w, v) if case1 else (v, w)
        g = p.grad(x, y)
        res = float(np.linalg.norm(np.concatenate((g.x, g.y))))
        cand = MinimaxCandidate("maxmin" if case1 else "minmax", x.tolist(), y.tolist(), float(val), res, res < 1e-8)
        if not any(np.linalg.norm(np.r_[c.x, c.y] - np.r_[cand.x, cand.y]) < 1e-6 for c in found):
            found.append(cand)
    found.sort(key=lambda c: (not c.stationary, -c.value if case1 else c.value, c.x, c.y))
    return found
