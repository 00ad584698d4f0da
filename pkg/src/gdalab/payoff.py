"""Payoff functions S(x, y) with exact first and second derivatives."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, NamedTuple, Sequence

import numpy as np

from . import expr
from .autodiff import Dual, Jet
from .expr import DomainError

__all__ = [
    "DomainError",
    "ExpressionPayoff",
    "Gradient",
    "HessianBlocks",
    "LienardPayoff",
    "PayoffFunction",
    "QuadraticPayoff",
    "finite_diff_oracle",
    "parse_expression",
    "payoff_from_spec",
]


class Gradient(NamedTuple):
    x: np.ndarray
    y: np.ndarray


class HessianBlocks(NamedTuple):
    xx: np.ndarray
    yy: np.ndarray
    xy: np.ndarray

    def full(self) -> np.ndarray:
        """Hessian of S with respect to z = (x, y)."""
        return np.block([[self.xx, self.xy], [self.xy.T, self.yy]])


class PayoffFunction(ABC):
    """Scalar payoff over descent variables x (length m) and ascent variables y (length n).

    Instances are immutable and safe to share between threads and processes.
    """

    m: int
    n: int

    def _check_dims(self, m: int, n: int) -> None:
        if m < 1 or n < 1:
            raise ValueError(f"payoff needs m >= 1 and n >= 1, got m={m}, n={n}")

    def _xy(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if x.shape != (self.m,) or y.shape != (self.n,):
            raise ValueError(f"expected x of length {self.m} and y of length {self.n}, got {x.shape} and {y.shape}")
        return x, y

    @abstractmethod
    def value(self, x, y) -> float: ...

    @abstractmethod
    def grad(self, x, y) -> Gradient: ...

    @abstractmethod
    def hessian(self, x, y) -> HessianBlocks: ...

    @abstractmethod
    def to_spec(self) -> dict[str, Any]:
        """Config-file representation (see ``payoff_from_spec``)."""

    def velocity(self, z: np.ndarray) -> np.ndarray:
        """Gradient descent-ascent field (-S_x, S_y) at the stacked state z."""
        g = self.grad(z[: self.m], z[self.m :])
        return np.concatenate((-g.x, g.y))

    def analytic_extremal_eigenvalues(self) -> tuple[float, float] | None:
        """(inf of smallest S_xx eigenvalue, sup of largest S_yy eigenvalue) if known exactly."""
        return None

    def expression_text(self) -> str | None:
        """Source text of an equivalent expression payoff, when one exists."""
        return None

    def variable_names(self) -> list[str]:
        return [f"x{i + 1}" for i in range(self.m)] + [f"y{j + 1}" for j in range(self.n)]


def _as_matrix(v, name: str) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise ValueError(f"{name} must be a scalar or a matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} must be finite")
    return a


class QuadraticPayoff(PayoffFunction):
    """S = xᵀAx/2 + xᵀBy + yᵀCy/2; scalars a, b, c give the m = n = 1 case."""

    def __init__(self, a, b, c):
        A = _as_matrix(a, "A")
        B = _as_matrix(b, "B")
        C = _as_matrix(c, "C")
        m, n = B.shape
        if A.shape != (m, m) or C.shape != (n, n):
            raise ValueError(f"inconsistent shapes A{A.shape}, B{B.shape}, C{C.shape}")
        for name, M in (("A", A), ("C", C)):
            if not np.allclose(M, M.T, rtol=0.0, atol=1e-12):
                raise ValueError(f"{name} must be symmetric")
        self._check_dims(m, n)
        self.m, self.n = m, n
        self.A, self.B, self.C = (A + A.T) / 2, B, (C + C.T) / 2
        for M in (self.A, self.B, self.C):
            M.setflags(write=False)
        self._J = np.block([[-self.A, -self.B], [self.B.T, self.C]])

    @property
    def is_scalar(self) -> bool:
        return self.m == 1 and self.n == 1

    def value(self, x, y) -> float:
        x, y = self._xy(x, y)
        return float(x @ self.A @ x / 2 + x @ self.B @ y + y @ self.C @ y / 2)

    def grad(self, x, y) -> Gradient:
        x, y = self._xy(x, y)
        return Gradient(self.A @ x + self.B @ y, self.B.T @ x + self.C @ y)

    def hessian(self, x, y) -> HessianBlocks:
        self._xy(x, y)
        return HessianBlocks(self.A.copy(), self.C.copy(), self.B.copy())

    def velocity(self, z: np.ndarray) -> np.ndarray:
        return self._J @ z

    def analytic_extremal_eigenvalues(self) -> tuple[float, float]:
        from .linalg import symmetric_eigenvalues

        return symmetric_eigenvalues(self.A)[0], symmetric_eigenvalues(self.C)[-1]

    def expression_text(self) -> str:
        terms = []
        xs = [f"x{i + 1}" for i in range(self.m)]
        ys = [f"y{j + 1}" for j in range(self.n)]
        for M, u, v, scale in ((self.A, xs, xs, 0.5), (self.B, xs, ys, 1.0), (self.C, ys, ys, 0.5)):
            for i, j in np.ndindex(*M.shape):
                if M[i, j] != 0.0:
                    terms.append(f"({float(M[i, j]) * scale!r})*{u[i]}*{v[j]}")
        return " + ".join(terms) if terms else "0*x1"

    def to_spec(self) -> dict[str, Any]:
        if self.is_scalar:
            return {"builtin": "quadratic", "a": float(self.A[0, 0]), "b": float(self.B[0, 0]), "c": float(self.C[0, 0])}
        return {"builtin": "quadratic", "A": self.A.tolist(), "B": self.B.tolist(), "C": self.C.tolist()}

    def __repr__(self) -> str:
        if self.is_scalar:
            return f"QuadraticPayoff(a={float(self.A[0, 0])!r}, b={float(self.B[0, 0])!r}, c={float(self.C[0, 0])!r})"
        return f"QuadraticPayoff(m={self.m}, n={self.n})"


class LienardPayoff(PayoffFunction):
    """S = F(x) - x·y + G(y) with F(x) = mu(x⁴/12 - x²/2) and G(y) = -alpha·y²/2.

    Gradient descent-ascent on S is the Liénard system
    ẋ = y - f(x), ẏ = -x + g(y) with f = F', g = G'; alpha = 0 is van der Pol.
    """

    m = 1
    n = 1

    def __init__(self, mu: float, alpha: float):
        mu, alpha = float(mu), float(alpha)
        if not (mu >= 0 and alpha >= 0) or not np.isfinite(mu + alpha):
            raise ValueError(f"mu and alpha must be finite and nonnegative, got mu={mu}, alpha={alpha}")
        self.mu = mu
        self.alpha = alpha

    def F(self, x: float) -> float:
        return self.mu * (x**4 / 12 - x**2 / 2)

    def f(self, x: float) -> float:
        return self.mu * (x**3 / 3 - x)

    def G(self, y: float) -> float:
        return -self.alpha * y**2 / 2

    def g(self, y: float) -> float:
        return -self.alpha * y

    def value(self, x, y) -> float:
        x, y = self._xy(x, y)
        return float(self.F(x[0]) - x[0] * y[0] + self.G(y[0]))

    def grad(self, x, y) -> Gradient:
        x, y = self._xy(x, y)
        return Gradient(np.array([self.f(x[0]) - y[0]]), np.array([-x[0] + self.g(y[0])]))

    def hessian(self, x, y) -> HessianBlocks:
        x, y = self._xy(x, y)
        return HessianBlocks(
            np.array([[self.mu * (x[0] ** 2 - 1)]]),
            np.array([[-self.alpha]]),
            np.array([[-1.0]]),
        )

    def velocity(self, z: np.ndarray) -> np.ndarray:
        x, y = z[0], z[1]
        return np.array([y - self.mu * (x**3 / 3 - x), -x - self.alpha * y])

    def analytic_extremal_eigenvalues(self) -> tuple[float, float]:
        # inf over x of mu(x² - 1) is -mu; G'' is the constant -alpha
        return -self.mu, -self.alpha

    def expression_text(self) -> str:
        return f"{self.mu!r}*(x1^4/12 - x1^2/2) - x1*y1 - {self.alpha!r}*y1^2/2"

    def to_spec(self) -> dict[str, Any]:
        return {"builtin": "lienard", "mu": self.mu, "alpha": self.alpha}

    def __repr__(self) -> str:
        return f"LienardPayoff(mu={self.mu!r}, alpha={self.alpha!r})"


class ExpressionPayoff(PayoffFunction):
    """Payoff parsed from text over x1..xm, y1..yn, differentiated in forward mode."""

    def __init__(self, source: str, m: int, n: int):
        self._check_dims(m, n)
        if not source or not source.strip():
            raise expr.ExpressionSyntaxError("empty expression", 0)
        self.m, self.n = int(m), int(n)
        self.source = source
        self.ast = expr.parse(source, self.variable_names())
        self._names = self.variable_names()

    def _env(self, x, y, kind=None) -> dict:
        x, y = self._xy(x, y)
        vals = np.concatenate((x, y))
        d = len(vals)
        if kind is None:
            return {k: float(v) for k, v in zip(self._names, vals)}
        return {k: kind.variable(float(v), i, d) for i, (k, v) in enumerate(zip(self._names, vals))}

    def value(self, x, y) -> float:
        return float(expr.evaluate(self.ast, self._env(x, y)))

    def grad(self, x, y) -> Gradient:
        out = expr.evaluate(self.ast, self._env(x, y, Dual))
        g = out.b if isinstance(out, Dual) else np.zeros(self.m + self.n)
        return Gradient(g[: self.m].copy(), g[self.m :].copy())

    def hessian(self, x, y) -> HessianBlocks:
        out = expr.evaluate(self.ast, self._env(x, y, Jet))
        d = self.m + self.n
        H = out.h if isinstance(out, Jet) else np.zeros((d, d))
        H = (H + H.T) / 2
        m = self.m
        return HessianBlocks(H[:m, :m].copy(), H[m:, m:].copy(), H[:m, m:].copy())

    def to_source(self) -> str:
        return expr.to_source(self.ast)

    def expression_text(self) -> str:
        return self.source

    def to_spec(self) -> dict[str, Any]:
        return {"expression": self.source, "m": self.m, "n": self.n}

    def __repr__(self) -> str:
        return f"ExpressionPayoff({self.source!r}, m={self.m}, n={self.n})"


def parse_expression(source: str, m: int, n: int) -> ExpressionPayoff:
    return ExpressionPayoff(source, m, n)


def payoff_from_spec(spec: dict[str, Any]) -> PayoffFunction:
    """Build a payoff from its config dict.

    Accepted forms: ``{"builtin": "quadratic", "a", "b", "c"}`` (or matrices
    ``"A", "B", "C"``), ``{"builtin": "lienard", "mu", "alpha"}`` and
    ``{"expression": text, "m", "n"}``.
    """
    if "builtin" in spec and "expression" in spec:
        raise ValueError("payoff must give exactly one of 'builtin' or 'expression'")
    if "expression" in spec:
        return ExpressionPayoff(spec["expression"], int(spec.get("m", 1)), int(spec.get("n", 1)))
    kind = spec.get("builtin")
    if kind == "quadratic":
        if "A" in spec:
            return QuadraticPayoff(spec["A"], spec["B"], spec["C"])
        return QuadraticPayoff(spec["a"], spec["b"], spec["c"])
    if kind == "lienard":
        return LienardPayoff(spec["mu"], spec["alpha"])
    raise ValueError(f"unknown payoff specification {spec!r}")


def finite_diff_oracle(p: PayoffFunction, x, y, h: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference gradient and Hessian of S over z = (x, y).

    Used only as an independent check on the exact derivatives.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    z0 = np.concatenate(p._xy(x, y))
    d = len(z0)

    def S(z: np.ndarray) -> float:
        return p.value(z[: p.m], z[p.m :])

    E = np.eye(d) * h
    grad = np.array([(S(z0 + E[i]) - S(z0 - E[i])) / (2 * h) for i in range(d)])
    hess = np.empty((d, d))
    s0 = S(z0)
    for i in range(d):
        hess[i, i] = (S(z0 + E[i]) - 2 * s0 + S(z0 - E[i])) / h**2
        for j in range(i + 1, d):
            v = (
                S(z0 + E[i] + E[j]) - S(z0 + E[i] - E[j]) - S(z0 - E[i] + E[j]) + S(z0 - E[i] - E[j])
            ) / (4 * h * h)
            hess[i, j] = hess[j, i] = v
    return grad, hess
