"""Forward-mode automatic differentiation.

``Dual`` carries a value and a gradient vector (first order). ``Jet`` also
carries the Hessian, propagated by the second-order chain rule, so a single
pass over an expression yields value, gradient and Hessian together.
"""

from __future__ import annotations

import numpy as np


class Dual:
    """Value plus tangent vector: ``a + b·ε`` with ``b`` an ndarray."""

    __slots__ = ("a", "b")

    def __init__(self, a: float, b: np.ndarray):
        self.a = a
        self.b = b

    @classmethod
    def constant(cls, value: float, dim: int) -> "Dual":
        return cls(value, np.zeros(dim))

    @classmethod
    def variable(cls, value: float, index: int, dim: int) -> "Dual":
        b = np.zeros(dim)
        b[index] = 1.0
        return cls(value, b)

    def __add__(self, other):
        if not isinstance(other, Dual):
            return Dual(self.a + float(other), self.b)
        return Dual(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Dual):
            return Dual(self.a - float(other), self.b)
        return Dual(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return Dual(float(other) - self.a, -self.b)

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __mul__(self, other):
        if not isinstance(other, Dual):
            k = float(other)
            return Dual(self.a * k, k * self.b)
        return Dual(self.a * other.a, self.a * other.b + other.a * self.b)

    __rmul__ = __mul__

    def chain(self, f0: float, f1: float, f2: float = 0.0) -> "Dual":
        """Apply a scalar function given its value and first derivative at ``a``."""
        return Dual(f0, f1 * self.b)

    def __repr__(self) -> str:
        return f"Dual({self.a!r}, {self.b!r})"


class Jet:
    """Second-order jet: value, gradient and (symmetric) Hessian."""

    __slots__ = ("a", "g", "h")

    def __init__(self, a: float, g: np.ndarray, h: np.ndarray):
        self.a = a
        self.g = g
        self.h = h

    @classmethod
    def constant(cls, value: float, dim: int) -> "Jet":
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    @classmethod
    def variable(cls, value: float, index: int, dim: int) -> "Jet":
        g = np.zeros(dim)
        g[index] = 1.0
        return cls(value, g, np.zeros((dim, dim)))

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.a + float(other), self.g, self.h)
        return Jet(self.a + other.a, self.g + other.g, self.h + other.h)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.a - float(other), self.g, self.h)
        return Jet(self.a - other.a, self.g - other.g, self.h - other.h)

    def __rsub__(self, other):
        return Jet(float(other) - self.a, -self.g, -self.h)

    def __neg__(self):
        return Jet(-self.a, -self.g, -self.h)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            k = float(other)
            return Jet(self.a * k, k * self.g, k * self.h)
        o = other
        cross = np.outer(self.g, o.g)
        return Jet(
            self.a * o.a,
            self.a * o.g + o.a * self.g,
            self.a * o.h + o.a * self.h + cross + cross.T,
        )

    __rmul__ = __mul__

    def chain(self, f0: float, f1: float, f2: float) -> "Jet":
        """Compose with a scalar function whose value and two derivatives are given."""
        return Jet(f0, f1 * self.g, f1 * self.h + f2 * np.outer(self.g, self.g))

    def __repr__(self) -> str:
        return f"Jet({self.a!r}, {self.g!r}, {self.h!r})"
