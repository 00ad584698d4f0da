"""Run configuration file (JSON), validated with pydantic."""

from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .certify import BoxDomain
from .classify import ClassifierConfig
from .dynamics import IntegratorConfig, State
from .payoff import PayoffFunction, payoff_from_spec

SCHEMA_VERSION = 1


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class QuadraticSpec(_Strict):
    builtin: Literal["quadratic"]
    a: Optional[float] = None
    b: Optional[float] = None
    c: Optional[float] = None
    A: Optional[list[list[float]]] = None
    B: Optional[list[list[float]]] = None
    C: Optional[list[list[float]]] = None

    @model_validator(mode="after")
    def _one_form(self):
        scalars = [self.a, self.b, self.c]
        mats = [self.A, self.B, self.C]
        if all(v is not None for v in scalars) and all(v is None for v in mats):
            return self
        if all(v is not None for v in mats) and all(v is None for v in scalars):
            return self
        raise ValueError("give either scalars a, b, c or matrices A, B, C")


class LienardSpec(_Strict):
    builtin: Literal["lienard"]
    mu: float = Field(ge=0)
    alpha: float = Field(ge=0)


class ExpressionSpec(_Strict):
    expression: str = Field(min_length=1)
    m: int = Field(default=1, ge=1)
    n: int = Field(default=1, ge=1)


PayoffSpec = Union[QuadraticSpec, LienardSpec, ExpressionSpec]


class IntegratorModel(_Strict):
    method: Literal["adaptive_embedded", "fixed_rk4"] = "adaptive_embedded"
    step: float = Field(default=1e-2, gt=0)
    rel_tol: float = Field(default=1e-9, gt=0)
    abs_tol: float = Field(default=1e-9, gt=0)
    t_max: float = Field(default=100.0, gt=0)
    record_every: Optional[float] = Field(default=None, gt=0)
    blowup_radius: float = Field(default=1e6, gt=0)

    def build(self) -> IntegratorConfig:
        return IntegratorConfig(**self.model_dump())


class ClassifierModel(_Strict):
    eps_ss: float = Field(default=1e-8, gt=0)
    window: int = Field(default=50, ge=1)
    eps_ret: float = Field(default=1e-4, gt=0)
    v_min: float = Field(default=1e-3, gt=0)
    transient_frac: float = Field(default=0.5, ge=0, lt=1)

    def build(self) -> ClassifierConfig:
        return ClassifierConfig(**self.model_dump())


class BoxModel(_Strict):
    lower: list[float]
    upper: list[float]


class CertifyModel(_Strict):
    box: Optional[BoxModel] = None
    samples: int = Field(default=1000, ge=1)


class SweepModel(_Strict):
    parameters: dict[str, list[float]] = Field(default_factory=dict)
    parameter: Optional[str] = None
    values: Optional[list[float]] = None
    starts: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _normalise(self):
        if self.parameter is not None or self.values is not None:
            if self.parameter is None or self.values is None:
                raise ValueError("'parameter' and 'values' go together")
            if self.parameter in self.parameters:
                raise ValueError(f"parameter {self.parameter!r} given twice")
            self.parameters = {self.parameter: self.values, **self.parameters}
            self.parameter = self.values = None
        if not self.parameters:
            raise ValueError("sweep needs at least one parameter")
        for name, vals in self.parameters.items():
            if not vals:
                raise ValueError(f"empty value list for {name!r}")
            if not all(math.isfinite(v) for v in vals):
                raise ValueError(f"non-finite value for {name!r}")
        return self


class StartModel(_Strict):
    x: list[float]
    y: list[float]


class RunConfig(_Strict):
    schema_version: Literal[1] = SCHEMA_VERSION
    payoff: PayoffSpec
    initial: list[Union[list[float], StartModel]] = Field(default_factory=list)
    integrator: IntegratorModel = Field(default_factory=IntegratorModel)
    classifier: ClassifierModel = Field(default_factory=ClassifierModel)
    certify: CertifyModel = Field(default_factory=CertifyModel)
    r_override: Optional[float] = None
    seed: int = 0
    output_dir: str = "out"
    sweep: Optional[SweepModel] = None

    @field_validator("r_override")
    @classmethod
    def _finite_r(cls, v):
        if v is not None and not math.isfinite(v):
            raise ValueError("r_override must be finite")
        return v

    def payoff_spec(self) -> dict:
        return self.payoff.model_dump(exclude_none=True)

    def build_payoff(self) -> PayoffFunction:
        return payoff_from_spec(self.payoff_spec())

    def starts(self, p: PayoffFunction) -> list[State]:
        out = []
        for i, s in enumerate(self.initial):
            if isinstance(s, StartModel):
                x, y = s.x, s.y
            else:
                if len(s) != p.m + p.n:
                    raise ValueError(f"initial.{i}: expected {p.m + p.n} values, got {len(s)}")
                x, y = s[: p.m], s[p.m :]
            if len(x) != p.m or len(y) != p.n:
                raise ValueError(f"initial.{i}: expected x of length {p.m} and y of length {p.n}")
            if not np.all(np.isfinite(np.r_[x, y])):
                raise ValueError(f"initial.{i}: values must be finite")
            out.append(State(x, y))
        return out

    def box(self, p: PayoffFunction) -> BoxDomain:
        if self.certify.box is None:
            return BoxDomain.cube(p.m + p.n)
        box = BoxDomain(self.certify.box.lower, self.certify.box.upper)
        if box.dim != p.m + p.n:
            raise ValueError(f"certify.box: expected dimension {p.m + p.n}, got {box.dim}")
        return box


def load_config(path: str | os.PathLike) -> RunConfig:
    """Read and validate a config; ``GDA_SEED`` in the environment overrides ``seed``."""
    data = json.loads(Path(path).read_text())
    cfg = RunConfig.model_validate(data)
    env_seed = os.environ.get("GDA_SEED")
    if env_seed is not None and env_seed.strip():
        try:
            cfg.seed = int(env_seed)
        except ValueError:
            raise ValueError(f"GDA_SEED must be an integer, got {env_seed!r}") from None
    return cfg
