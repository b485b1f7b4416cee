"""Run configuration: JSON file -> validated :class:`RunConfig`."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import ConfigError, DomainError
from .fuzzy import FuzzyNumber, fuzzy_from_json
from .quadrature import QuadratureSpec
from .solver import PortfolioProblem
from .utility import UtilityFunction

TOL_ENV = "PORTKIT_QUAD_TOL"
BACKEND_CHOICES = ("choquet", "distributional", "both")
_TOP_KEYS = {"w0", "r", "risky", "utility", "sweep", "backend", "quadrature", "output"}
_QUAD_KEYS = {"abs_tol", "rel_tol", "max_subdivisions", "level_bisection_tol"}


@dataclass(frozen=True)
class RunConfig:
    w0: float
    r: float
    risky: FuzzyNumber
    utility: UtilityFunction | None = None
    ks: tuple[float, ...] = ()
    backend: str = "both"
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    csv_path: str | None = None
    json_path: str | None = None

    @property
    def problem(self) -> PortfolioProblem:
        return PortfolioProblem(self.w0, self.r, self.risky)

    def backends(self) -> tuple[str, ...]:
        return ("choquet", "distributional") if self.backend == "both" else (self.backend,)

    def require_utility(self) -> UtilityFunction:
        if self.utility is None:
            raise ConfigError("this command needs a 'utility' entry", "utility")
        return self.utility


def _number(obj: Mapping, key: str, where: str, default=None) -> float:
    if key not in obj:
        if default is None:
            raise ConfigError(f"missing required key {where}", where)
        return default
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise ConfigError(f"{where} must be a finite number, got {val!r}", where)
    return float(val)


def _risky(obj) -> FuzzyNumber:
    if not isinstance(obj, dict):
        raise ConfigError("risky must be a JSON object", "risky")
    kinds = [k for k in ("triangular", "breakpoints") if k in obj]
    if len(kinds) != 1 or len(obj) != 1:
        raise ConfigError("risky needs exactly one of 'triangular' or 'breakpoints'", "risky")
    try:
        return fuzzy_from_json(obj)
    except (DomainError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad risky asset: {exc}", f"risky.{kinds[0]}") from exc


def _ks(obj) -> tuple[float, ...]:
    if not isinstance(obj, dict) or "k" not in obj:
        raise ConfigError("sweep needs a 'k' list", "sweep.k")
    ks = obj["k"]
    if not isinstance(ks, list) or not ks:
        raise ConfigError("sweep.k must be a non-empty list", "sweep.k")
    out = []
    for i, k in enumerate(ks):
        if isinstance(k, bool) or not isinstance(k, (int, float)) or not (k > 0 and math.isfinite(k)):
            raise ConfigError(f"sweep.k[{i}] must be a positive number, got {k!r}", f"sweep.k[{i}]")
        out.append(float(k))
    return tuple(sorted(out))


def _quadrature(obj, env: Mapping[str, str]) -> QuadratureSpec:
    obj = obj or {}
    if not isinstance(obj, dict):
        raise ConfigError("quadrature must be a JSON object", "quadrature")
    unknown = set(obj) - _QUAD_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown quadrature setting {key!r}", f"quadrature.{key}")
    kw = {k: _number(obj, k, f"quadrature.{k}") for k in obj}
    if "max_subdivisions" in kw:
        kw["max_subdivisions"] = int(kw["max_subdivisions"])
    if TOL_ENV in env:
        try:
            tol = float(env[TOL_ENV])
        except ValueError:
            raise ConfigError(f"{TOL_ENV} must be a number, got {env[TOL_ENV]!r}", TOL_ENV) from None
        kw["abs_tol"] = kw["rel_tol"] = tol
    try:
        return QuadratureSpec(**kw)
    except DomainError as exc:
        raise ConfigError(str(exc), "quadrature") from exc


def parse_config(obj, env: Mapping[str, str] | None = None) -> RunConfig:
    env = os.environ if env is None else env
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object", "<root>")
    unknown = set(obj) - _TOP_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown config key {key!r}", key)
    w0 = _number(obj, "w0", "w0")
    r = _number(obj, "r", "r", default=0.0)
    if r <= -1:
        raise ConfigError("r must exceed -1", "r")
    if "risky" not in obj:
        raise ConfigError("missing required key risky", "risky")
    risky = _risky(obj["risky"])
    utility = UtilityFunction.from_config(obj["utility"]) if "utility" in obj else None
    ks = _ks(obj["sweep"]) if "sweep" in obj else ()
    backend = obj.get("backend", "both")
    if backend not in BACKEND_CHOICES:
        raise ConfigError(f"backend must be one of {BACKEND_CHOICES}, got {backend!r}", "backend")
    output = obj.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output must be a JSON object", "output")
    return RunConfig(
        w0=w0,
        r=r,
        risky=risky,
        utility=utility,
        ks=ks,
        backend=backend,
        quadrature=_quadrature(obj.get("quadrature"), env),
        csv_path=output.get("csv"),
        json_path=output.get("json"),
    )


def load_config(path: str | Path, env: Mapping[str, str] | None = None) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}", "--config") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", "<json>") from exc
    return parse_config(obj, env)
