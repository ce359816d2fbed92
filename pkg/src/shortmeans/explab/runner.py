"""Grid experiments over ``N`` with ``H = round(N^theta)`` and exponent fitting."""

from __future__ import annotations

import csv
import io
import json
import math
import re
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ..arith_tables import SieveSpec, build_table, log_polynomial
from ..divisor_mean import default_stride, proximity
from ..errors import DomainError, InsufficientDataError, RangeError, UnsupportedParameterError
from ..integrals import MeanMode, modified_selberg, selberg, symmetry, weighted_selberg
from ..sporadic import dispersion, dyadic_ones
from ..weights import TruncatedWeight, WeightSpec

STATISTICS = ("symmetry", "selberg", "modified", "weighted", "dispersion", "proximity")
PRNG_ALGORITHM = "numpy.random.PCG64/Generator.integers/v1"


def derive_H(N: int, theta: float) -> int:
    return max(1, round(N ** theta))


@dataclass(frozen=True)
class ExperimentConfig:
    statistic: str
    N_grid: tuple
    theta: float
    f: str = "d2"
    weight: str = "sgn"
    mean: str = "zero"
    seed: int = 0
    stride: object = "auto"
    q_exponent: float = 0.5
    g_range: tuple = (-3, 3)
    timing: bool = False
    gates: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.statistic not in STATISTICS:
            raise DomainError(f"statistic must be one of {STATISTICS}, got {self.statistic!r}")
        grid = tuple(int(n) for n in self.N_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("N_grid must be strictly increasing")
        object.__setattr__(self, "N_grid", grid)
        if not 0 < self.theta < 1:
            raise DomainError("theta must lie in (0, 1)")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "g_range", tuple(int(v) for v in self.g_range))
        WeightSpec.parse(self.weight)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["N_grid"] = list(self.N_grid)
        d["g_range"] = list(self.g_range)
        return d


@dataclass(frozen=True)
class ExperimentRecord:
    N: int
    H: int
    value: float | None
    runtime_ms: float = 0.0
    error: str | None = None


@dataclass(frozen=True)
class ExponentFit:
    beta: float
    intercept: float
    r2: float

    @property
    def gain(self) -> float:
        return 2.0 - self.beta

    def as_dict(self) -> dict:
        return {"beta": self.beta, "intercept": self.intercept, "r2": self.r2, "gain": self.gain}


def random_sieve_spec(seed: int, Q: int, value_range=(-3, 3)) -> SieveSpec:
    """Integer ``g`` on ``[1, Q]`` drawn from PCG64 seeded with ``seed``.

    The algorithm identifier is :data:`PRNG_ALGORITHM`.
    """
    if Q < 1:
        raise DomainError("Q must be >= 1")
    lo, hi = (int(v) for v in value_range)
    if hi < lo:
        raise DomainError("empty value range")
    rng = np.random.Generator(np.random.PCG64(seed))
    vals = rng.integers(lo, hi + 1, size=Q)
    return SieveSpec({q: int(v) for q, v in zip(range(1, Q + 1), vals.tolist())}, Q)


def parse_mean(tag: str, f_kind, sieve: SieveSpec | None = None) -> MeanMode:
    """``zero``, ``analytic``, ``arithmetic`` or ``constant(c)``."""
    tag = tag.strip()
    if tag == "zero":
        return MeanMode.zero()
    m = re.fullmatch(r"constant\((.+)\)", tag)
    if m:
        raw = m.group(1).strip()
        try:
            c = Fraction(raw)
        except ValueError:
            c = float(raw)
        return MeanMode.constant(c)
    if tag == "analytic":
        return MeanMode.analytic(log_polynomial(sieve if sieve is not None else f_kind))
    if tag == "arithmetic":
        if sieve is None:
            raise UnsupportedParameterError("the arithmetic mean needs a sieve function f")
        return MeanMode.arithmetic(sieve)
    raise UnsupportedParameterError(f"unknown mean mode {tag!r}")


def _resolve_stride(stride, N: int) -> int:
    if stride in (None, "auto"):
        return default_stride(N)
    return int(stride)


def _point(cfg: ExperimentConfig, N: int, H: int) -> float:
    if cfg.statistic == "proximity":
        return proximity(3, N, H, _resolve_stride(cfg.stride, N)).stat
    if cfg.statistic == "dispersion":
        Q = max(1, round(N ** cfg.q_exponent))
        return dispersion(dyadic_ones(Q), TruncatedWeight(cfg.weight, H), N)
    lo, hi = N - H, 2 * N + H
    if lo < 1:
        raise RangeError(f"window [{lo}, {hi}] leaves the positive integers")
    sieve = None
    if cfg.f == "random":
        sieve = random_sieve_spec(cfg.seed, max(1, round(N ** cfg.q_exponent)), cfg.g_range)
        f = sieve.table(lo, hi)
    else:
        f = build_table(cfg.f, lo, hi)
    if cfg.statistic == "symmetry":
        return symmetry(f, H, N).value
    mode = parse_mean(cfg.mean, cfg.f, sieve)
    if cfg.statistic == "selberg":
        return selberg(f, H, N, mode).value
    if cfg.statistic == "modified":
        return modified_selberg(f, H, N, mode).value
    return weighted_selberg(f, TruncatedWeight(cfg.weight, H), N, mode).value


def run_grid(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """One record per grid point.  Range and domain errors are kept on the record."""
    out = []
    for N in cfg.N_grid:
        H = derive_H(N, cfg.theta)
        t0 = time.perf_counter()
        try:
            value, err = float(_point(cfg, N, H)), None
        except (RangeError, DomainError) as exc:
            value, err = None, f"{type(exc).__name__}: {exc}"
        ms = (time.perf_counter() - t0) * 1e3 if cfg.timing else 0.0
        out.append(ExperimentRecord(N, H, value, round(ms, 3), err))
    return out


def fit_exponent(records) -> ExponentFit:
    """Least-squares slope of ``log(value/N)`` against ``log H``."""
    pts = [(r.H, r.N, r.value) for r in records if r.value is not None and r.value > 0]
    if len(pts) < 3:
        raise InsufficientDataError(f"need at least 3 positive records, got {len(pts)}")
    X = np.array([math.log(h) for h, _, _ in pts])
    Y = np.array([math.log(v / n) for _, n, v in pts])
    A = np.column_stack([X, np.ones_like(X)])
    (beta, intercept), *_ = np.linalg.lstsq(A, Y, rcond=None)
    resid = Y - (beta * X + intercept)
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return ExponentFit(float(beta), float(intercept), r2)


def theta_admissible(theta: float, vartheta: float, G: float) -> bool:
    """Whether ``(3 vartheta - 1)/((1 - G) vartheta + G + 1) < theta <= vartheta``."""
    return (3 * vartheta - 1) / ((1 - G) * vartheta + G + 1) < theta <= vartheta


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "H", "value", "runtime_ms"])
    for r in records:
        w.writerow([r.N, r.H, "" if r.value is None else repr(r.value), r.runtime_ms])
    return buf.getvalue()


def evaluate_gates(fit: ExponentFit | None, gates: dict) -> dict:
    """Check ``beta_max``, ``r2_min`` and ``gain_min`` gates; missing fit fails every gate."""
    out = {}
    for name, limit in sorted(gates.items()):
        if fit is None:
            out[name] = False
        elif name == "beta_max":
            out[name] = fit.beta <= limit
        elif name == "r2_min":
            out[name] = fit.r2 >= limit
        elif name == "gain_min":
            out[name] = fit.gain >= limit
        else:
            raise DomainError(f"unknown gate {name!r}")
    return out


def summarize(cfg: ExperimentConfig, records) -> dict:
    try:
        fit = fit_exponent(records)
        summary = fit.as_dict()
    except InsufficientDataError:
        fit = None
        summary = {"beta": None, "intercept": None, "r2": None, "gain": None}
    summary["gates"] = evaluate_gates(fit, cfg.gates)
    summary["passed"] = all(summary["gates"].values())
    summary["errors"] = [r.error for r in records if r.error]
    if cfg.f == "random":
        summary["prng"] = PRNG_ALGORITHM
    return summary


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
