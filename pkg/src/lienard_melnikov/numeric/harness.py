"""Displacement sampling, convergence fits and limit-cycle detection.

This is the only place floating point touches a system: the exact
coefficients are converted once per ``epsilon`` and handed to the kernel.
A start point ``(sqrt(2c), 0)`` is followed for one clockwise turn and the
displacement is reported in the energy coordinate, ``x1**2/2 - c``.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from ..forms import SystemSpec, build_forms
from ..reduction import CyclePoly, cycle_integral
from . import KERNEL_BACKEND, revolve

_STATUS = {1: "step budget exhausted", 2: "trajectory left the bounding box"}


class NoReturn(RuntimeError):
    """The orbit did not come back to the section within budget."""

    def __init__(self, c: float, epsilon: float, reason: str):
        super().__init__(f"no return at c={c:g}, eps={epsilon:g}: {reason}")
        self.c = c
        self.epsilon = epsilon
        self.reason = reason


class CalibrationError(RuntimeError):
    pass


class ConvergenceFailure(RuntimeError):
    def __init__(self, report: "ConvergenceReport"):
        super().__init__(f"deviation does not halve with epsilon: ratios {report.ratios}")
        self.report = report


@dataclass(frozen=True)
class NumericConfig:
    rtol: float = 1e-12
    atol: float = 1e-14
    max_steps: int = 200_000
    crossing_tol: float = 1e-10
    eps: tuple[float, ...] = (0.02, 0.01, 0.005)
    c_min: float = 0.5
    c_max: float = 3.0
    grid: int = 26
    box_factor: float = 10.0
    h0: float = 0.01
    workers: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "eps", tuple(float(e) for e in self.eps))
        if not (self.rtol > 0 and self.atol > 0 and self.crossing_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if any(not 0 < e <= 0.2 for e in self.eps):
            raise ValueError("epsilon values must lie in (0, 0.2]")
        if not 0 < self.c_min < self.c_max:
            raise ValueError("need 0 < c_min < c_max")
        if self.grid < 2:
            raise ValueError("grid needs at least two points")

    def c_grid(self) -> np.ndarray:
        return np.linspace(self.c_min, self.c_max, self.grid)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["eps"] = list(self.eps)
        return d


@dataclass(frozen=True)
class DisplacementSample:
    c: float
    epsilon: float
    L: float
    err_est: float = 0.0
    steps: int = 0


def _vector_field(spec: SystemSpec, epsilon: float) -> tuple[list[float], list[float]]:
    """Float coefficients of ``F(x) = sum eps^i F_i`` and ``G(x) = -x + sum eps^i g_i``."""
    e = Fraction(epsilon)
    F: dict[int, Fraction] = {}
    G: dict[int, Fraction] = {1: Fraction(-1)}
    for i, p in enumerate(spec.F, start=1):
        for d, a in enumerate(p.coeffs):
            F[d] = F.get(d, 0) + a * e**i
    for i, p in enumerate(spec.g, start=1):
        for d, a in enumerate(p.coeffs):
            G[d] = G.get(d, 0) + a * e**i
    dense = lambda m: [float(m.get(d, 0)) for d in range(max(m, default=0) + 1)]  # noqa: E731
    return dense(F), dense(G)


def _sample(F, G, c: float, epsilon: float, config: NumericConfig, box: float) -> DisplacementSample:
    if c <= 0:
        raise ValueError("c must be positive")
    x0 = math.sqrt(2 * c)
    x1, steps, err, status = revolve(F, G, x0, config.rtol, config.atol, config.max_steps, box, config.h0)
    if status:
        raise NoReturn(c, epsilon, _STATUS.get(status, f"status {status}"))
    # d(x^2/2) = x dx
    return DisplacementSample(c, epsilon, x1 * x1 / 2 - c, abs(x1) * err, steps)


def _box(config: NumericConfig, c: float) -> float:
    return config.box_factor * math.sqrt(2 * max(config.c_max, c))


def displacement(spec: SystemSpec, epsilon: float, c: float, config: NumericConfig | None = None) -> float:
    """First-return displacement ``x1**2/2 - c`` from ``(sqrt(2c), 0)``."""
    return displacement_sample(spec, epsilon, c, config).L


def displacement_sample(
    spec: SystemSpec, epsilon: float, c: float, config: NumericConfig | None = None
) -> DisplacementSample:
    config = config or NumericConfig()
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    F, G = _vector_field(spec, epsilon)
    return _sample(F, G, float(c), float(epsilon), config, _box(config, c))


def sample_grid(
    spec: SystemSpec, epsilon: float, cs: Iterable[float], config: NumericConfig | None = None
) -> list[DisplacementSample]:
    """Samples over ``cs`` in input order; the kernel releases the GIL."""
    config = config or NumericConfig()
    cs = [float(c) for c in cs]
    F, G = _vector_field(spec, epsilon)
    box = _box(config, max(cs, default=config.c_max))
    workers = config.workers or min(32, os.cpu_count() or 1)
    if workers == 1 or KERNEL_BACKEND == "python":
        return [_sample(F, G, c, epsilon, config, box) for c in cs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: _sample(F, G, c, epsilon, config, box), cs))


CALIBRATION_SPEC = SystemSpec.from_coeffs(F=[[0, 1]])


def calibrate_sign(config: NumericConfig | None = None, epsilon: float = 0.01, c: float = 1.0) -> int:
    """Global constant ``s`` with ``displacement ~ s * eps^k * I(c)``.

    Measured on ``F_1 = x`` where ``I(c) = -2 pi c``; the magnitude must agree
    to 20% or the harness refuses to calibrate.
    """
    I = cycle_integral(build_forms(CALIBRATION_SPEC)[0]).integral(c)
    measured = displacement(CALIBRATION_SPEC, epsilon, c, config)
    ratio = measured / (epsilon * I)
    if not 0.8 <= abs(ratio) <= 1.2:
        raise CalibrationError(f"calibration fixture off by factor {ratio:.3g}")
    return 1 if ratio > 0 else -1


@dataclass
class ConvergenceReport:
    k: int
    sign: int
    eps: list[float]
    deviations: list[float]
    ratios: list[float]
    passed: bool
    sign_consistent: bool
    samples: list[DisplacementSample] = field(default_factory=list, repr=False)
    backend: str = KERNEL_BACKEND

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "calibration_sign": self.sign,
            "eps": self.eps,
            "max_deviation": self.deviations,
            "ratios": self.ratios,
            "passed": self.passed,
            "sign_consistent": self.sign_consistent,
            "backend": self.backend,
        }


RATIO_WINDOW = (0.3, 0.7)


def estimate_melnikov(
    spec: SystemSpec,
    k: int,
    L: CyclePoly,
    config: NumericConfig | None = None,
    sign: int | None = None,
    strict: bool = False,
) -> ConvergenceReport:
    """Compare ``L(eps, c)/eps^k`` with ``sign * I(c)`` over the configured grid."""
    config = config or NumericConfig()
    if len(config.eps) < 3:
        raise ValueError("need at least three epsilon values")
    if sign is None:
        sign = calibrate_sign(config)
    cs = config.c_grid()
    predicted = np.array([sign * L.integral(c) for c in cs])
    deviations = []
    samples: list[DisplacementSample] = []
    scaled = None
    for e in config.eps:
        row = sample_grid(spec, e, cs, config)
        samples.extend(row)
        scaled = np.array([s.L for s in row]) / e**k
        deviations.append(float(np.max(np.abs(scaled - predicted))))
    ratios = [b / a if a else math.inf for a, b in zip(deviations, deviations[1:])]
    lo, hi = RATIO_WINDOW
    passed = all(lo <= r <= hi for r in ratios)
    # the sign must agree wherever the prediction clearly dominates the remainder
    clear = np.abs(predicted) > 10 * deviations[-1]
    sign_consistent = bool(np.all(np.sign(scaled[clear]) == np.sign(predicted[clear])))
    report = ConvergenceReport(k, sign, list(config.eps), deviations, ratios, passed, sign_consistent, samples)
    if strict and not passed:
        raise ConvergenceFailure(report)
    return report


def find_limit_cycles(
    spec: SystemSpec,
    epsilon: float,
    c_range: tuple[float, float] | None = None,
    config: NumericConfig | None = None,
) -> list[float]:
    """Zeros of the displacement on ``c_range``: grid scan plus Brent refinement."""
    config = config or NumericConfig()
    if epsilon == 0:
        return []
    lo, hi = c_range or (config.c_min, config.c_max)
    if not 0 < lo < hi:
        raise ValueError("c_range must be a positive interval")
    cs = np.linspace(lo, hi, config.grid)
    vals = [s.L for s in sample_grid(spec, epsilon, cs, config)]
    F, G = _vector_field(spec, epsilon)
    box = _box(config, hi)

    def d(c: float) -> float:
        return _sample(F, G, c, epsilon, config, box).L

    found = []
    for i, (a, b) in enumerate(zip(vals, vals[1:])):
        if a == 0.0:
            found.append(float(cs[i]))
        elif a * b < 0:
            found.append(float(brentq(d, cs[i], cs[i + 1], xtol=config.crossing_tol)))
    if vals[-1] == 0.0:
        found.append(float(cs[-1]))
    return found


def tolerance_check(
    spec: SystemSpec, epsilon: float, c: float, config: NumericConfig | None = None, factor: float = 16.0
) -> tuple[float, float, float]:
    """``(|d(tol) - d(tol/factor)|, error estimate at tol, d)`` for the integrator self-test."""
    config = config or NumericConfig()
    fine = NumericConfig(**{**config.to_dict(), "rtol": config.rtol / factor, "atol": config.atol / factor})
    coarse = displacement_sample(spec, epsilon, c, config)
    ref = displacement_sample(spec, epsilon, c, fine)
    return abs(coarse.L - ref.L), coarse.err_est, coarse.L


def write_csv(
    path: str | os.PathLike,
    samples: Sequence[DisplacementSample],
    predicted: Callable[[DisplacementSample], float],
) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["c", "epsilon", "L", "predicted", "residual"])
        for s in samples:
            p = predicted(s)
            w.writerow([repr(s.c), repr(s.epsilon), repr(s.L), repr(p), repr(s.L - p)])


def energy_drift(c: float, config: NumericConfig | None = None) -> float:
    """Relative change of ``H`` over one unperturbed revolution."""
    config = config or NumericConfig()
    x0 = math.sqrt(2 * c)
    x1, _, _, status = revolve([0.0], [0.0, -1.0], x0, config.rtol, config.atol, config.max_steps, 10 * x0, config.h0)
    if status:
        raise NoReturn(c, 0.0, _STATUS.get(status, f"status {status}"))
    return abs(x1 * x1 / 2 - c) / c
