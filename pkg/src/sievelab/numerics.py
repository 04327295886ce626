"""Deterministic real-analysis engine: quadrature, minimization, derivatives.

Quadrature is adaptive Gauss quadrature with interval bisection: each panel
is estimated with an embedded 7/15-point Gauss-Legendre pair, the difference
serving as the local error estimate.  Nodes and weights are generated once at
import from numpy's Legendre machinery, so every run evaluates the same
abscissae in the same order and results are bit-identical across runs.

Nested integrals are evaluated by passing another `integrate` call as the
integrand; callers tighten the inner tolerance (see
``QuadratureSpec.tightened``) so that error does not accumulate across
nesting levels.

All functions here are pure and hold no mutable state.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy.polynomial.legendre as _leg

from .errors import ConvergenceError, DomainError, EvaluationError

# Euler-Mascheroni constant, full double precision.
EULER_GAMMA = 0.5772156649015329

_NODES7, _WEIGHTS7 = (a.tolist() for a in _leg.leggauss(7))
_NODES15, _WEIGHTS15 = (a.tolist() for a in _leg.leggauss(15))


@dataclass(frozen=True)
class QuadratureSpec:
    """Error control for `integrate`."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")

    def tightened(self, factor: float = 10.0) -> "QuadratureSpec":
        """Spec with tolerances divided by `factor`, for nested integrands."""
        return QuadratureSpec(self.abs_tol / factor, self.rel_tol / factor, self.max_depth)


@dataclass(frozen=True)
class MinimizeResult:
    argmin: float
    min_value: float
    iterations: int


def _panel(fn, lo: float, hi: float):
    """(15-point estimate, error estimate vs embedded 7-point) on [lo, hi]."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    i15 = 0.0
    for x, w in zip(_NODES15, _WEIGHTS15):
        t = mid + half * x
        v = fn(t)
        if not math.isfinite(v):
            raise EvaluationError("integrand returned a non-finite value", t)
        i15 += w * v
    i7 = 0.0
    for x, w in zip(_NODES7, _WEIGHTS7):
        t = mid + half * x
        v = fn(t)
        if not math.isfinite(v):
            raise EvaluationError("integrand returned a non-finite value", t)
        i7 += w * v
    return half * i15, half * abs(i15 - i7)


def integrate(fn: Callable[[float], float], lo: float, hi: float,
              spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Integral of `fn` over [lo, hi] to the tolerances in `spec`.

    Empty intervals return 0.0 exactly.  Raises `EvaluationError` if the
    integrand produces a non-finite value, `ConvergenceError` (carrying the
    best estimate) if bisection exhausts ``spec.max_depth``.
    """
    if lo > hi:
        raise DomainError(f"integration bounds out of order: {lo} > {hi}")
    if lo == hi:
        return 0.0

    whole, _ = _panel(fn, lo, hi)
    tol = max(spec.abs_tol, spec.rel_tol * abs(whole))

    # (lo, hi, local tolerance, remaining depth) work stack; children split
    # the parent's tolerance so the accepted panels sum within `tol`.
    stack = [(lo, hi, tol, spec.max_depth)]
    total = 0.0
    while stack:
        a, b, t, depth = stack.pop()
        est, err = _panel(fn, a, b)
        if err <= t or b - a <= abs(a) * 1e-15 + 1e-300:
            total += est
            continue
        if depth <= 0:
            raise ConvergenceError(
                f"quadrature depth exhausted on [{a}, {b}]", total + est)
        m = 0.5 * (a + b)
        stack.append((a, m, 0.5 * t, depth - 1))
        stack.append((m, b, 0.5 * t, depth - 1))
    return total


def minimize_scalar(fn: Callable[[float], float], lo: float, hi: float,
                    tol: float = 1e-8) -> MinimizeResult:
    """Golden-section minimum of a unimodal `fn` on [lo, hi].

    Unimodality is the caller's responsibility; on a unimodal objective the
    returned argmin is within `tol` of the true minimizer.
    """
    if lo >= hi:
        raise DomainError(f"empty search bracket: [{lo}, {hi}]")
    if tol <= 0:
        raise DomainError("tol must be positive")

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)

    def _eval(x):
        v = fn(x)
        if not math.isfinite(v):
            raise EvaluationError("objective returned a non-finite value", x)
        return v

    fc, fd = _eval(c), _eval(d)
    iterations = 0
    while b - a > tol:
        iterations += 1
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _eval(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _eval(d)
        if iterations > 500:  # bracket shrinks by ~0.618/step; 500 is unreachable
            break
    x = 0.5 * (a + b)
    return MinimizeResult(argmin=x, min_value=_eval(x), iterations=iterations)


def derivative_central(fn: Callable[[float], float], x: float, h: float) -> float:
    """Central difference (fn(x+h) - fn(x-h)) / (2h)."""
    if h <= 0:
        raise DomainError("step h must be positive")
    hi, lo = fn(x + h), fn(x - h)
    if not math.isfinite(hi):
        raise EvaluationError("function returned a non-finite value", x + h)
    if not math.isfinite(lo):
        raise EvaluationError("function returned a non-finite value", x - h)
    return (hi - lo) / (2.0 * h)
