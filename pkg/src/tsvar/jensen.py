"""Jensen-type inequality gap checkers on time scales.

Each checker computes both sides of an inequality, orients the gap so that
``gap >= 0`` means the inequality holds, and flags the sharp equality case
(which, for strictly convex/concave F and nowhere-zero weights, occurs
exactly when the integrand is constant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, PreconditionError
from .functions import classify_convexity
from .roots import invert_increasing
from .timescale import GridFunction, TimeScale

#: absolute tolerance separating genuine equality from quadrature noise
EQUALITY_TOL = 1e-10

#: tolerance on max(f) - min(f) for declaring f constant
CONSTANCY_TOL = 1e-8


@dataclass(frozen=True)
class InequalityReport:
    """Both sides of one inequality instance, with its oriented gap."""

    lhs: float
    rhs: float
    gap: float
    direction: str            # "convex_ge" | "concave_le"
    holds: bool
    equality: bool
    f_is_constant: bool

    @classmethod
    def build(cls, lhs, rhs, direction, f_values, tol=EQUALITY_TOL):
        lhs = float(lhs)
        rhs = float(rhs)
        gap = lhs - rhs if direction == "convex_ge" else rhs - lhs
        spread = float(np.max(f_values) - np.min(f_values))
        return cls(
            lhs=lhs,
            rhs=rhs,
            gap=gap,
            direction=direction,
            holds=gap >= -tol,
            equality=abs(gap) <= tol,
            f_is_constant=spread <= CONSTANCY_TOL,
        )

    def to_dict(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "direction": self.direction,
            "holds": self.holds,
            "equality": self.equality,
            "f_is_constant": self.f_is_constant,
        }


def _as_grid(ts, f):
    return f if isinstance(f, GridFunction) else GridFunction(ts, f)


def _kappa_values(ts, g):
    """Values on [a, b]^kappa: the ones that actually enter the integrals."""
    return g.values[ts.kappa_indices()]


def _full(ts, kvals):
    """Scatter kappa-values back to a full grid array (excluded max padded)."""
    out = np.empty(len(ts.points))
    out[ts.kappa_indices()] = kvals
    if ts.b_left_scattered:
        out[-1] = kvals[-1]
    return out


def _direction(kind):
    return "convex_ge" if kind in ("convex", "affine") else "concave_le"


def weighted_jensen_gap(ts: TimeScale, f, h, F) -> InequalityReport:
    """Gap of the weighted Jensen inequality with weight |h|.

    lhs is the |h|-weighted mean of F(f); rhs is F at the |h|-weighted mean
    of f.  Requires the total weight to be positive and F to have a definite
    convexity regime on the range of f.
    """
    f = _as_grid(ts, f)
    h = _as_grid(ts, h)
    habs = GridFunction(ts, np.abs(h.values))
    w = ts.delta_integral(habs)
    if w <= 0.0:
        raise PreconditionError("total weight integral of |h| must be positive")
    fk = _kappa_values(ts, f)
    fmin, fmax = float(np.min(fk)), float(np.max(fk))
    F.check_domain(np.array([fmin, fmax]))
    kind, _ = classify_convexity(F, fmin, fmax)
    Ffk = np.asarray(F(fk), dtype=float)
    hf = GridFunction(ts, habs.values * f.values)
    hFf = GridFunction(ts, habs.values * _full(ts, Ffk))
    mean_f = ts.delta_integral(hf) / w
    lhs = ts.delta_integral(hFf) / w
    rhs = float(F(mean_f))
    return InequalityReport.build(lhs, rhs, _direction(kind), fk)


def jensen_gap(ts: TimeScale, f, F) -> InequalityReport:
    """Unweighted Jensen gap: mean of F(f) versus F of the mean of f."""
    f = _as_grid(ts, f)
    ones = GridFunction(ts, np.ones(len(ts.points)))
    return weighted_jensen_gap(ts, f, ones, F)


def special_case_gap(kind: str, ts: TimeScale, f, alpha=None) -> InequalityReport:
    """Gap of one of the specialized corollary inequalities.

    kind is one of "power", "reciprocal_power", "exp", "log", "xlogx";
    power variants take the exponent alpha.  lhs/rhs are exactly the two
    sides as the corollaries state them (no normalization by b - a).
    """
    f = _as_grid(ts, f)
    span = ts.b - ts.a
    vals = _kappa_values(ts, f)
    if kind != "exp" and np.any(vals <= 0.0):
        raise DomainError(f"{kind} inequality requires positive f")

    if kind == "power":
        if alpha is None or alpha in (0.0, 1.0):
            raise ParameterError("power inequality needs alpha outside {0, 1}")
        direction = "convex_ge" if (alpha < 0.0 or alpha > 1.0) else "concave_le"
        lhs = ts.delta_integral(GridFunction(ts, _full(ts, vals ** alpha)))
        rhs = span ** (1.0 - alpha) * ts.delta_integral(f) ** alpha
    elif kind == "reciprocal_power":
        if alpha is None or alpha in (-1.0, 0.0):
            raise ParameterError(
                "reciprocal power inequality needs alpha outside {-1, 0}"
            )
        direction = "convex_ge" if (alpha < -1.0 or alpha > 0.0) else "concave_le"
        recip = ts.delta_integral(GridFunction(ts, _full(ts, 1.0 / vals)))
        lhs = recip ** alpha * ts.delta_integral(GridFunction(ts, _full(ts, vals ** alpha)))
        rhs = span ** (1.0 + alpha)
    elif kind == "exp":
        direction = "convex_ge"
        lhs = ts.delta_integral(GridFunction(ts, _full(ts, np.exp(vals))))
        rhs = span * math.exp(ts.delta_integral(f) / span)
    elif kind == "log":
        direction = "concave_le"
        lhs = ts.delta_integral(GridFunction(ts, _full(ts, np.log(vals))))
        rhs = span * math.log(ts.delta_integral(f) / span)
    elif kind == "xlogx":
        direction = "convex_ge"
        mean = ts.delta_integral(f)
        lhs = ts.delta_integral(GridFunction(ts, _full(ts, vals * np.log(vals))))
        rhs = mean * math.log(mean / span)
    else:
        raise ParameterError(f"unknown special inequality kind {kind!r}")
    return InequalityReport.build(lhs, rhs, direction, vals)


def quasi_arithmetic_gap(ts: TimeScale, f, phi, psi) -> InequalityReport:
    """Gap between the psi- and phi-quasi-arithmetic means of f.

    Requires phi strictly monotone on the range of f, psi strictly
    increasing, and psi o phi^{-1} of definite convexity on Im(phi).
    The convex orientation gives psi-mean >= phi-mean.
    """
    f = _as_grid(ts, f)
    fk = _kappa_values(ts, f)
    fmin, fmax = float(np.min(fk)), float(np.max(fk))
    xs = np.linspace(fmin, fmax, 257) if fmax > fmin else np.array([fmin])
    phi.check_domain(xs)
    psi.check_domain(xs)
    dphi = np.asarray(phi.deriv(xs), dtype=float)
    if np.any(dphi == 0.0) or (np.any(dphi > 0) and np.any(dphi < 0)):
        raise PreconditionError("phi is not strictly monotone on the range of f")
    dpsi = np.asarray(psi.deriv(xs), dtype=float)
    if np.any(dpsi <= 0.0):
        raise PreconditionError("psi must be strictly increasing on the range of f")

    # second derivative of psi o phi^{-1} at u = phi(x), by the chain rule
    d2 = (np.asarray(psi.deriv2(xs), dtype=float) * dphi
          - dpsi * np.asarray(phi.deriv2(xs), dtype=float)) / dphi ** 3
    pos, neg = np.any(d2 > 1e-12), np.any(d2 < -1e-12)
    if pos and neg:
        raise PreconditionError(
            "psi o phi^{-1} has no definite convexity on Im(phi)"
        )
    direction = "convex_ge" if not neg else "concave_le"

    span = ts.b - ts.a
    mean_psi = ts.delta_integral(
        GridFunction(ts, _full(ts, np.asarray(psi(fk), dtype=float)))) / span
    mean_phi = ts.delta_integral(
        GridFunction(ts, _full(ts, np.asarray(phi(fk), dtype=float)))) / span
    lhs = _apply_inverse(psi, mean_psi, fmin, fmax)
    rhs = _apply_inverse(phi, mean_phi, fmin, fmax)
    return InequalityReport.build(lhs, rhs, direction, fk)


def _apply_inverse(fn, target, xmin, xmax):
    """Invert fn at target; closed form when available, else monotone search."""
    try:
        return float(fn.inverse(target))
    except (NotImplementedError, DomainError):
        pass
    lo, hi = xmin - POINT_PAD, xmax + POINT_PAD
    increasing = float(fn.deriv(0.5 * (xmin + xmax))) > 0
    if increasing:
        return invert_increasing(fn, target, lo, hi)
    return invert_increasing(lambda x: -fn(x), -target, lo, hi,
                             gprime=lambda x: -float(fn.deriv(x)))


POINT_PAD = 1e-9
