"""Closed family of scalar functions with exact derivatives and antiderivatives.

Every member evaluates pointwise on floats or numpy arrays and exposes exact
first/second derivatives and an antiderivative, which is what the inequality
checkers and solvers need: convexity is decided from the second derivative,
and averaged chain-rule factors reduce to antiderivative differences.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ClassificationError, DomainError

_INF = math.inf


class ScalarFunction:
    """Base class. Subclasses define value/deriv/deriv2/antideriv in closed form."""

    #: open interval (lo, hi) on which the function is defined
    domain = (-_INF, _INF)

    def __call__(self, x):
        raise NotImplementedError

    def deriv(self, x):
        raise NotImplementedError

    def deriv2(self, x):
        raise NotImplementedError

    def antideriv(self, x):
        """One fixed antiderivative (additive constant is arbitrary but consistent)."""
        raise NotImplementedError

    def inverse(self, y):
        """Closed-form inverse where one exists; subclasses override."""
        raise NotImplementedError(f"{type(self).__name__} has no closed-form inverse")

    def check_domain(self, x):
        lo, hi = self.domain
        xa = np.asarray(x, dtype=float)
        if np.any(xa <= lo) or np.any(xa >= hi):
            raise DomainError(
                f"argument outside open domain ({lo}, {hi}) of {self!r}"
            )


class Constant(ScalarFunction):
    def __init__(self, c):
        self.c = float(c)

    def __call__(self, x):
        return self.c + 0.0 * np.asarray(x, dtype=float)

    def deriv(self, x):
        return 0.0 * np.asarray(x, dtype=float)

    deriv2 = deriv

    def antideriv(self, x):
        return self.c * np.asarray(x, dtype=float)

    def __repr__(self):
        return f"Constant({self.c})"


class Affine(ScalarFunction):
    def __init__(self, slope, intercept):
        self.slope = float(slope)
        self.intercept = float(intercept)

    def __call__(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.intercept

    def deriv(self, x):
        return self.slope + 0.0 * np.asarray(x, dtype=float)

    def deriv2(self, x):
        return 0.0 * np.asarray(x, dtype=float)

    def antideriv(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.slope * x * x + self.intercept * x

    def inverse(self, y):
        if self.slope == 0.0:
            raise DomainError("constant affine function is not invertible")
        return (np.asarray(y, dtype=float) - self.intercept) / self.slope

    def __repr__(self):
        return f"Affine({self.slope}, {self.intercept})"


def Identity():
    return Affine(1.0, 0.0)


class Power(ScalarFunction):
    """x**alpha on (0, inf)."""

    domain = (0.0, _INF)

    def __init__(self, alpha):
        self.alpha = float(alpha)

    def __call__(self, x):
        return np.asarray(x, dtype=float) ** self.alpha

    def deriv(self, x):
        return self.alpha * np.asarray(x, dtype=float) ** (self.alpha - 1.0)

    def deriv2(self, x):
        a = self.alpha
        return a * (a - 1.0) * np.asarray(x, dtype=float) ** (a - 2.0)

    def antideriv(self, x):
        x = np.asarray(x, dtype=float)
        if self.alpha == -1.0:
            return np.log(x)
        return x ** (self.alpha + 1.0) / (self.alpha + 1.0)

    def inverse(self, y):
        if self.alpha == 0.0:
            raise DomainError("x**0 is not invertible")
        return np.asarray(y, dtype=float) ** (1.0 / self.alpha)

    def __repr__(self):
        return f"Power({self.alpha})"


class Exp(ScalarFunction):
    def __call__(self, x):
        return np.exp(np.asarray(x, dtype=float))

    deriv = __call__
    deriv2 = __call__
    antideriv = __call__

    def inverse(self, y):
        return np.log(np.asarray(y, dtype=float))

    def __repr__(self):
        return "Exp()"


class Log(ScalarFunction):
    domain = (0.0, _INF)

    def __call__(self, x):
        return np.log(np.asarray(x, dtype=float))

    def deriv(self, x):
        return 1.0 / np.asarray(x, dtype=float)

    def deriv2(self, x):
        return -1.0 / np.asarray(x, dtype=float) ** 2

    def antideriv(self, x):
        x = np.asarray(x, dtype=float)
        return x * np.log(x) - x

    def inverse(self, y):
        return np.exp(np.asarray(y, dtype=float))

    def __repr__(self):
        return "Log()"


class XLogX(ScalarFunction):
    """x*ln(x) on (0, inf); strictly convex there."""

    domain = (0.0, _INF)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x * np.log(x)

    def deriv(self, x):
        return np.log(np.asarray(x, dtype=float)) + 1.0

    def deriv2(self, x):
        return 1.0 / np.asarray(x, dtype=float)

    def antideriv(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * x * x * np.log(x) - 0.25 * x * x

    def __repr__(self):
        return "XLogX()"


class Polynomial(ScalarFunction):
    """Polynomial with ascending coefficients: coeffs[k] * x**k."""

    def __init__(self, coeffs):
        self.coeffs = [float(c) for c in coeffs]
        if not self.coeffs:
            raise DomainError("polynomial needs at least one coefficient")

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coeffs)

    def deriv(self, x):
        c = np.polynomial.polynomial.polyder(self.coeffs)
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c)

    def deriv2(self, x):
        c = np.polynomial.polynomial.polyder(self.coeffs, 2)
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c)

    def antideriv(self, x):
        c = np.polynomial.polynomial.polyint(self.coeffs)
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), c)

    def __repr__(self):
        return f"Polynomial({self.coeffs})"


class Transformed(ScalarFunction):
    """out_scale * inner(in_scale * x + in_shift) + out_shift."""

    def __init__(self, inner, in_scale=1.0, in_shift=0.0, out_scale=1.0, out_shift=0.0):
        if in_scale == 0.0:
            raise DomainError("in_scale must be nonzero")
        self.inner = inner
        self.in_scale = float(in_scale)
        self.in_shift = float(in_shift)
        self.out_scale = float(out_scale)
        self.out_shift = float(out_shift)

    @property
    def domain(self):
        lo, hi = self.inner.domain
        a = (lo - self.in_shift) / self.in_scale
        b = (hi - self.in_shift) / self.in_scale
        return (min(a, b), max(a, b))

    def _u(self, x):
        return self.in_scale * np.asarray(x, dtype=float) + self.in_shift

    def __call__(self, x):
        return self.out_scale * self.inner(self._u(x)) + self.out_shift

    def deriv(self, x):
        return self.out_scale * self.in_scale * self.inner.deriv(self._u(x))

    def deriv2(self, x):
        return self.out_scale * self.in_scale ** 2 * self.inner.deriv2(self._u(x))

    def antideriv(self, x):
        x = np.asarray(x, dtype=float)
        return (self.out_scale / self.in_scale) * self.inner.antideriv(self._u(x)) + self.out_shift * x

    def inverse(self, y):
        if self.out_scale == 0.0:
            raise DomainError("collapsed transform is not invertible")
        v = (np.asarray(y, dtype=float) - self.out_shift) / self.out_scale
        return (self.inner.inverse(v) - self.in_shift) / self.in_scale

    def __repr__(self):
        return (f"Transformed({self.inner!r}, in_scale={self.in_scale}, "
                f"in_shift={self.in_shift}, out_scale={self.out_scale}, "
                f"out_shift={self.out_shift})")


#: sample count for sign-checking the second derivative on a range
CONVEXITY_SAMPLES = 257

#: |F''| below this counts as zero (affine behaviour)
_AFFINE_TOL = 1e-12


def classify_convexity(F, lo, hi, samples=CONVEXITY_SAMPLES):
    """Decide convexity of F on [lo, hi] from the sign of its second derivative.

    Returns (kind, strict) with kind in {"convex", "concave", "affine"};
    strict is True when the second derivative is bounded away from zero at
    every sample.  A sign change raises ClassificationError.
    """
    if lo > hi:
        raise DomainError("empty classification range")
    if lo == hi:
        xs = np.array([lo])
    else:
        xs = np.linspace(lo, hi, samples)
    F.check_domain(xs)
    d2 = np.asarray(F.deriv2(xs), dtype=float)
    if not np.all(np.isfinite(d2)):
        raise ClassificationError("second derivative not finite on range")
    pos = d2 > _AFFINE_TOL
    neg = d2 < -_AFFINE_TOL
    if pos.any() and neg.any():
        raise ClassificationError(
            f"second derivative changes sign on [{lo}, {hi}]"
        )
    if pos.any():
        return "convex", bool(pos.all())
    if neg.any():
        return "concave", bool(neg.all())
    return "affine", False
