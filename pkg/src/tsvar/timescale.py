"""Time scales as finite unions of isolated points and closed intervals.

A time scale carries a finite evaluation grid: the isolated points (atoms)
plus equally spaced quadrature nodes on each continuous interval.  The delta
calculus reduces to graininess-weighted sums at right-scattered points and
to quadrature / finite differences on the continuous parts.

Continuous segments are integrated with a fourth-order piecewise scheme
(cubic-interpolant Newton--Cotes per subinterval) rather than plain Simpson:
the per-subinterval amounts make the integral additive at node boundaries
and give smooth cumulative integrals, which the variational solvers
differentiate numerically.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstructionError, DomainError

#: absolute tolerance for matching a float against a grid point
POINT_TOL = 1e-12

#: default quadrature nodes per continuous interval (forced odd, >= 5)
DEFAULT_QUAD_NODES = 129

_QUAD_NODES_ENV = "TSVAR_QUAD_NODES"


def default_quad_nodes():
    raw = os.environ.get(_QUAD_NODES_ENV)
    if raw is None:
        return DEFAULT_QUAD_NODES
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConstructionError(f"bad {_QUAD_NODES_ENV}={raw!r}") from exc
    if n < 2:
        raise ConstructionError(f"{_QUAD_NODES_ENV} must be >= 2")
    return n


def _force_odd(n):
    n = max(int(n), 5)
    return n if n % 2 == 1 else n + 1


@dataclass(frozen=True)
class _Piece:
    """One structural piece of the scale: an atom or an interval's node slice."""

    kind: str          # "atom" | "interval"
    start: int         # first index into the point array
    stop: int          # one past the last index


class TimeScale:
    """Immutable time scale with precomputed jump structure.

    Use the constructors :func:`uniform`, :func:`q_scale`,
    :func:`real_interval`, or :func:`custom` rather than ``__init__``.
    """

    def __init__(self, atoms=(), intervals=(), quad_nodes_per_interval=None):
        if quad_nodes_per_interval is None:
            quad_nodes_per_interval = default_quad_nodes()
        if quad_nodes_per_interval < 2:
            raise ConstructionError("quad_nodes_per_interval must be >= 2")
        self.quad_nodes_per_interval = int(quad_nodes_per_interval)
        nodes = _force_odd(self.quad_nodes_per_interval)

        atoms = [float(a) for a in atoms]
        intervals = [(float(l), float(u)) for (l, u) in intervals]
        if not atoms and not intervals:
            raise ConstructionError("time scale must be nonempty")
        for i in range(1, len(atoms)):
            if atoms[i] <= atoms[i - 1] + POINT_TOL:
                raise ConstructionError("atoms must be strictly increasing")
        intervals.sort()
        for (l, u) in intervals:
            if not l < u:
                raise ConstructionError(f"degenerate interval [{l}, {u}]")
        for i in range(1, len(intervals)):
            if intervals[i][0] < intervals[i - 1][1] - POINT_TOL:
                raise ConstructionError("intervals overlap")

        kept_atoms = []
        for a in atoms:
            inside = False
            for (l, u) in intervals:
                if abs(a - l) <= POINT_TOL or abs(a - u) <= POINT_TOL:
                    inside = True        # absorbed into the interval endpoint
                    break
                if l < a < u:
                    raise ConstructionError(
                        f"atom {a} lies strictly inside interval [{l}, {u}]"
                    )
            if not inside:
                kept_atoms.append(a)

        items = [("atom", a, a) for a in kept_atoms]
        items += [("interval", l, u) for (l, u) in intervals]
        items.sort(key=lambda it: it[1])

        pts = []
        pieces = []
        for kind, l, u in items:
            if kind == "atom":
                if pts and abs(pts[-1] - l) <= POINT_TOL:
                    raise ConstructionError(f"duplicate point {l}")
                pts.append(l)
                pieces.append(_Piece("atom", len(pts) - 1, len(pts)))
            else:
                seg = np.linspace(l, u, nodes)
                if pts and abs(pts[-1] - seg[0]) <= POINT_TOL:
                    start = len(pts) - 1
                    pts.extend(seg[1:].tolist())
                else:
                    start = len(pts)
                    pts.extend(seg.tolist())
                pieces.append(_Piece("interval", start, len(pts)))

        self.points = np.array(pts, dtype=float)
        if np.any(np.diff(self.points) <= 0):
            raise ConstructionError("evaluation points are not strictly increasing")
        self.pieces = pieces
        self.atoms = tuple(kept_atoms)
        self.intervals = tuple(intervals)

        n = len(self.points)
        dense = np.zeros(n, dtype=bool)
        dense[n - 1] = True              # max point: sigma(b) = b by convention
        for p in pieces:
            if p.kind == "interval":
                dense[p.start:p.stop - 1] = True
        self._right_dense = dense
        mu = np.zeros(n)
        mu[:-1] = np.where(dense[:-1], 0.0, np.diff(self.points))
        self._mu = mu

        # left-side structure (for rho)
        ldense = np.zeros(n, dtype=bool)
        ldense[0] = True
        for p in pieces:
            if p.kind == "interval":
                ldense[p.start + 1:p.stop] = True
        self._left_dense = ldense

    # -- basic queries ----------------------------------------------------

    @property
    def a(self):
        return float(self.points[0])

    @property
    def b(self):
        return float(self.points[-1])

    @property
    def is_discrete(self):
        return all(p.kind == "atom" for p in self.pieces)

    @property
    def b_left_scattered(self):
        return not self._left_dense[-1]

    def index_of(self, t):
        """Index of t in the evaluation grid, matched to absolute tolerance."""
        i = int(np.searchsorted(self.points, t))
        for j in (i - 1, i, i + 1):
            if 0 <= j < len(self.points) and abs(self.points[j] - t) <= max(
                POINT_TOL, POINT_TOL * abs(t)
            ):
                return j
        raise DomainError(f"point {t} is not in the time scale")

    def __contains__(self, t):
        try:
            self.index_of(t)
            return True
        except DomainError:
            return False

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return (f"TimeScale(atoms={list(self.atoms)}, "
                f"intervals={list(self.intervals)})")

    def kappa_indices(self):
        """Indices of [a, b]^kappa: all points, minus b when b is left-scattered."""
        n = len(self.points)
        if self.b_left_scattered:
            return np.arange(n - 1)
        return np.arange(n)

    def kappa_points(self):
        return self.points[self.kappa_indices()]

    # -- jump operators ---------------------------------------------------

    def sigma(self, t):
        i = self.index_of(t)
        if self._right_dense[i]:
            return float(self.points[i])
        return float(self.points[i + 1])

    def rho(self, t):
        i = self.index_of(t)
        if self._left_dense[i]:
            return float(self.points[i])
        return float(self.points[i - 1])

    def mu(self, t):
        return float(self._mu[self.index_of(t)])

    def jump_operators(self, t):
        """(sigma, rho, mu) at an evaluation point of the scale."""
        return self.sigma(t), self.rho(t), self.mu(t)

    # -- integration ------------------------------------------------------

    def delta_integral(self, f, lo=None, hi=None):
        """Delta integral of a grid function from lo to hi.

        Right-scattered points contribute mu(t) * f(t); interval segments are
        integrated by the fourth-order piecewise quadrature.
        """
        vals = _grid_values(self, f)
        ilo = self.index_of(self.a if lo is None else lo)
        ihi = self.index_of(self.b if hi is None else hi)
        if ilo > ihi:
            raise DomainError("delta_integral requires lo <= hi")
        if ilo == ihi:
            return 0.0
        total = 0.0
        mu = self._mu
        for i in range(ilo, ihi):
            if mu[i] > 0.0:
                total += mu[i] * vals[i]
        for p in self.pieces:
            if p.kind != "interval":
                continue
            s = max(p.start, ilo)
            e = min(p.stop - 1, ihi)
            if e - s >= 1:
                total += _integrate_uniform(self.points[s:e + 1], vals[s:e + 1])
        return total

    def cumulative_delta_integral(self, f):
        """Integral from a to every evaluation point, as an array.

        Uses full-piece quadrature stencils on continuous segments so the
        cumulative values are smooth samples of the true running integral.
        """
        vals = _grid_values(self, f)
        n = len(self.points)
        amounts = np.zeros(n - 1) if n > 1 else np.zeros(0)
        mu = self._mu
        for i in range(n - 1):
            if mu[i] > 0.0:
                amounts[i] = mu[i] * vals[i]
        for p in self.pieces:
            if p.kind == "interval":
                x = self.points[p.start:p.stop]
                fx = vals[p.start:p.stop]
                amounts[p.start:p.stop - 1] = _subinterval_amounts(x, fx)
        out = np.zeros(n)
        np.cumsum(amounts, out=out[1:])
        return out

    # -- differentiation --------------------------------------------------

    def delta_derivative(self, y, t):
        """Delta derivative of a grid function at one kappa-point."""
        return float(self.delta_derivative_grid(y)[self._kappa_check(t)])

    def _kappa_check(self, t):
        i = self.index_of(t)
        if i == len(self.points) - 1 and self.b_left_scattered:
            raise DomainError(f"{t} is outside [a, b]^kappa")
        return i

    def delta_derivative_grid(self, y):
        """Delta derivative at every evaluation point; NaN at b when excluded.

        Right-scattered points use the exact difference quotient; right-dense
        points use fourth-order finite differences on the interval's nodes.
        """
        vals = _grid_values(self, y)
        n = len(self.points)
        out = np.full(n, np.nan)
        mu = self._mu
        for i in range(n - 1):
            if mu[i] > 0.0:
                out[i] = (vals[i + 1] - vals[i]) / mu[i]
        for p in self.pieces:
            if p.kind == "interval":
                d = _differentiate_uniform(self.points[p.start:p.stop],
                                           vals[p.start:p.stop])
                sl = slice(p.start, p.stop)
                # scattered quotient wins at a shared right endpoint
                take = np.isnan(out[sl])
                out[sl] = np.where(take, d, out[sl])
        if self.b_left_scattered:
            out[n - 1] = np.nan
        return out


# -- grid functions -------------------------------------------------------


@dataclass(frozen=True)
class GridFunction:
    """Real values sampled at every evaluation point of a time scale."""

    timescale: TimeScale
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        n = len(self.timescale.points)
        if len(vals) == n - 1:
            # kappa-length data: pad the (never integrated) max point
            vals = np.append(vals, vals[-1])
        if len(vals) != n:
            raise DomainError(
                f"expected {n} (or {n - 1}) values, got {len(self.values)}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, ts, fn):
        return cls(ts, np.asarray(fn(ts.points), dtype=float))

    def __call__(self, t):
        return float(self.values[self.timescale.index_of(t)])

    @property
    def spread(self):
        return float(np.max(self.values) - np.min(self.values))


def _grid_values(ts, f):
    if isinstance(f, GridFunction):
        if f.timescale is not ts and not np.array_equal(f.timescale.points, ts.points):
            raise DomainError("grid function lives on a different time scale")
        return f.values
    vals = np.asarray(f, dtype=float)
    if len(vals) != len(ts.points):
        raise DomainError("value array length does not match the time scale")
    return vals


# -- constructors ---------------------------------------------------------


def uniform(a, b, n, **kw):
    """n+1 equally spaced atoms on [a, b]."""
    if not a < b:
        raise ConstructionError("uniform requires a < b")
    if n < 1:
        raise ConstructionError("uniform requires n >= 1")
    return TimeScale(atoms=np.linspace(a, b, int(n) + 1), **kw)


def q_scale(q, n, m, **kw):
    """Atoms {q**n, ..., q**m} of the quantum scale, q > 1."""
    if q <= 1:
        raise ConstructionError("q_scale requires q > 1")
    if not n < m:
        raise ConstructionError("q_scale requires n < m")
    return TimeScale(atoms=[float(q) ** k for k in range(int(n), int(m) + 1)], **kw)


def real_interval(a, b, nodes=None):
    """Single closed interval [a, b] with the given quadrature resolution."""
    if not a < b:
        raise ConstructionError("real_interval requires a < b")
    if nodes is None:
        nodes = default_quad_nodes()
    return TimeScale(intervals=[(a, b)], quad_nodes_per_interval=nodes)


def custom(atoms=(), intervals=(), quad_nodes_per_interval=None):
    return TimeScale(atoms=atoms, intervals=intervals,
                     quad_nodes_per_interval=quad_nodes_per_interval)


# -- uniform-grid quadrature and differentiation --------------------------


def _subinterval_amounts(x, fx):
    """Fourth-order integral amounts per subinterval of a uniform grid.

    Interior subintervals integrate the cubic through the four surrounding
    nodes; the first and last use the one-sided cubic.  Exact for cubics,
    additive by construction.
    """
    m = len(x) - 1
    h = (x[-1] - x[0]) / m
    f = np.asarray(fx, dtype=float)
    if m == 1:
        return np.array([0.5 * h * (f[0] + f[1])])
    if m == 2:
        # split Simpson's rule so amounts stay additive
        whole = h / 3.0 * (f[0] + 4.0 * f[1] + f[2])
        left = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2])
        return np.array([left, whole - left])
    amounts = np.empty(m)
    amounts[1:m - 1] = (h / 24.0) * (
        -f[0:m - 2] + 13.0 * f[1:m - 1] + 13.0 * f[2:m] - f[3:m + 1]
    )
    amounts[0] = (h / 24.0) * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
    amounts[m - 1] = (h / 24.0) * (
        9.0 * f[m] + 19.0 * f[m - 1] - 5.0 * f[m - 2] + f[m - 3]
    )
    return amounts


def _integrate_uniform(x, fx):
    return float(np.sum(_subinterval_amounts(x, fx)))


def _differentiate_uniform(x, fx):
    """Fourth-order finite differences on a uniform grid (>= 5 nodes)."""
    f = np.asarray(fx, dtype=float)
    n = len(f)
    h = (x[-1] - x[0]) / (n - 1)
    if n < 5:
        return np.gradient(f, h, edge_order=2 if n >= 3 else 1)
    d = np.empty(n)
    d[2:n - 2] = (f[0:n - 4] - 8.0 * f[1:n - 3] + 8.0 * f[3:n - 1] - f[4:n]) / (12.0 * h)
    if n == 5:
        d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
        d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
        d[3] = (3.0 * f[4] + 10.0 * f[3] - 18.0 * f[2] + 6.0 * f[1] - f[0]) / (12.0 * h)
        d[4] = (25.0 * f[4] - 48.0 * f[3] + 36.0 * f[2] - 16.0 * f[1] + 3.0 * f[0]) / (12.0 * h)
        return d
    # sixth-node one-sided stencils keep the boundary error below the
    # interior error instead of dominating it
    w0 = _EDGE0_W
    w1 = _EDGE1_W
    d[0] = (w0 @ f[:6]) / h
    d[1] = (w1 @ f[:6]) / h
    d[n - 2] = -(w1 @ f[n - 6:][::-1]) / h
    d[n - 1] = -(w0 @ f[n - 6:][::-1]) / h
    return d


_EDGE0_W = np.array([-137.0 / 60.0, 5.0, -5.0, 10.0 / 3.0, -5.0 / 4.0, 1.0 / 5.0])
_EDGE1_W = np.array([-1.0 / 5.0, -13.0 / 12.0, 2.0, -1.0, 1.0 / 3.0, -1.0 / 20.0])


# -- averaged chain-rule factor -------------------------------------------


def averaged_chain_factor(gprime, y_t, mu_t, ydelta_t):
    """Average of gprime over the segment [y, y + mu * ydelta].

    Equals (A(y + s) - A(y)) / s with A an antiderivative of gprime and
    s = mu * ydelta; collapses to gprime(y) when s vanishes.  Multiplied by
    the delta derivative it reproduces the chain rule for (A o y)^Delta.
    """
    s = mu_t * ydelta_t
    if abs(s) < 1e-12:
        gprime.check_domain(y_t)
        return float(gprime(y_t))
    gprime.check_domain(np.array([y_t, y_t + s]))
    return float((gprime.antideriv(y_t + s) - gprime.antideriv(y_t)) / s)
