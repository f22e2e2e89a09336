"""Orlicz functions on [0, 1], fundamental functions and Luxemburg norms.

A descriptor pairs a function ``M`` with a convexity exponent ``p``: the
space ``l_M`` is p-normed whenever ``t -> M(t**(1/p))`` is an Orlicz function.
``M`` is extended by ``+inf`` beyond 1, which keeps the Luxemburg infimum
well posed for every finite vector.

Large arguments of the fundamental function travel as base-2 logarithms.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._numeric import bisect_increasing, bisect_increasing_vec
from .errors import EndpointMismatch, NonMonotone, NotPConvex, OutOfDomain

LN2 = math.log(2.0)
GRID_SIZE = 1024
ENDPOINT_TOL = 1e-12
CONVEXITY_TOL = 1e-9
INVERSE_TOL = 1e-12


@dataclass(frozen=True)
class Power:
    """M(t) = t**q."""

    q: float

    def __post_init__(self):
        if not self.q > 0:
            raise OutOfDomain(f"Power exponent must be positive, got {self.q}")


@dataclass(frozen=True)
class PowerLog:
    """M(t) = t**q * (1 + ln(1/t))**r, normalised so that M(1) = 1.

    Increasing on (0, 1] whenever r <= q; r < 0 gives the convex examples.
    """

    q: float
    r: float

    def __post_init__(self):
        if not self.q > 0:
            raise OutOfDomain(f"PowerLog exponent q must be positive, got {self.q}")
        if self.r > self.q:
            raise OutOfDomain("PowerLog needs r <= q to be increasing")


@dataclass(frozen=True)
class Tabulated:
    """Knot table (t, M(t)) joined by a monotone piecewise-cubic (PCHIP)."""

    knots: tuple

    def __post_init__(self):
        knots = tuple((float(t), float(m)) for t, m in self.knots)
        if len(knots) < 2:
            raise OutOfDomain("Tabulated needs at least two knots")
        ts = [t for t, _ in knots]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise OutOfDomain("Tabulated knots must have strictly increasing t")
        if ts[0] != 0.0 or ts[-1] != 1.0:
            raise OutOfDomain("Tabulated knots must span exactly [0, 1]")
        object.__setattr__(self, "knots", knots)


@dataclass(frozen=True)
class OrliczDescriptor:
    family: object
    p: float = 1.0
    _interp: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0.0 < self.p <= 1.0):
            raise OutOfDomain(f"convexity exponent p must lie in (0, 1], got {self.p}")
        if isinstance(self.family, Tabulated):
            t, m = np.array(self.family.knots).T
            object.__setattr__(self, "_interp", PchipInterpolator(t, m, extrapolate=False))
        elif not isinstance(self.family, (Power, PowerLog)):
            raise OutOfDomain(f"unknown Orlicz family {self.family!r}")

    # -- evaluation ---------------------------------------------------------

    def __call__(self, t):
        """Evaluate M elementwise; +inf beyond 1."""
        t = np.abs(np.asarray(t, dtype=float))
        out = np.full(t.shape, np.inf)
        inside = t <= 1.0
        out[inside] = self._eval_unit(t[inside])
        return out if out.ndim else float(out)

    def _eval_unit(self, t):
        fam = self.family
        if isinstance(fam, Power):
            return t**fam.q
        if isinstance(fam, PowerLog):
            with np.errstate(divide="ignore", invalid="ignore"):
                val = t**fam.q * (1.0 - np.log(t)) ** fam.r
            return np.where(t > 0, val, 0.0)
        return np.clip(self._interp(t), 0.0, 1.0)

    def log2_fundamental(self, log2_t):
        """log2 of phi_M(t) = 1 / M^{-1}(1/t), with t = 2**log2_t."""
        log2_t = np.asarray(log2_t, dtype=float)
        fam = self.family
        if isinstance(fam, Power):
            out = log2_t / fam.q
        elif isinstance(fam, PowerLog):
            out = _powerlog_log2_fundamental(fam, log2_t)
        else:
            y = np.exp2(-log2_t)
            s = bisect_increasing_vec(self._eval_unit, y, 0.0, 1.0)
            with np.errstate(divide="ignore"):
                out = -np.log2(s)
        return out if out.ndim else float(out)

    @property
    def is_power(self):
        return isinstance(self.family, Power)


def _powerlog_log2_fundamental(fam, log2_t):
    # Solve q*u - r*ln(1+u) = log2_t*ln2 for u = ln(1/s); phi = e**u.
    c = np.maximum(log2_t, 0.0) * LN2

    def h(u):
        return fam.q * u - fam.r * np.log1p(u)

    hi = np.maximum(c / fam.q, 1.0)
    while True:
        short = h(hi) < c
        if not short.any():
            break
        hi = np.where(short, 2.0 * hi, hi)
    u = bisect_increasing_vec(h, c, 0.0, hi)
    return u / LN2


# -- validation -------------------------------------------------------------


@dataclass
class ValidationReport:
    descriptor: OrliczDescriptor
    failures: list = field(default_factory=list)  # (code, message, witness)

    @property
    def ok(self):
        return not self.failures

    def raise_for_failure(self):
        errors = {"EndpointMismatch": EndpointMismatch, "NonMonotone": NonMonotone,
                  "NotPConvex": NotPConvex}
        if self.failures:
            code, message, witness = self.failures[0]
            raise errors[code](message, witness=witness)

    def summary(self):
        checks = ["EndpointMismatch", "NonMonotone", "NotPConvex"]
        failed = {code for code, _, _ in self.failures}
        return {name: name not in failed for name in checks}


def validate_descriptor(M, grid_size=GRID_SIZE, strict=False):
    """Check M(0)=0, M(1)=1, strict monotonicity and p-convexity on a grid."""
    report = ValidationReport(M)
    t = np.linspace(0.0, 1.0, grid_size)
    m = M(t)
    if abs(m[0]) > ENDPOINT_TOL or abs(m[-1] - 1.0) > ENDPOINT_TOL:
        bad = 0.0 if abs(m[0]) > ENDPOINT_TOL else 1.0
        report.failures.append(
            ("EndpointMismatch", f"M({bad}) = {M(bad)!r}", bad))
    steps = np.diff(m)
    if (steps <= 0).any():
        i = int(np.argmax(steps <= 0))
        report.failures.append(
            ("NonMonotone", f"M not strictly increasing at t={t[i + 1]:.6g}", float(t[i + 1])))
    n_vals = M(t ** (1.0 / M.p))
    excess = n_vals[1:-1] - 0.5 * (n_vals[:-2] + n_vals[2:])
    if (excess > CONVEXITY_TOL).any():
        i = int(np.argmax(excess)) + 1
        report.failures.append(
            ("NotPConvex",
             f"M(t^(1/p)) fails midpoint convexity at t={t[i]:.6g} by {excess[i - 1]:.3g}",
             float(t[i])))
    if strict:
        report.raise_for_failure()
    return report


def fundamental_invariants(M, log2_max=64.0, points=1025):
    """phi(1)=1, phi non-decreasing, t**(1/p)/phi non-decreasing; returns failures."""
    u = np.linspace(0.0, log2_max, points)
    lphi = np.asarray(M.log2_fundamental(u))
    problems = []
    if abs(lphi[0]) > 1e-12:
        problems.append(("phi(1) != 1", 0.0))
    if (np.diff(lphi) < -1e-12).any():
        problems.append(("phi decreasing", float(u[np.argmax(np.diff(lphi) < -1e-12) + 1])))
    growth = u / M.p - lphi
    if (np.diff(growth) < -1e-9).any():
        problems.append(("t^(1/p)/phi decreasing", float(u[np.argmax(np.diff(growth) < -1e-9) + 1])))
    return problems


# -- scalar operations ------------------------------------------------------


def inverse_M(M, y):
    """Return t in [0, 1] with |M(t) - y| <= 1e-12."""
    if not (0.0 <= y <= 1.0) or math.isnan(y):
        raise OutOfDomain(f"inverse_M needs y in [0, 1], got {y}")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 1.0
    f = lambda t: float(M._eval_unit(np.array([t]))[0])
    return bisect_increasing(f, y, 0.0, 1.0, ftol=INVERSE_TOL, max_iter=400)


def fundamental(M, log2_t):
    """phi_M(2**log2_t); ``log2_t`` must be >= 0."""
    if log2_t < 0:
        raise OutOfDomain("fundamental function is defined for t >= 1")
    return 2.0 ** M.log2_fundamental(log2_t)


def luxemburg_norm(M, x):
    """inf{rho > 0 : sum M(|x_i|/rho) <= 1}."""
    return float(luxemburg_norm_rows(M, np.asarray(x, dtype=float).reshape(1, -1))[0])


def luxemburg_norm_rows(M, X, rtol=1e-10):
    """Luxemburg norm of every row of a 2-D array.

    Power functions use the closed form; everything else bisects rho in
    [max|x|, max|x| * n**(1/p)], where the lower end is exact because
    M(1) = 1 and the upper end is feasible because M(s) <= s**p.
    """
    X = np.abs(np.asarray(X, dtype=float))
    if X.ndim == 1:
        X = X[None, :]
    top = X.max(axis=1) if X.shape[1] else np.zeros(X.shape[0])
    out = np.zeros(X.shape[0])
    live = top > 0
    if not live.any():
        return out
    Xl, tl = X[live], top[live]
    if isinstance(M.family, Power):
        q = M.family.q
        # rescale before powering to avoid under/overflow
        out[live] = tl * ((Xl / tl[:, None]) ** q).sum(axis=1) ** (1.0 / q)
        return out
    n = X.shape[1]
    S = Xl / tl[:, None]  # rho = top * r, r in [1, n**(1/p)]

    def total(r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return M(S / r[:, None]).sum(axis=1)

    lo = np.ones(len(tl))
    hi = np.full(len(tl), float(n) ** (1.0 / M.p))
    # total is non-increasing in r; bisect on -total
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ((hi - lo) <= rtol * 0.5).all():
            break
        ok = total(mid) <= 1.0
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    out[live] = tl * hi
    return out


def weak_lp_norm(x, p):
    """sup_i i**(1/p) * x*_i over the non-increasing rearrangement of |x|."""
    xs = np.sort(np.abs(np.asarray(x, dtype=float)))[::-1]
    if xs.size == 0:
        return 0.0
    i = np.arange(1, xs.size + 1, dtype=float)
    return float(np.max(i ** (1.0 / p) * xs))


@dataclass
class RatioReport:
    ok: bool
    witness: tuple = None  # (log2_t_a, log2_t_b, ratio_a, ratio_b) at first decrease
    grid_size: int = 0


def ratio_monotone_check(M1, M2, grid_size=4096, log2_max=64.0, rtol=1e-12):
    """Is phi_M1 / phi_M2 non-decreasing on a geometric grid of [1, 2**64]?"""
    u = np.linspace(0.0, log2_max, grid_size)
    lr = np.asarray(M1.log2_fundamental(u)) - np.asarray(M2.log2_fundamental(u))
    drops = np.diff(lr) < math.log2(1.0 - rtol)
    if drops.any():
        i = int(np.argmax(drops))
        w = (float(u[i]), float(u[i + 1]), float(2.0 ** lr[i]), float(2.0 ** lr[i + 1]))
        return RatioReport(False, w, grid_size)
    return RatioReport(True, None, grid_size)


def common_p(*descriptors):
    """Largest exponent for which every descriptor is p-convex."""
    return min(d.p for d in descriptors)


def power(q, p=None):
    """Shorthand: Power(q) with p = min(q, 1) unless given."""
    return OrliczDescriptor(Power(float(q)), min(float(q), 1.0) if p is None else float(p))
