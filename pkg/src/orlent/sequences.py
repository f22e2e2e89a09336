"""Non-increasing generating sequences, evaluated in the log2-index domain.

``seq.at(u)`` returns alpha_i for i = 2**u, so indices up to 2**(k-1) never
overflow. Logarithms inside the families are base 2.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import NegativeIndex, OutOfDomain, RatioNotMonotone
from .orlicz import common_p, ratio_monotone_check

LOG2E = math.log2(math.e)
GRID_POINTS = 4096


def _log2_index_plus_one(u):
    # log2(2**u + 1), stable for large u
    return u + np.log1p(np.exp2(-u)) * LOG2E


def _check_index(u):
    u = np.asarray(u, dtype=float)
    if (u < 0).any():
        raise NegativeIndex("log2 index must be >= 0")
    return u


class DecaySequence:
    """Base class; subclasses implement ``_at`` on a float array of log2 indices."""

    def at(self, log2_index):
        u = _check_index(log2_index)
        out = np.asarray(self._at(u), dtype=float)
        return out if out.ndim else float(out)

    __call__ = at

    def at_index(self, i):
        """alpha_i for a positive integer (or array of integers) i."""
        i = np.asarray(i, dtype=float)
        if (i < 1).any():
            raise NegativeIndex("sequence indices start at 1")
        return self.at(np.log2(i))

    def log2_at(self, log2_index):
        """log2 alpha, exact for families that avoid underflow (-inf for zeros)."""
        u = _check_index(log2_index)
        if hasattr(self, "_log2_at"):
            out = np.asarray(self._log2_at(u), dtype=float)
        else:
            with np.errstate(divide="ignore"):
                out = np.log2(np.asarray(self._at(u), dtype=float))
        return out if out.ndim else float(out)

    def doubling_constant(self):
        """Analytic C with alpha_i <= C alpha_{2i}, or None if unknown."""
        return None


@dataclass(frozen=True)
class ConstantHead(DecaySequence):
    """``value`` on indices i <= 2**head_len_log2, zero beyond (inf: constant)."""

    value: float = 1.0
    head_len_log2: float = math.inf

    def __post_init__(self):
        if self.value < 0:
            raise OutOfDomain("ConstantHead value must be non-negative")

    def _at(self, u):
        return np.where(u <= self.head_len_log2 + 1e-12, self.value, 0.0)

    def doubling_constant(self):
        return 1.0 if math.isinf(self.head_len_log2) or self.value == 0 else None


@dataclass(frozen=True)
class Polynomial(DecaySequence):
    """alpha_i = i**(-theta)."""

    theta: float

    def __post_init__(self):
        if self.theta < 0:
            raise OutOfDomain("Polynomial theta must be >= 0")

    def _at(self, u):
        return np.exp2(-self.theta * u)

    def _log2_at(self, u):
        return -self.theta * u

    def doubling_constant(self):
        return 2.0**self.theta


@dataclass(frozen=True)
class ExpLog(DecaySequence):
    """alpha_i = exp(-beta * log2(i+1)**vartheta)."""

    beta: float
    vartheta: float

    def __post_init__(self):
        if not self.beta > 0 or not 0 < self.vartheta < 1:
            raise OutOfDomain("ExpLog needs beta > 0 and 0 < vartheta < 1")

    def _at(self, u):
        return np.exp(-self.beta * _log2_index_plus_one(u) ** self.vartheta)

    def _log2_at(self, u):
        return -self.beta * LOG2E * _log2_index_plus_one(u) ** self.vartheta

    def doubling_constant(self):
        return 2.0 ** (self.beta * self.vartheta * LOG2E)


@dataclass(frozen=True)
class LogDecay(DecaySequence):
    """alpha_i = log2(i+1)**(-theta)."""

    theta: float

    def __post_init__(self):
        if not self.theta > 0:
            raise OutOfDomain("LogDecay theta must be positive")

    def _at(self, u):
        return _log2_index_plus_one(u) ** (-self.theta)

    def _log2_at(self, u):
        return -self.theta * np.log2(_log2_index_plus_one(u))

    def doubling_constant(self):
        return 2.0**self.theta


@dataclass(frozen=True)
class Table(DecaySequence):
    """Explicit alpha_1..alpha_n, then ``tail`` for every later index."""

    values: tuple
    tail: float = 0.0

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise OutOfDomain("Table needs at least one value")
        if any(v < 0 for v in vals) or self.tail < 0:
            raise OutOfDomain("Table values must be non-negative")
        if any(b > a for a, b in zip(vals, vals[1:])) or self.tail > vals[-1]:
            raise OutOfDomain("Table values must be non-increasing (tail included)")
        object.__setattr__(self, "values", vals)

    def _at(self, u):
        n = len(self.values)
        i = np.floor(np.exp2(np.minimum(u, math.log2(n + 1.0))) + 1e-9).astype(np.int64)
        arr = np.append(np.asarray(self.values), self.tail)
        return arr[np.minimum(i, n + 1) - 1]

    def doubling_constant(self):
        vals = np.append(np.asarray(self.values), self.tail)
        n = len(self.values)
        if self.tail == 0 and vals[-2] > 0:
            return None
        worst = 1.0
        for i in range(1, n + 1):
            a, b = vals[i - 1], vals[min(2 * i, n + 1) - 1]
            if a > 0:
                worst = max(worst, a / b) if b > 0 else math.inf
        return None if math.isinf(worst) else worst


@dataclass(frozen=True)
class Majorant(DecaySequence):
    """Three-regime majorant sigma_j used in the upper-bound construction.

    sigma_j = 2**(-7/p) * phi1(t)/phi2(t) with t = k for j <= k,
    t = k/log2(2j/k) for k <= j <= 2**(k-1), frozen beyond.
    """

    k: int
    M1: object = field(repr=False)
    M2: object = field(repr=False)
    p: float = 1.0

    def log2_argument(self, u):
        lk = math.log2(self.k)
        uu = np.minimum(u, self.k - 1)  # frozen tail
        return np.where(uu <= lk, lk, lk - np.log2(np.maximum(1.0 + uu - lk, 1.0)))

    def _at(self, u):
        lt = self.log2_argument(u)
        lr = np.asarray(self.M1.log2_fundamental(lt)) - np.asarray(self.M2.log2_fundamental(lt))
        return np.exp2(lr - 7.0 / self.p)


# -- operations -------------------------------------------------------------


def eval_alpha(seq, log2_index):
    return seq.at(log2_index)


@dataclass
class DoublingReport:
    ok: bool
    claimed_C: float
    worst_ratio: float
    witness_log2_index: float


def doubling_check(seq, claimed_C, log2_range=64.0, points=GRID_POINTS, rtol=1e-12):
    """Check alpha(u) <= C alpha(u+1) on a dense grid of log2 indices."""
    if claimed_C < 1:
        raise OutOfDomain("doubling constant must be >= 1")
    u = np.linspace(0.0, log2_range, points)
    a, b = np.asarray(seq.at(u)), np.asarray(seq.at(u + 1.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(a == 0, 1.0, np.where(b == 0, np.inf, a / b))
    i = int(np.argmax(ratio))
    worst = float(ratio[i])
    return DoublingReport(worst <= claimed_C * (1 + rtol), float(claimed_C), worst, float(u[i]))


def check_monotone(seq, log2_range=64.0, points=GRID_POINTS, atol=1e-12):
    """(ok, witness) for non-increasing and non-negative on a log grid."""
    u = np.linspace(0.0, log2_range, points)
    a = np.asarray(seq.at(u))
    if (a < 0).any():
        return False, float(u[np.argmax(a < 0)])
    rises = np.diff(a) > atol
    if rises.any():
        return False, float(u[np.argmax(rises) + 1])
    return True, None


def majorant_sigma(k, M1, M2, p=None):
    """The non-increasing majorant built from the fundamental-function ratio."""
    if k < 1:
        raise OutOfDomain("k must be >= 1")
    report = ratio_monotone_check(M1, M2)
    if not report.ok:
        raise RatioNotMonotone("phi_M1/phi_M2 is not non-decreasing", witness=report.witness)
    return Majorant(int(k), M1, M2, common_p(M1, M2) if p is None else p)


@dataclass
class NetConditionReport:
    m: int
    checks: list  # (label, lhs, rhs, ok)

    @property
    def ok(self):
        return all(ok for *_, ok in self.checks)


def verify_net_conditions(seq, m, M1, M2, rtol=1e-12):
    """alpha_1 <= ratio(2**m) and alpha_{2**(m+2**(i-1))} <= ratio(2**(m-i)), i=1..m."""
    if m < 5:
        raise OutOfDomain("net conditions need m >= 5")

    def ratio(log2_t):
        return 2.0 ** (M1.log2_fundamental(log2_t) - M2.log2_fundamental(log2_t))

    checks = []
    lhs, rhs = seq.at(0.0), ratio(float(m))
    checks.append(("alpha_1", lhs, rhs, lhs <= rhs * (1 + rtol)))
    for i in range(1, m + 1):
        lhs = seq.at(float(m + 2 ** (i - 1)))
        rhs = ratio(float(m - i))
        checks.append((f"i={i}", lhs, rhs, lhs <= rhs * (1 + rtol)))
    return NetConditionReport(m, checks)
