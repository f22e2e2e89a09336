"""Bound functionals Theta, Lambda, Phi, the three-regime function A(n, k),
explicit constants, and certified entropy-number intervals.

All arithmetic on large quantities happens in base-2 logarithms. Arguments
of fundamental functions are passed as log2 values.
"""

from dataclasses import asdict, dataclass
import math

import numpy as np

from ._numeric import chunked_map
from .errors import HypothesisViolated, OutOfDomain
from .orlicz import common_p, ratio_monotone_check
from .sequences import doubling_check

EXACT_THETA_MAX_K = 24
GRID_PER_UNIT = 64
CHUNK = 1 << 20


def _log2_ratio(M1, M2, log2_t):
    """log2(phi_M2(t) / phi_M1(t))."""
    return np.asarray(M2.log2_fundamental(log2_t)) - np.asarray(M1.log2_fundamental(log2_t))


def _exp2(x):
    return 2.0**x if x < 1023.0 else math.inf


# -- Lambda, Theta, Phi ----------------------------------------------------


def log2_lambda_terms(seq, M1, M2, k):
    s = np.arange(1, k + 1, dtype=float)
    lk = math.log2(k)
    return np.asarray(seq.log2_at(lk + s - 1.0)) + _log2_ratio(M1, M2, lk - np.log2(s))


def lambda_bound(seq, M1, M2, k):
    """max_{s=1..k} alpha_{k 2^(s-1)} phi2(k/s)/phi1(k/s)."""
    if k < 1:
        raise OutOfDomain("k must be >= 1")
    return float(np.exp2(np.max(log2_lambda_terms(seq, M1, M2, int(k)))))


@dataclass
class ThetaResult:
    value: float
    mode: str  # "exact" or "grid"
    grid_delta: float = 0.0
    argmax_log2_n: float = 0.0


def _theta_objective(seq, M1, M2, k, log2_n):
    lk = math.log2(k)
    # log2(2n/k) = 1 + log2 n - log2 k
    lt = lk - np.log2(1.0 + log2_n - lk)
    return np.asarray(seq.log2_at(log2_n)) + _log2_ratio(M1, M2, lt)


def theta_bound(seq, M1, M2, k, mode="auto"):
    """max_{k <= n <= 2^(k-1)} alpha_n phi2(k/log(2n/k)) / phi1(.).

    ``exact`` enumerates every integer n (k <= 24 by default); ``grid``
    parametrises n = k 2^u with 64 points per unit of u, which includes
    every Lambda anchor u = s - 1.
    """
    k = int(k)
    if k < 1:
        raise OutOfDomain("k must be >= 1")
    if mode == "auto":
        mode = "exact" if k <= EXACT_THETA_MAX_K else "grid"
    if mode == "exact":
        hi_n = 1 << (k - 1)
        starts = list(range(k, hi_n + 1, CHUNK))

        def run(start):
            n = np.arange(start, min(start + CHUNK, hi_n + 1), dtype=float)
            vals = _theta_objective(seq, M1, M2, k, np.log2(n))
            i = int(np.argmax(vals))
            return float(vals[i]), float(np.log2(n[i]))

        best = max(chunked_map(run, starts))
        return ThetaResult(_exp2(best[0]), "exact", 0.0, best[1])
    if mode != "grid":
        raise OutOfDomain(f"unknown theta mode {mode!r}")
    lk = math.log2(k)
    u_max = (k - 1) - lk
    total = int(math.floor(u_max * GRID_PER_UNIT)) + 1
    starts = list(range(0, total, CHUNK))

    def run_grid(start):
        u = np.arange(start, min(start + CHUNK, total), dtype=float) / GRID_PER_UNIT
        if start + CHUNK >= total:
            u = np.append(u, u_max)
        vals = _theta_objective(seq, M1, M2, k, lk + u)
        i = int(np.argmax(vals))
        return float(vals[i]), float(lk + u[i])

    best = max(chunked_map(run_grid, starts))
    return ThetaResult(_exp2(best[0]), "grid", 1.0 / GRID_PER_UNIT, best[1])


def phi_bound_logdecay(theta, M1, M2, k):
    """max over integer s in [log2(2k), k] of log2(2^(s-1)+1)^(-theta) phi2(k/s)/phi1(k/s)."""
    if k < 1:
        raise OutOfDomain("k must be >= 1")
    s_lo = math.ceil(math.log2(2 * k) - 1e-12)
    s = np.arange(s_lo, k + 1, dtype=float) if s_lo <= k else np.array([float(k)])
    la = -theta * np.log2(s - 1.0 + np.log1p(np.exp2(1.0 - s)) / math.log(2.0))
    vals = la + _log2_ratio(M1, M2, math.log2(k) - np.log2(s))
    return float(np.exp2(np.max(vals)))


# -- three-regime function -------------------------------------------------


@dataclass(frozen=True)
class RegimeValue:
    n: int
    k: int
    value: float
    regime: str  # Small | Middle | Large


def schutt_A(n, k, M1, M2):
    """1 (k <= log 2n); phi2(k/log(2n/k))/phi1(.) (k <= n); 2^(-k/n) phi2(n)/phi1(n)."""
    if n < 1 or k < 1:
        raise OutOfDomain("n and k must be >= 1")
    if k <= math.log2(2 * n) + 1e-12:
        return RegimeValue(n, k, 1.0, "Small")
    if k <= n:
        lt = math.log2(k) - math.log2(math.log2(2 * n / k))
        return RegimeValue(n, k, float(2.0 ** _log2_ratio(M1, M2, lt)), "Middle")
    return RegimeValue(n, k, float(2.0 ** (-k / n + _log2_ratio(M1, M2, math.log2(n)))), "Large")


def closed_form_lpq(theta, p0, q0, k):
    """k^(-theta) if theta <= 1/p0 - 1/q0, else k^(1/q0-1/p0) (log 2k)^(1/p0-1/q0-theta)."""
    if not (0 < p0 < q0) or not theta > 0 or k < 1:
        raise OutOfDomain("closed form needs 0 < p0 < q0, theta > 0, k >= 1")
    gap = 1.0 / p0 - 1.0 / q0
    if theta <= gap:
        return float(k) ** (-theta)
    return float(k) ** (-gap) * math.log2(2 * k) ** (gap - theta)


# -- constants -------------------------------------------------------------

# Exponents of the 2^(e/p) factors; kept in one table so that a mutation of
# any entry is caught by the constants cross-check in ``orlent.verify``.
EXPONENTS = {
    "MainTheorem": (19, 19),
    "IntroForm": (21, 20),
    "SchuttLower": (19, 19),
    "DiagonalNet": (None, 12),
    "PolyDecay": (None, 11),
    "DoublingCor": (21, 22, 14),
}


def _log2_lower(p, e):
    # 4^-2 2^(-e/p) (log(24/p))^(-2/p) (1/p)^(-1/p)
    return -4.0 - e / p - (2.0 / p) * math.log2(math.log2(24.0 / p)) - (1.0 / p) * math.log2(1.0 / p)


def _log2_upper(p, e):
    # 4 2^(e/p) (log(24/p))^(2/p) (1/p)^(1/p)
    return 2.0 + e / p + (2.0 / p) * math.log2(math.log2(24.0 / p)) + (1.0 / p) * math.log2(1.0 / p)


def _log2_shifted_upper(r, e):
    # 4 2^(e r) (log(24 r))^(2r) r^r with r = 1/p + shift
    return 2.0 + e * r + 2.0 * r * math.log2(math.log2(24.0 * r)) + r * math.log2(r)


@dataclass(frozen=True)
class ConstantPair:
    c1: float
    c2: float
    c1_log2: float
    c2_log2: float
    source: str


def constants(p, which, alpha=0.0, C=1.0):
    """Closed-form constants (c1, c2) of the cited results, with their log2.

    ``which``: MainTheorem, IntroForm, SchuttLower, DiagonalNet,
    PolyDecay (uses ``alpha``) or DoublingCor (uses ``C``). Upper-only
    results report c1 = 0 (log2 = -inf).
    """
    if not (0.0 < p <= 1.0):
        raise OutOfDomain(f"p must lie in (0, 1], got {p}")
    if which in ("MainTheorem", "IntroForm", "SchuttLower"):
        lo_e, hi_e = EXPONENTS[which]
        l1, l2 = _log2_lower(p, lo_e), _log2_upper(p, hi_e)
    elif which == "DiagonalNet":
        l1, l2 = -math.inf, _log2_upper(p, EXPONENTS[which][1])
    elif which == "PolyDecay":
        if alpha < 0:
            raise OutOfDomain("PolyDecay needs alpha >= 0")
        l1, l2 = -math.inf, _log2_shifted_upper(1.0 / p + alpha, EXPONENTS[which][1])
    elif which == "DoublingCor":
        if C < 1:
            raise OutOfDomain("DoublingCor needs C >= 1")
        lo_e, hi_e, c_e = EXPONENTS[which]
        r = 1.0 / p + C
        l1 = _log2_lower(p, lo_e)
        l2 = (2.0 + math.log2(C) + hi_e / p + c_e * C
              + 2.0 * r * math.log2(math.log2(24.0 * r)) + r * math.log2(r))
    else:
        raise OutOfDomain(f"unknown constant family {which!r}")
    c1 = 0.0 if l1 == -math.inf else _exp2(l1)
    return ConstantPair(c1, _exp2(l2), l1, l2, which)


# -- certified interval ----------------------------------------------------


@dataclass
class BoundReport:
    k: int
    theta: float
    theta_mode: str
    theta_grid_delta: float
    lambda_: float
    constants: ConstantPair
    interval: tuple  # (lo, hi) or None when no hypothesis holds
    hypothesis_path: str  # head_condition | doubling | none
    doubling_C: float = None

    def interval_log2(self):
        if self.interval is None:
            return None, None
        base = self.theta if self.hypothesis_path == "head_condition" else self.lambda_
        lb = math.log2(base) if base > 0 else -math.inf
        return self.constants.c1_log2 + lb, self.constants.c2_log2 + lb

    def to_json(self):
        lo_log2, hi_log2 = self.interval_log2()
        lo, hi = self.interval if self.interval is not None else (None, None)
        return {
            "k": self.k,
            "theta": self.theta,
            "theta_mode": self.theta_mode,
            "theta_grid_delta": self.theta_grid_delta,
            "lambda": self.lambda_,
            "c1": self.constants.c1,
            "c2": self.constants.c2,
            "c1_log2": self.constants.c1_log2,
            "c2_log2": self.constants.c2_log2,
            "constants_source": self.constants.source,
            "interval_lo": lo,
            "interval_hi": hi,
            "interval_lo_log2": lo_log2,
            "interval_hi_log2": hi_log2,
            "hypothesis_path": self.hypothesis_path,
            "doubling_C": self.doubling_C,
        }


def head_condition_holds(seq, k, rtol=1e-12):
    a1, ak = seq.at(0.0), seq.at(math.log2(k))
    return abs(a1 - ak) <= rtol * max(abs(a1), 1e-300)


def effective_doubling_constant(seq):
    C = seq.doubling_constant()
    if C is None:
        worst = doubling_check(seq, 1.0).worst_ratio
        C = worst if math.isfinite(worst) else None
    return C


def sandwich_report(seq, M1, M2, k, p=None, use_head_condition=False, doubling_C=None,
                    theta_mode="auto"):
    """Theta, Lambda, constants and the certified interval for e_k(T_alpha).

    Head condition (alpha_1 = alpha_k) gives MainTheorem constants times
    Theta; otherwise the doubling condition gives DoublingCor constants
    times Lambda. Neither: no interval.
    """
    p = common_p(M1, M2) if p is None else p
    if not (0.0 < p <= common_p(M1, M2)):
        raise HypothesisViolated("p_convexity", f"p={p} exceeds the descriptors' exponent")
    if not ratio_monotone_check(M1, M2).ok:
        raise HypothesisViolated("ratio_monotone")
    head_ok = head_condition_holds(seq, k)
    if use_head_condition and not head_ok:
        raise HypothesisViolated("head_condition", f"alpha_1 != alpha_{k}")
    th = theta_bound(seq, M1, M2, k, theta_mode)
    lam = lambda_bound(seq, M1, M2, k)
    if head_ok:
        cp = constants(p, "MainTheorem")
        return BoundReport(k, th.value, th.mode, th.grid_delta, lam, cp,
                           (cp.c1 * th.value, cp.c2 * th.value), "head_condition")
    C = doubling_C if doubling_C is not None else effective_doubling_constant(seq)
    if C is not None and doubling_check(seq, max(C, 1.0)).ok:
        cp = constants(p, "DoublingCor", C=max(C, 1.0))
        return BoundReport(k, th.value, th.mode, th.grid_delta, lam, cp,
                           (cp.c1 * lam, cp.c2 * lam), "doubling", max(C, 1.0))
    cp = ConstantPair(math.nan, math.nan, math.nan, math.nan, "none")
    return BoundReport(k, th.value, th.mode, th.grid_delta, lam, cp, None, "none")


def report_dict(report):
    return asdict(report)
