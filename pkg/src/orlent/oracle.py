"""Brute-force entropy intervals for small diagonal maps l_M1^n -> l_M2^n.

The unit ball of l_M1^n is replaced by its lattice points (delta Z)^n. Every
ball point lies within l_inf distance delta of a lattice ball point (round
each coordinate toward zero), so after the diagonal map it lies within
``slack = delta * ||w||_M2`` of the image of that lattice point.

* Lower bound: lattice points are genuine ball points, so a 2r-separated
  packing of 2^(k-1)+1 image points certifies f_k >= r and
  e_k >= 2^(1-1/p) r with no discretisation correction.
* Upper bound: a greedy cover of the image lattice by 2^(k-1) balls of
  radius eps certifies e_k <= (eps^p + slack^p)^(1/p) by the p-triangle
  inequality.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import BudgetExceeded, Inconsistent, OutOfDomain
from .orlicz import common_p, luxemburg_norm, luxemburg_norm_rows, ratio_monotone_check, validate_descriptor

LATTICE_BUDGET = 10**7
MATRIX_POINTS = 6000
SWAP_BUDGET = 10**5
ROW_CHUNK = 256


def default_delta(n):
    if n <= 2:
        return 0.05
    if n == 3:
        return 0.1
    return 0.15


@dataclass(frozen=True)
class FiniteDiagonalInstance:
    M1: object
    M2: object
    weights: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if not 1 <= len(w) <= 6:
            raise OutOfDomain(f"oracle handles 1 <= n <= 6, got n={len(w)}")
        if any(v < 0 for v in w) or any(b > a for a, b in zip(w, w[1:])):
            raise OutOfDomain("weights must be non-negative and non-increasing")
        validate_descriptor(self.M1, strict=True)
        validate_descriptor(self.M2, strict=True)
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return len(self.weights)

    @property
    def p(self):
        return common_p(self.M1, self.M2)


def identity_instance(n, M1, M2=None):
    return FiniteDiagonalInstance(M1, M1 if M2 is None else M2, (1.0,) * n)


def discretize_ball(inst, delta):
    """All points of (delta Z)^n with sum M1(|x_i|) <= 1."""
    if not 0 < delta <= 1:
        raise OutOfDomain(f"delta must lie in (0, 1], got {delta}")
    steps = int(math.floor(1.0 / delta + 1e-9))
    side = 2 * steps + 1
    if side**inst.n > LATTICE_BUDGET:
        raise BudgetExceeded(f"lattice has {side**inst.n} points, budget {LATTICE_BUDGET}")
    axis = np.arange(-steps, steps + 1) * delta
    cost = inst.M1(axis)  # +inf past 1
    grids = np.meshgrid(*([axis] * inst.n), indexing="ij")
    total = sum(np.meshgrid(*([cost] * inst.n), indexing="ij"))
    keep = total <= 1.0 + 1e-12
    return np.stack([g[keep] for g in grids], axis=1)


def pairwise_distances(M2, Y):
    """Symmetric matrix of ||Y_i - Y_j||_M2."""
    P = len(Y)
    if P > MATRIX_POINTS:
        raise BudgetExceeded(f"{P} image points exceed the distance-matrix budget {MATRIX_POINTS}")
    D = np.zeros((P, P))
    for start in range(0, P, ROW_CHUNK):
        stop = min(start + ROW_CHUNK, P)
        diff = (Y[start:stop, None, :] - Y[None, :, :]).reshape(-1, Y.shape[1])
        D[start:stop] = luxemburg_norm_rows(M2, diff).reshape(stop - start, P)
    return np.maximum(D, D.T)


@dataclass
class _Prepared:
    scale: float
    Y: np.ndarray  # distinct image points of the normalised map
    D: np.ndarray
    slack: float
    points: int  # lattice points before deduplication
    cover_cache: dict = field(default_factory=dict)


def _prepare(inst, delta):
    w = np.asarray(inst.weights)
    scale = float(w[0])
    X = discretize_ball(inst, delta)
    Y = np.unique(X * (w / scale), axis=0)
    D = pairwise_distances(inst.M2, Y)
    slack = delta * luxemburg_norm(inst.M2, w / scale)
    return _Prepared(scale, Y, D, slack, len(X))


_CACHE = {}


def _prepared(inst, delta):
    key = (inst, float(delta))
    if key not in _CACHE:
        if len(_CACHE) > 16:
            _CACHE.clear()
        _CACHE[key] = _prepare(inst, delta)
    return _CACHE[key]


# -- packing ---------------------------------------------------------------


def _farthest_point(D, size, seed):
    chosen = [seed]
    dist = D[seed].copy()
    for _ in range(size - 1):
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, D[nxt])
    return chosen


def _min_pair(D, idx):
    sub = D[np.ix_(idx, idx)].copy()
    np.fill_diagonal(sub, np.inf)
    flat = int(np.argmin(sub))
    a, b = divmod(flat, len(idx))
    return float(sub[a, b]), a, b


def _two_swap(D, chosen, budget):
    """Swap an endpoint of the closest pair for an outside point while that raises the minimum."""
    idx = np.array(chosen)
    best, a, b = _min_pair(D, idx)
    moves = 0
    outside = np.ones(len(D), dtype=bool)
    outside[idx] = False
    while moves < budget:
        improved = False
        for drop in (a, b):
            rest = np.delete(idx, drop)
            sub = D[np.ix_(rest, rest)].copy()
            np.fill_diagonal(sub, np.inf)
            rest_min = float(sub.min()) if len(rest) > 1 else np.inf
            reach = D[np.ix_(np.flatnonzero(outside), rest)].min(axis=1)
            moves += len(reach)
            if not len(reach):
                continue
            j = int(np.argmax(reach))
            gain = min(rest_min, float(reach[j]))
            if gain > best * (1 + 1e-12):
                new = int(np.flatnonzero(outside)[j])
                outside[idx[drop]] = True
                outside[new] = False
                idx = np.append(rest, new)
                best, a, b = _min_pair(D, idx)
                improved = True
                break
        if not improved:
            break
    return best


def packing_separation(prep, k):
    """Largest min pairwise distance found among 2^(k-1)+1 image points (0 if too few)."""
    size = 2 ** (k - 1) + 1
    if size > len(prep.Y):
        return 0.0
    if size == 1:
        return math.inf
    origin = int(np.argmin(np.abs(prep.Y).sum(axis=1)))
    seed = int(np.argmax(prep.D[origin]))  # image point of largest norm
    chosen = _farthest_point(prep.D, size, seed)
    return _two_swap(prep.D, chosen, SWAP_BUDGET)


def packing_lower(inst, k, delta=None):
    """Certified lower bound for e_k from the inner entropy number f_k."""
    delta = default_delta(inst.n) if delta is None else delta
    if inst.weights[0] == 0:
        return 0.0
    prep = _prepared(inst, delta)
    d = packing_separation(prep, k)
    f = d / 2
    return prep.scale * 2.0 ** (1 - 1 / inst.p) * f


# -- covering --------------------------------------------------------------


def _greedy_centers(prep, eps, limit):
    """Number of greedy centers needed at radius eps, or limit+1 if more."""
    key = (eps, limit)
    if key in prep.cover_cache:
        return prep.cover_cache[key]
    A = prep.D <= eps
    gains = A.sum(axis=1)
    uncovered = np.ones(len(A), dtype=bool)
    used = 0
    while uncovered.any():
        if used == limit:
            used += 1
            break
        c = int(np.argmax(gains))  # ties go to the lowest index
        newly = A[c] & uncovered
        uncovered &= ~newly
        gains -= A[newly].sum(axis=0)
        used += 1
    prep.cover_cache[key] = used
    return used


def cover_radius(prep, k, hi=None, coarse=128):
    """Smallest candidate radius at which greedy covering uses <= 2^(k-1) centers.

    Greedy success is not monotone in the radius, so this scans upward:
    first over a coarse subset of the candidate radii, then through the gap
    below the first coarse success.
    """
    limit = 2 ** (k - 1)
    radii = np.unique(prep.D)
    if hi is not None:
        radii = radii[radii <= hi]

    def ok(i):
        return _greedy_centers(prep, float(radii[i]), limit) <= limit

    last = len(radii) - 1
    if not ok(last):
        raise Inconsistent("greedy cover fails at the bracket radius")
    marks = np.unique(np.linspace(0, last, min(coarse, last + 1)).astype(int))
    prev = -1
    for i in marks:
        if ok(i):
            break
        prev = i
    for j in range(prev + 1, i + 1):
        if ok(j):
            return float(radii[j])
    return float(radii[i])


def _cover_sweep(prep, k):
    eps = None
    for kk in range(1, k + 1):
        eps = cover_radius(prep, kk, eps)
    return eps


def greedy_cover_upper(inst, k, delta=None):
    """Certified upper bound for e_k: greedy cover radius combined with the cell slack."""
    delta = default_delta(inst.n) if delta is None else delta
    if inst.weights[0] == 0:
        return 0.0
    prep = _prepared(inst, delta)
    eps = _cover_sweep(prep, k)
    p = inst.M2.p
    return prep.scale * (eps**p + prep.slack**p) ** (1 / p)


# -- combined --------------------------------------------------------------


@dataclass
class EntropyInterval:
    k: int
    lower: float
    upper: float
    grid_delta: float
    packing_points: int
    cover_centers: int
    clamped: bool = False

    def to_json(self):
        return {"k": self.k, "lower": self.lower, "upper": self.upper,
                "delta": self.grid_delta, "points": self.packing_points,
                "centers": self.cover_centers, "clamped": self.clamped}


def operator_norm_bound(inst):
    """alpha_1 when phi1/phi2 is non-decreasing (then ||x||_M2 <= ||x||_M1), else None."""
    return inst.weights[0] if ratio_monotone_check(inst.M1, inst.M2).ok else None


def oracle_entropy(inst, k, delta=None):
    if k < 1:
        raise OutOfDomain("k must be >= 1")
    delta = default_delta(inst.n) if delta is None else delta
    if inst.weights[0] == 0:
        return EntropyInterval(k, 0.0, 0.0, delta, 0, 1)
    prep = _prepared(inst, delta)
    lower = packing_lower(inst, k, delta)
    upper = greedy_cover_upper(inst, k, delta)
    clamped = False
    norm = operator_norm_bound(inst)
    if norm is not None and upper > norm:
        upper, clamped = norm, True
    if lower > upper * (1 + 1e-12):
        raise Inconsistent(f"lower {lower} exceeds upper {upper} at k={k}", k=k)
    lower = min(lower, upper)  # rounding-level excess only
    return EntropyInterval(k, lower, upper, delta, len(prep.Y), 2 ** (k - 1), clamped)


def oracle_batch(inst, ks, delta=None):
    """Intervals for several k, tightened so both ends are non-increasing in k."""
    ks = sorted(set(int(k) for k in ks))
    rows = [oracle_entropy(inst, k, delta) for k in ks]
    for prev, cur in zip(rows, rows[1:]):
        cur.upper = min(cur.upper, prev.upper)
    for nxt, cur in zip(rows[::-1], rows[-2::-1]):
        cur.lower = max(cur.lower, nxt.lower)
    return rows
