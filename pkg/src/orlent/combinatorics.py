"""Constructive nets and counting bounds: constant-weight codes with large
symmetric difference, the implicit lattice net Omega, family counts, the
y/z ball decomposition, and standalone inequality checks.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import (BlockSizeViolated, ConstructionExhausted, Intractable, LengthMismatch,
                     NormExceedsOne, NotInW, OutOfDomain, PreconditionViolated,
                     SizeBoundViolated)
from .orlicz import luxemburg_norm

DEFAULT_SEED = 0xC0FFEE
MAX_RETRIES = 8
TUPLE_LIMIT = 10**7
LOG2E = math.log2(math.e)


# -- code family -----------------------------------------------------------


@dataclass
class CodeFamily:
    n: int
    s: int
    k: int
    members: list  # sorted tuples of 1-based indices

    def to_json(self):
        return {"n": self.n, "s": self.s, "k": self.k,
                "members": [list(m) for m in self.members]}


@dataclass
class CodeVerification:
    ok: bool
    pairs_checked: int
    worst_distance: int
    worst_pair: tuple = None
    bad_sizes: list = field(default_factory=list)

    def to_json(self):
        return {"pass": self.ok, "pairs_checked": self.pairs_checked,
                "worst_distance": self.worst_distance,
                "worst_pair": list(self.worst_pair) if self.worst_pair else None,
                "bad_sizes": self.bad_sizes}


def code_parameters(n, k):
    """(s, target): s is the integer with k/log(2n/k) < s <= 1 + k/log(2n/k)."""
    if not (4 * math.log2(2 * n) <= k <= n / 5):
        raise PreconditionViolated(
            f"need 4 log(2n) <= k <= n/5; got n={n}, k={k} "
            f"(bounds {4 * math.log2(2 * n):.4g}, {n / 5:.4g})", n=n, k=k)
    s = math.floor(k / math.log2(2 * n / k)) + 1
    return s, math.ceil(2.0 ** (k / 4))


def build_code_family(n, k, seed=DEFAULT_SEED, retries=MAX_RETRIES, max_candidates=None):
    """Greedy family of s-subsets of {1..n} with pairwise symmetric difference >= s.

    Candidates come from a seeded pseudorandom stream and are accepted in
    stream order. A stream that runs dry before reaching 2^(k/4) members is
    replaced by a fresh one, up to ``retries`` times.
    """
    s, target = code_parameters(n, k)
    max_inter = s // 2  # |A ^ B| = 2s - 2|A & B| >= s
    budget = max_candidates or 200 * target
    best = 0
    for attempt in range(retries + 1):
        rng = np.random.default_rng([seed, attempt])
        accepted = np.zeros((target, n), dtype=np.int16)
        count = 0
        for _ in range(budget):
            cand = rng.choice(n, size=s, replace=False)
            if count and accepted[:count, cand].sum(axis=1).max() > max_inter:
                continue
            accepted[count, cand] = 1
            count += 1
            if count == target:
                members = [tuple(int(i) + 1 for i in np.flatnonzero(row)) for row in accepted]
                return CodeFamily(n, s, k, members)
        best = max(best, count)
    raise ConstructionExhausted(f"best family had {best} of {target} members",
                                best_size=best, target=target)


def verify_code_family(family):
    """Exhaustive pairwise check with Python-integer bitsets."""
    masks = []
    bad = []
    for idx, m in enumerate(family.members):
        if len(set(m)) != family.s or any(not 1 <= i <= family.n for i in m):
            bad.append(idx)
        masks.append(sum(1 << (i - 1) for i in set(m)))
    worst, witness, pairs = None, None, 0
    for a in range(len(masks)):
        ma = masks[a]
        for b in range(a + 1, len(masks)):
            d = (ma ^ masks[b]).bit_count()
            pairs += 1
            if worst is None or d < worst:
                worst, witness = d, (a, b)
    worst = family.s * 2 if worst is None else worst
    return CodeVerification(not bad and worst >= family.s, pairs, worst, witness, bad)


# -- lattice net Omega -----------------------------------------------------


def psi(m, j):
    return 2.0 ** (m - j - 4) / (m - j) ** 2


def thresholds(m):
    """2^psi(m, j) for j = 0..m-5."""
    return np.array([2.0 ** psi(m, j) for j in range(m - 4)])


def _rank_levels(count):
    # rank r (1-based) -> j with 2^(j-1) < r <= 2^j; rank 1 -> 0
    r = np.arange(1, count + 1)
    return np.ceil(np.log2(r)).astype(int)


def _check_length(x, m):
    x = np.asarray(x, dtype=float)
    if m < 5:
        raise OutOfDomain("Omega needs m >= 5")
    if x.shape != (2**m,):
        raise LengthMismatch(f"expected length {2**m}, got {x.shape}")
    return x


def _ranking(x):
    # indices by decreasing |x|, ties to the lowest index
    return np.lexsort((np.arange(x.size), -np.abs(x)))


def w_membership(x, m):
    """x*_{floor(2^(j-1))+1} <= 2^psi(m, j) for every j = 0..m-5."""
    x = _check_length(x, m)
    xs = np.sort(np.abs(x))[::-1]
    for j, t in enumerate(thresholds(m)):
        if xs[int(math.floor(2.0 ** (j - 1)))] > t:
            return False
    return True


def omega_quantize(x, m):
    """Nearest element of Omega to x in the canonical chain given by the ranks of x."""
    x = _check_length(x, m)
    if not w_membership(x, m):
        raise NotInW("x violates a rank threshold of W(m)")
    top = 2 ** (m - 5)
    order = _ranking(x)[:top]
    caps = 4.0 * np.floor(thresholds(m)[_rank_levels(top)] / 4.0)
    z = np.zeros(x.size, dtype=np.int64)
    vals = np.clip(4.0 * np.round(x[order] / 4.0), -caps, caps)
    z[order] = vals.astype(np.int64)
    return z


def omega_membership(z, m):
    """Independent predicate: multiples of 4, at most 2^(m-5) nonzeros, rank caps."""
    z = np.asarray(z)
    if z.shape != (2**m,) or m < 5:
        return False
    if not np.issubdtype(z.dtype, np.integer):
        if not np.all(z == np.round(z)):
            return False
        z = z.astype(np.int64)
    if np.any(z % 4):
        return False
    top = 2 ** (m - 5)
    if np.count_nonzero(z) > top:
        return False
    zs = np.sort(np.abs(z))[::-1][:top]
    return bool(np.all(zs <= thresholds(m)[_rank_levels(top)]))


def log2_binomial(n, r):
    return (math.lgamma(n + 1) - math.lgamma(r + 1) - math.lgamma(n - r + 1)) / math.log(2)


@dataclass(frozen=True)
class OmegaCardBreakdown:
    m: int
    q_log2: float  # sum of psi over the rank levels
    q_chain_log2: float  # telescoped bound 2^(m-5) (1/m^2 - 1/m + 1/4), or 2/25 at m=5
    gamma_log2: float  # log2 of the product of binomials
    gamma_stirling_log2: float
    total_log2: float
    limit_log2: float

    @property
    def ok(self):
        return self.total_log2 <= self.limit_log2


def omega_card_breakdown(m):
    if m < 5:
        raise OutOfDomain("Omega needs m >= 5")
    if m == 5:
        q = q_chain = psi(5, 0)
    else:
        q = 2.0 ** (m - 5) * (2.0 / m**2 + sum(1.0 / a**2 for a in range(5, m)))
        q_chain = 2.0 ** (m - 5) * (1.0 / m**2 - 1.0 / m + 0.25)
    gamma = log2_binomial(2**m, 2 ** (m - 5)) + sum(
        log2_binomial(2 ** (j + 1), 2**j) for j in range(m - 5))
    gamma_st = -1.0 + 2.0**m * (5.0 / 32 + LOG2E / 32) + 2.0 ** (m - 4)
    total = q_chain + gamma_st
    return OmegaCardBreakdown(m, q, q_chain, gamma, gamma_st, total, 2.0 ** (m - 1) - 1)


def omega_log_card_bound(m):
    """log2 bound on the size of Omega from the Q and Gamma counts."""
    b = omega_card_breakdown(m)
    if not b.ok:
        raise SizeBoundViolated(f"log2 bound {b.total_log2} exceeds {b.limit_log2}")
    return b.total_log2


# -- family count ----------------------------------------------------------


def _feasible_tuples(m, caps):
    # every (f_0..f_m) with f_i <= caps[i] and sum f_i 2^i <= 2^m
    budget = 2**m
    tup = [0] * (m + 1)

    def rec(i, left):
        if i < 0:
            yield tuple(tup)
            return
        for f in range(min(caps[i], left >> i) + 1):
            tup[i] = f
            yield from rec(i - 1, left - (f << i))
        tup[i] = 0

    yield from rec(m, budget)


def _count_tuples(m, caps):
    # number of feasible tuples, as a float; sliding window per residue class
    size = 2**m + 1
    ways = np.ones(size)  # tuples over processed coordinates with weight <= b
    for i in range(m + 1):
        w = 1 << i
        rows = -(-size // w)
        grid = np.zeros(rows * w)
        grid[:size] = ways
        grid = grid.reshape(rows, w)
        csum = np.cumsum(grid, axis=0)
        span = min(caps[i], rows - 1) + 1
        shifted = np.zeros_like(csum)
        shifted[span:] = csum[:-span]
        ways = (csum - shifted).ravel()[:size]
    return float(ways[-1])


def count_family_F_dp(m, set_sizes):
    """Same count by dynamic programming over the remaining weight budget."""
    budget = 2**m
    table = [1] * (budget + 1)
    for i in range(m + 1):
        w = 1 << i
        new = [0] * (budget + 1)
        for b in range(budget + 1):
            new[b] = sum(math.comb(set_sizes[i], f) * table[b - f * w]
                         for f in range(min(set_sizes[i], b // w) + 1))
        table = new
    return table[budget]


def count_family_F(m, set_sizes, limit=TUPLE_LIMIT):
    """Number of (F_0..F_m), F_i subset of E_i, with sum #F_i 2^(i-m) <= 1.

    Returns (count, log2(count) <= 2^(m+3)).
    """
    sizes = [int(s) for s in set_sizes]
    if m < 0 or len(sizes) != m + 1:
        raise SizeBoundViolated(f"need m+1 = {m + 1} set sizes, got {len(sizes)}")
    for i, s in enumerate(sizes):
        if s < 0 or s > 2 ** (m + 2**i):
            raise SizeBoundViolated(f"#E_{i} = {s} exceeds 2^(m+2^i) = {2 ** (m + 2**i)}")
    if m > 24:
        raise Intractable(f"m={m} is beyond desk scale")
    n_tuples = _count_tuples(m, sizes)
    if n_tuples > limit:
        raise Intractable(f"{n_tuples} feasible size tuples exceed the {limit} cap",
                          tuples=n_tuples)
    total = 0
    for tup in _feasible_tuples(m, sizes):
        prod = 1
        for size, f in zip(sizes, tup):
            prod *= math.comb(size, f)
        total += prod
    return total, math.log2(total) <= 2 ** (m + 3)


# -- y/z decomposition -----------------------------------------------------


def omega_weights(m, M1, M2):
    """omega_i = phi1(2^(m-i))/phi2(2^(m-i)) for i <= m, omega_{m+1} = 1."""
    u = np.arange(m, -1, -1, dtype=float)
    w = np.exp2(np.asarray(M1.log2_fundamental(u)) - np.asarray(M2.log2_fundamental(u)))
    return np.append(w, 1.0)


@dataclass
class SplitResult:
    m: int
    F: list  # per block, indices j in E_i with M1(|xi_ij|) >= 2^(i-m)
    y: list
    z: list
    weighted_count: float  # sum #F_i 2^(i-m)
    tz_norm: float = None  # ||T_omega z|| in l_M2 when M2 is given

    @property
    def ok(self):
        good = self.weighted_count <= 1.0 + 1e-12
        if self.tz_norm is not None:
            good = good and self.tz_norm <= 1.0 + 1e-9
        return good


def split_decompose(blocks, m, M1, M2=None, tol=1e-12):
    """Split x = y + z by large entries per block E_0..E_{m+1}."""
    if len(blocks) != m + 2:
        raise BlockSizeViolated(f"expected {m + 2} blocks E_0..E_(m+1), got {len(blocks)}")
    blocks = [np.asarray(b, dtype=float).ravel() for b in blocks]
    for i, b in enumerate(blocks[:-1]):
        if b.size > 2 ** (m + 2**i):
            raise BlockSizeViolated(f"#E_{i} = {b.size} exceeds 2^(m+2^i)")
    flat = np.concatenate(blocks)
    norm = luxemburg_norm(M1, flat) if flat.size else 0.0
    if norm > 1.0 + tol:
        raise NormExceedsOne(f"||x||_M1 = {norm} > 1", norm=norm)
    F, y, z = [], [], []
    weighted = 0.0
    for i, b in enumerate(blocks):
        big = M1(b) >= 2.0 ** (i - m)
        F.append(np.flatnonzero(big))
        y.append(np.where(big, b, 0.0))
        z.append(np.where(big, 0.0, b))
        if i <= m:
            weighted += big.sum() * 2.0 ** (i - m)
    tz = None
    if M2 is not None:
        w = omega_weights(m, M1, M2)
        tz = luxemburg_norm(M2, np.concatenate([w[i] * zi for i, zi in enumerate(z)]))
    return SplitResult(m, F, y, z, weighted, tz)


# -- inequality checks -----------------------------------------------------


@dataclass
class CheckResult:
    name: str
    ok: bool
    worst_margin: float
    witness: object = None


@dataclass
class LemmaReport:
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def to_json(self):
        return [{"name": c.name, "pass": c.ok, "worst_margin": c.worst_margin,
                 "witness": c.witness} for c in self.checks]


def sqrt_inequality_margin(x):
    """sqrt(x) log(2x) / (4 (1 + log(2x)/34)) - 1/(8 sqrt x) - sqrt 2."""
    x = np.asarray(x, dtype=float)
    l2 = np.log2(2 * x)
    return np.sqrt(x) * l2 / (4 * (1 + l2 / 34)) - 1 / (8 * np.sqrt(x)) - math.sqrt(2)


def check_sqrt_inequality(lo=5.0, hi=1e7, points=10**5):
    x = np.geomspace(lo, hi, points)
    g = sqrt_inequality_margin(x)
    i = int(np.argmin(g))
    return CheckResult("sqrt_inequality", bool(g[i] > 0), float(g[i]), float(x[i]))


def log2_f_calculus(t, beta):
    """log2 of t^(1/beta) 2^(-t / (16 log^2 t))."""
    lt = np.log2(t)
    return lt / beta - t / (16 * lt**2)


def log2_f_bound(beta):
    a = 16 * LOG2E / beta
    b = a * math.log2(a) ** 2
    return math.log2(22 * b) / beta - b / (16 * math.log2(b) ** 2)


def check_calculus_bound(betas=(0.2, 0.5, 1.0), lo=2.0**5, hi=1e7, points=10**5):
    t = np.geomspace(lo, hi, points)
    worst, witness = math.inf, None
    for beta in betas:
        vals = log2_f_calculus(t, beta)
        margin = log2_f_bound(beta) - float(vals.max())
        if margin < worst:
            worst, witness = margin, {"beta": beta, "t": float(t[np.argmax(vals)])}
    return CheckResult("calculus_bound", worst >= 0, worst, witness)


def check_stirling(n_max=170):
    """sqrt(2 pi) n^(n+1/2) e^-n <= n! <= same * e^(1/12n), in natural log."""
    worst, witness = math.inf, None
    for n in range(1, n_max + 1):
        lf = math.log(math.factorial(n))
        base = 0.5 * math.log(2 * math.pi) + (n + 0.5) * math.log(n) - n
        margin = min(lf - base, base + 1.0 / (12 * n) - lf)
        if margin < worst:
            worst, witness = margin, n
    return CheckResult("stirling", worst >= -1e-12, worst, witness)


def check_binomial_bound(n_lo=2, n_hi=60):
    """C(n, r) <= (2 pi b(1-b))^(-1/2) e^(1/12n) n^(-1/2) [b^-b (1-b)^-(1-b)]^n, b = r/n."""
    worst, witness = math.inf, None
    for n in range(n_lo, n_hi + 1):
        for r in range(1, n):
            b = r / n
            rhs = (-0.5 * math.log(2 * math.pi * b * (1 - b)) + 1.0 / (12 * n)
                   - 0.5 * math.log(n) - n * (b * math.log(b) + (1 - b) * math.log(1 - b)))
            margin = rhs - math.log(math.comb(n, r))
            if margin < worst:
                worst, witness = margin, (n, r)
    return CheckResult("binomial_bound", worst >= -1e-12, worst, witness)


def inequality_checks(sqrt_grid=(5.0, 1e7, 10**5), calc_grid=(2.0**5, 1e7, 10**5),
                      betas=(0.2, 0.5, 1.0), stirling_max=170, binom_range=(2, 60)):
    if sqrt_grid[0] < 5 or sqrt_grid[1] > 1e7 or calc_grid[0] < 2**5 or calc_grid[1] > 1e7:
        raise OutOfDomain("grid outside the validated range")
    if stirling_max > 170:
        raise OutOfDomain("Stirling check limited to n <= 170")
    return LemmaReport([
        check_sqrt_inequality(*sqrt_grid),
        check_calculus_bound(betas, *calc_grid),
        check_stirling(stirling_max),
        check_binomial_bound(*binom_range),
    ])
