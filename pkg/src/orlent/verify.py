"""Invariant suites behind ``orlent verify``.

Each suite returns a list of ``CheckResult``. The constants suite compares
``bounds.constants`` with literal formulas written out independently here,
so a change to any exponent table entry flips at least one check.
"""

import math

import numpy as np

from . import bounds
from .combinatorics import (CheckResult, build_code_family, count_family_F,
                            count_family_F_dp, inequality_checks, omega_card_breakdown,
                            omega_membership, omega_quantize, split_decompose, thresholds,
                            verify_code_family)
from .oracle import FiniteDiagonalInstance, identity_instance, oracle_batch
from .orlicz import (OrliczDescriptor, PowerLog, fundamental_invariants, luxemburg_norm,
                     power, ratio_monotone_check, validate_descriptor)
from .sequences import (ConstantHead, ExpLog, LogDecay, Polynomial, check_monotone,
                        doubling_check)

DEFAULT_SEED = 0xC0FFEE


def _lg(x):
    return math.log2(x)


def literal_constants(p, which, alpha=0.0, C=1.0):
    """Linear-space constants typed straight from their closed forms."""
    L = _lg(24 / p)
    if which == "MainTheorem":
        return (4**-2 * 2 ** (-19 / p) * L ** (-2 / p) * (1 / p) ** (-1 / p),
                4 * 2 ** (19 / p) * L ** (2 / p) * (1 / p) ** (1 / p))
    if which == "IntroForm":
        return (4**-2 * 2 ** (-21 / p) * L ** (-2 / p) * (1 / p) ** (-1 / p),
                4 * 2 ** (20 / p) * L ** (2 / p) * (1 / p) ** (1 / p))
    if which == "SchuttLower":
        return (4**-2 * 2 ** (-19 / p) * L ** (-2 / p) * (1 / p) ** (-1 / p),
                4 * 2 ** (19 / p) * L ** (2 / p) * (1 / p) ** (1 / p))
    if which == "DiagonalNet":
        return 0.0, 4 * 2 ** (12 / p) * L ** (2 / p) * (1 / p) ** (1 / p)
    if which == "PolyDecay":
        r = 1 / p + alpha
        return 0.0, 4 * 2 ** (11 * r) * _lg(24 * r) ** (2 * r) * r**r
    if which == "DoublingCor":
        r = 1 / p + C
        return (4**-2 * 2 ** (-21 / p) * L ** (-2 / p) * (1 / p) ** (-1 / p),
                4 * C * 2 ** (22 / p) * 2 ** (14 * C) * _lg(24 * r) ** (2 * r) * r**r)
    raise ValueError(which)


def constants_suite(ps=(1.0, 0.75, 0.5), rtol=1e-9):
    out = []
    cases = [("MainTheorem", {}), ("IntroForm", {}), ("SchuttLower", {}), ("DiagonalNet", {}),
             ("PolyDecay", {"alpha": 0.0}), ("PolyDecay", {"alpha": 1.5}),
             ("DoublingCor", {"C": 1.0}), ("DoublingCor", {"C": 2.0})]
    for p in ps:
        for which, kw in cases:
            got = bounds.constants(p, which, **kw)
            want = literal_constants(p, which, **kw)
            errs = [abs(g - w) / w if w else abs(g) for g, w in zip((got.c1, got.c2), want)]
            errs.append(abs(2.0**got.c2_log2 / got.c2 - 1))
            worst = max(errs)
            out.append(CheckResult(f"constants:{which}{kw or ''}:p={p}", worst <= rtol, worst))
    # IntroForm constants relate to MainTheorem by the Theta/Lambda bracket
    for p in ps:
        main, intro = bounds.constants(p, "MainTheorem"), bounds.constants(p, "IntroForm")
        gap = max(abs(intro.c1_log2 - (main.c1_log2 - 2 / p)), abs(intro.c2_log2 - (main.c2_log2 + 1 / p)))
        out.append(CheckResult(f"constants:intro_vs_main:p={p}", gap <= 1e-9, gap))
    return out


def random_power_pair(rng, p):
    q1, q2 = sorted(rng.uniform(p, 4.0, 2))
    return power(q1, p), power(q2, p)


def random_sequence(rng, family):
    if family == 0:
        return Polynomial(float(rng.uniform(0.0, 3.0)))
    if family == 1:
        return ExpLog(float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.1, 0.9)))
    if family == 2:
        return LogDecay(float(rng.uniform(0.1, 3.0)))
    return ConstantHead(1.0, float(rng.integers(0, 20)))


def bracket_suite(instances=50, k_max=16, seed=DEFAULT_SEED, rtol=1e-9):
    rng = np.random.default_rng(seed)
    worst, witness = math.inf, None
    for trial in range(instances):
        p = (0.5, 1.0)[trial % 2]
        M1, M2 = random_power_pair(rng, p)
        seq = random_sequence(rng, trial % 4)
        for k in range(1, k_max + 1):
            th = bounds.theta_bound(seq, M1, M2, k, "exact").value
            lam = bounds.lambda_bound(seq, M1, M2, k)
            lo, hi = 2 ** (-2 / p) * lam, 2 ** (1 / p) * lam
            margin = min(th - lo * (1 - rtol), hi * (1 + rtol) - th)
            if margin < worst:
                worst, witness = margin, {"seq": repr(seq), "p": p, "k": k}
    return [CheckResult("theta_lambda_bracket", worst >= 0, worst, witness)]


def regime_suite(pairs=100, seed=DEFAULT_SEED, rtol=1e-12):
    rng = np.random.default_rng(seed)
    out = []
    for p0, q0 in ((1.0, 2.0), (0.5, 1.0)):
        M1, M2 = power(p0), power(q0)
        worst, witness, seen = 0.0, None, 0
        while seen < pairs:
            n = int(rng.integers(8, 10**6))
            k = int(rng.integers(1, n + 1))
            r = bounds.schutt_A(n, k, M1, M2)
            if r.regime != "Middle":
                continue
            seen += 1
            zeta = (math.log2(2 * n / k) / k) ** (1 / p0 - 1 / q0)
            err = abs(r.value / zeta - 1)
            if err > worst:
                worst, witness = err, (n, k)
        out.append(CheckResult(f"schutt_middle:p0={p0},q0={q0}", worst <= rtol, worst, witness))
    return out


def closed_form_suite(k_max_log2=20):
    """Lambda against the log-decay closed form over a log grid of k."""
    out = []
    ks = [2**j for j in range(2, k_max_log2 + 1)]
    for p0, q0 in ((1.0, 2.0), (0.5, 1.0)):
        M1, M2 = power(p0), power(q0)
        for theta in (0.5, 1 / p0 - 1 / q0, 3.0):
            seq = LogDecay(theta)
            ratios = [bounds.lambda_bound(seq, M1, M2, k) / bounds.closed_form_lpq(theta, p0, q0, k)
                      for k in ks]
            lo, hi = 2 ** (-4 / p0), 2 ** (4 / p0)
            ok = all(lo <= r <= hi for r in ratios)
            out.append(CheckResult(f"closed_form_logdecay:p0={p0},q0={q0},theta={theta:g}", ok,
                                   min(min(ratios) / lo, hi / max(ratios))))
    return out


def descriptor_suite():
    out = []
    descs = [power(1), power(2), power(0.5), power(3, 1.0),
             OrliczDescriptor(PowerLog(2.0, -1.0)), OrliczDescriptor(PowerLog(1.0, -1.0))]
    for M in descs:
        rep = validate_descriptor(M)
        probs = fundamental_invariants(M)
        out.append(CheckResult(f"descriptor:{M.family}:p={M.p}", rep.ok and not probs, 0.0,
                               probs or None))
    out.append(CheckResult("ratio_monotone:power1->power2",
                           ratio_monotone_check(power(1), power(2)).ok, 0.0))
    return out


def sequence_suite():
    out = []
    for seq in (Polynomial(1.0), ExpLog(1.0, 0.5), LogDecay(2.0), ConstantHead(1.0)):
        mono, wit = check_monotone(seq)
        dbl = doubling_check(seq, seq.doubling_constant())
        out.append(CheckResult(f"sequence:{seq!r}", mono and dbl.ok, dbl.worst_ratio, wit))
    return out


def combinatorics_suite(seed=DEFAULT_SEED, samples=1000):
    rng = np.random.default_rng(seed)
    out = []
    fam = build_code_family(256, 40, seed=seed)
    ver = verify_code_family(fam)
    out.append(CheckResult("code_family:n=256,k=40",
                           ver.ok and len(fam.members) >= 1024 and fam.s == 11,
                           ver.worst_distance, ver.worst_pair))
    for label, m, sparse in (("m=5", 5, None), ("m=6", 6, None), ("m=13,sparse", 13, 64)):
        worst, bad = 0.0, 0
        for _ in range(samples):
            x = sample_w(rng, m, sparse)
            z = omega_quantize(x, m)
            worst = max(worst, float(np.max(np.abs(x - z))))
            bad += not omega_membership(z, m)
        out.append(CheckResult(f"omega_quantize:{label}", worst <= 4 and not bad, 4 - worst, bad))
    cards = [omega_card_breakdown(m) for m in range(5, 21)]
    out.append(CheckResult("omega_card_bound:m=5..20", all(b.ok for b in cards),
                           min(b.limit_log2 - b.total_log2 for b in cards)))
    for m, sizes, want in ((0, (1,), 2), (1, (2, 2), 6)):
        count, ok = count_family_F(m, sizes)
        out.append(CheckResult(f"count_family_F:m={m}", ok and count == want, count - want))
    for m in range(4):
        sizes = [2 ** (m + 2**i) for i in range(m + 1)]
        count, ok = count_family_F(m, sizes)
        out.append(CheckResult(f"count_family_F:m={m},maximal", ok and count == count_family_F_dp(m, sizes),
                               2 ** (m + 3) - math.log2(count)))
    out.extend(inequality_checks().checks)
    worst = math.inf
    for _ in range(200):
        blocks, M1, M2 = sample_split_input(rng)
        res = split_decompose(blocks, 5, M1, M2)
        worst = min(worst, 1 - res.weighted_count, 1 - res.tz_norm)
    out.append(CheckResult("split_decompose:m=5", worst >= -1e-9, worst))
    return out


def sample_w(rng, m, sparse=None):
    """Random point of W(m): magnitudes capped by the rank thresholds, shuffled."""
    n = 2**m
    t = thresholds(m)
    caps = np.full(n, t[-1])
    caps[0] = t[0]
    for j in range(1, m - 4):
        caps[2 ** (j - 1): 2**j] = t[j]
    mags = np.sort(rng.uniform(0, 1, n) * caps)[::-1]
    mags = np.minimum(mags, caps)
    if sparse is not None:
        mags[sparse:] = 0.0
    x = mags * rng.choice((-1.0, 1.0), n)
    return x[rng.permutation(n)]


def sample_split_input(rng, m=5, block_max=6):
    M1 = power(1.0)
    M2 = (power(2.0), power(1.0), OrliczDescriptor(PowerLog(2.0, -1.0)))[int(rng.integers(0, 3))]
    sizes = [int(rng.integers(1, block_max + 1)) for _ in range(m + 2)]
    x = rng.standard_normal(sum(sizes)) * np.exp(rng.uniform(-8, 0, sum(sizes)))
    norm = luxemburg_norm(M1, x)
    x = x / norm * rng.uniform(0.2, 1.0) if norm > 0 else x
    cuts = np.cumsum(sizes)[:-1]
    return np.split(x, cuts), M1, M2


def oracle_suite():
    out = []
    inst = identity_instance(1, power(1))
    rows = oracle_batch(inst, range(1, 6))
    ok = all(r.lower <= 2.0 ** (1 - r.k) <= r.upper and r.upper - r.lower <= 0.1 for r in rows)
    out.append(CheckResult("oracle:identity_n=1", ok, min(r.upper - r.lower for r in rows)))
    base = FiniteDiagonalInstance(power(1), power(2), (1.0, 0.5))
    scaled = FiniteDiagonalInstance(power(1), power(2), (2.5, 1.25))
    worst = 0.0
    for k in (1, 2, 3):
        a, b = oracle_batch(base, [k])[0], oracle_batch(scaled, [k])[0]
        for u, v in ((a.lower, b.lower), (a.upper, b.upper)):
            worst = max(worst, abs(2.5 * u - v) / max(v, 1e-300))
    out.append(CheckResult("oracle:scaling", worst <= 1e-9, worst))
    return out


SUITES = {
    "constants": constants_suite,
    "bracket": bracket_suite,
    "regime": regime_suite,
    "closed_form": closed_form_suite,
    "descriptors": descriptor_suite,
    "sequences": sequence_suite,
    "combinatorics": combinatorics_suite,
    "oracle": oracle_suite,
}


def run_all(names=None):
    results = []
    for name in names or SUITES:
        results.extend(SUITES[name]())
    return results
