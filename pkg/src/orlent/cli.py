"""Command-line entry point: ``orlent {bounds,oracle,nets,lemmas,verify}``.

Exit codes: 0 success, 1 verification failure or module error,
2 configuration error, 3 budget exceeded.
"""

import argparse
import csv
from dataclasses import dataclass, field
import io
import math
import sys

import numpy as np

from . import bounds, combinatorics, oracle, verify
from .errors import BudgetExceeded, ConfigError, OrlentError
from .io import dumps, parse_descriptor, parse_k_range, parse_sequence

DEFAULT_SEED = 0xC0FFEE
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    M1: str = "power:1"
    M2: str = "power:2"
    seq: str = "poly:1"
    k: str = "1..8"
    n: int = None
    weights: str = None
    delta: float = None
    p: float = None
    head: bool = False
    theta_mode: str = "auto"
    mode: str = "code"
    m: str = "5"
    sizes: str = None
    samples: int = 1000
    rtol: float = 1e-9
    fmt: str = "json"
    seed: int = DEFAULT_SEED
    suites: list = field(default_factory=list)

    def validate(self):
        if self.command not in ("bounds", "oracle", "nets", "lemmas", "verify"):
            raise ConfigError(f"command: unknown command {self.command!r}", field="command")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"format: expected json or csv, got {self.fmt!r}", field="format")
        if not self.rtol > 0:
            raise ConfigError("rtol: tolerance must be positive", field="rtol")
        if self.delta is not None and not 0 < self.delta <= 1:
            raise ConfigError("delta: must lie in (0, 1]", field="delta")
        if self.samples < 1:
            raise ConfigError("samples: must be >= 1", field="samples")
        if self.theta_mode not in ("auto", "exact", "grid"):
            raise ConfigError("theta-mode: expected auto, exact or grid", field="theta-mode")
        unknown = set(self.suites) - set(verify.SUITES)
        if unknown:
            raise ConfigError(f"suite: unknown suite(s) {sorted(unknown)}", field="suite")
        return self


# -- commands --------------------------------------------------------------


def _bounds(cfg):
    M1, M2 = parse_descriptor(cfg.M1, "M1"), parse_descriptor(cfg.M2, "M2")
    seq = parse_sequence(cfg.seq, "seq")
    rows = []
    for k in parse_k_range(cfg.k):
        rep = bounds.sandwich_report(seq, M1, M2, k, p=cfg.p, use_head_condition=cfg.head,
                                     theta_mode=cfg.theta_mode)
        rows.append(rep.to_json())
    return rows, True


def _weights(cfg):
    if cfg.weights is None:
        if cfg.n is None:
            raise ConfigError("weights: give --weights or --n", field="weights")
        return (1.0,) * cfg.n
    try:
        w = tuple(float(v) for v in cfg.weights.split(","))
    except ValueError:
        raise ConfigError(f"weights: cannot parse {cfg.weights!r}", field="weights") from None
    if cfg.n is not None and len(w) != cfg.n:
        if len(w) == 1:
            return w * cfg.n
        raise ConfigError(f"weights: {len(w)} values for n={cfg.n}", field="weights")
    return w


def _oracle(cfg):
    M1, M2 = parse_descriptor(cfg.M1, "M1"), parse_descriptor(cfg.M2, "M2")
    try:
        inst = oracle.FiniteDiagonalInstance(M1, M2, _weights(cfg))
    except OrlentError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"weights: {exc}", field="weights") from None
    instance_id = f"n={inst.n};w={','.join(f'{w:g}' for w in inst.weights)}"
    rows = []
    for r in oracle.oracle_batch(inst, parse_k_range(cfg.k), cfg.delta):
        row = r.to_json()
        row["instance_id"] = instance_id
        rows.append(row)
    return rows, True


def _nets(cfg):
    rng = np.random.default_rng(cfg.seed)
    ms = parse_k_range(cfg.m, "m")
    rows, ok = [], True
    if cfg.mode == "code":
        if cfg.n is None:
            raise ConfigError("n: the code mode needs --n", field="n")
        for k in parse_k_range(cfg.k):
            fam = combinatorics.build_code_family(cfg.n, k, seed=cfg.seed)
            ver = combinatorics.verify_code_family(fam)
            ok &= ver.ok
            rows.append({"family": fam.to_json(), "verification": ver.to_json()})
    elif cfg.mode == "omega":
        for m in ms:
            worst, bad = 0.0, 0
            for _ in range(cfg.samples):
                x = verify.sample_w(rng, m)
                z = combinatorics.omega_quantize(x, m)
                worst = max(worst, float(np.max(np.abs(x - z))))
                bad += not combinatorics.omega_membership(z, m)
            good = worst <= 4 and not bad
            ok &= good
            rows.append({"m": m, "samples": cfg.samples, "max_error": worst,
                         "membership_failures": bad, "pass": good})
    elif cfg.mode == "card":
        for m in ms:
            b = combinatorics.omega_card_breakdown(m)
            ok &= b.ok
            rows.append({"m": m, "q_log2": b.q_log2, "q_chain_log2": b.q_chain_log2,
                         "gamma_log2": b.gamma_log2, "gamma_stirling_log2": b.gamma_stirling_log2,
                         "total_log2": b.total_log2, "limit_log2": b.limit_log2, "pass": b.ok})
    elif cfg.mode == "count":
        if len(ms) != 1:
            raise ConfigError("m: the count mode takes a single m", field="m")
        m = ms[0]
        if cfg.sizes is None:
            sizes = [2 ** (m + 2**i) for i in range(m + 1)]
        else:
            try:
                sizes = [int(v) for v in cfg.sizes.split(",")]
            except ValueError:
                raise ConfigError(f"sizes: cannot parse {cfg.sizes!r}", field="sizes") from None
        count, good = combinatorics.count_family_F(m, sizes)
        ok &= good
        rows.append({"m": m, "sizes": sizes, "count": str(count),
                     "log2_count": math.log2(count),
                     "limit_log2": 2 ** (m + 3), "pass": good})
    else:
        raise ConfigError(f"mode: unknown nets mode {cfg.mode!r}", field="mode")
    return rows, ok


def _lemmas(cfg):
    rep = combinatorics.inequality_checks()
    rows = [dict(r, kind="inequality") for r in rep.to_json()]
    p = 1.0 if cfg.p is None else cfg.p
    for which, kw in (("MainTheorem", {}), ("IntroForm", {}), ("SchuttLower", {}),
                      ("DiagonalNet", {}), ("PolyDecay", {"alpha": 0.0}), ("DoublingCor", {"C": 1.0})):
        c = bounds.constants(p, which, **kw)
        rows.append({"kind": "constant", "name": which, "p": p, "c1": c.c1, "c2": c.c2,
                     "c1_log2": c.c1_log2, "c2_log2": c.c2_log2})
    return rows, rep.ok


def _verify(cfg):
    results = verify.run_all(cfg.suites or None)
    rows = [{"name": r.name, "pass": bool(r.ok), "worst_margin": r.worst_margin,
             "witness": r.witness} for r in results]
    return rows, all(r.ok for r in results)


COMMANDS = {"bounds": _bounds, "oracle": _oracle, "nets": _nets, "lemmas": _lemmas,
            "verify": _verify}

CSV_COLUMNS = {"oracle": ["instance_id", "k", "lower", "upper"]}


def render(rows, fmt, command):
    if fmt == "json":
        return "\n".join(dumps(r) for r in rows) + "\n"
    cols = CSV_COLUMNS.get(command) or sorted({key for r in rows for key in r})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow(["" if r.get(c) is None else (dumps(r[c]) if isinstance(r[c], (dict, list)) else r[c])
                         for c in cols])
    return buf.getvalue()


def run(cfg, out=None):
    """Execute one command; returns the exit status."""
    out = sys.stdout if out is None else out
    try:
        cfg.validate()
        rows, ok = COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"BudgetExceeded: {exc} {exc.context or ''}", file=sys.stderr)
        return EXIT_BUDGET
    except OrlentError as exc:
        print(f"{exc.code}: {exc} {exc.context or ''}", file=sys.stderr)
        return EXIT_FAIL
    out.write(render(rows, cfg.fmt, cfg.command))
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="orlent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", dest="fmt", default="json", choices=["json", "csv"])
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
        sp.add_argument("--rtol", type=float, default=1e-9)

    sp = sub.add_parser("bounds", help="Theta, Lambda, constants and certified intervals")
    sp.add_argument("--M1", default="power:1")
    sp.add_argument("--M2", default="power:2")
    sp.add_argument("--seq", default="poly:1")
    sp.add_argument("--k", default="1..8")
    sp.add_argument("--p", type=float)
    sp.add_argument("--head", action="store_true", help="require alpha_1 = alpha_k")
    sp.add_argument("--theta-mode", dest="theta_mode", default="auto")
    common(sp)

    sp = sub.add_parser("oracle", help="brute-force entropy intervals (n <= 6)")
    sp.add_argument("--M1", default="power:1")
    sp.add_argument("--M2", default="power:1")
    sp.add_argument("--n", type=int)
    sp.add_argument("--weights")
    sp.add_argument("--k", default="1..4")
    sp.add_argument("--delta", type=float)
    common(sp)

    sp = sub.add_parser("nets", help="code families, Omega quantizer, counting bounds")
    sp.add_argument("--mode", default="code", choices=["code", "omega", "card", "count"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", default="40")
    sp.add_argument("--m", default="5")
    sp.add_argument("--sizes")
    sp.add_argument("--samples", type=int, default=1000)
    common(sp)

    sp = sub.add_parser("lemmas", help="inequality checks and constant table")
    sp.add_argument("--p", type=float)
    common(sp)

    sp = sub.add_parser("verify", help="run every invariant suite")
    sp.add_argument("--suite", dest="suites", action="append", default=[],
                    help=f"restrict to a suite ({', '.join(verify.SUITES)})")
    common(sp)
    return parser


def main(argv=None):
    args = vars(build_parser().parse_args(argv))
    cfg = RunConfig(**args)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
