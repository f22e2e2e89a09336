"""Mini-language parsing and JSON (de)serialisation of descriptors and sequences.

Descriptors: ``power:q``, ``powerlog:q,r``, ``table:@knots.json``; any of
them may end in ``,p=<value>`` to set the convexity exponent.
Sequences: ``poly:theta``, ``explog:beta,vartheta``, ``logdecay:theta``,
``const:v`` (or ``const:v,head_len_log2``), ``table:a1,a2,...`` or
``table:@values.json``.
"""

import json
import math

import numpy as np

from .errors import ConfigError, OrlentError
from .orlicz import OrliczDescriptor, Power, PowerLog, Tabulated, validate_descriptor
from .sequences import ConstantHead, ExpLog, LogDecay, Polynomial, Table


def _split(spec, field):
    if ":" not in spec:
        raise ConfigError(f"{field}: expected 'family:params', got {spec!r}", field=field)
    family, _, rest = spec.partition(":")
    return family.strip().lower(), rest.strip()


def _floats(text, field, count=None):
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"{field}: cannot parse numbers from {text!r}", field=field) from None
    if count is not None and len(vals) not in (count if isinstance(count, tuple) else (count,)):
        raise ConfigError(f"{field}: expected {count} numbers, got {len(vals)}", field=field)
    return vals


def _load_json(path, field):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"{field}: cannot read {path}: {exc}", field=field) from None


def _default_p(family):
    if isinstance(family, (Power, PowerLog)):
        return min(family.q, 1.0)
    return 1.0


def descriptor_from_parts(family_name, params, p=None, field="descriptor"):
    try:
        if family_name == "power":
            fam = Power(*params)
        elif family_name == "powerlog":
            fam = PowerLog(*params)
        elif family_name in ("table", "tabulated"):
            fam = Tabulated(tuple(tuple(k) for k in params))
        else:
            raise ConfigError(f"{field}: unknown Orlicz family {family_name!r}", field=field)
        desc = OrliczDescriptor(fam, _default_p(fam) if p is None else float(p))
    except ConfigError:
        raise
    except (OrlentError, TypeError) as exc:
        raise ConfigError(f"{field}: {exc}", field=field) from None
    report = validate_descriptor(desc)
    if not report.ok:
        code, msg, _ = report.failures[0]
        raise ConfigError(f"{field}: {code}: {msg}", field=field)
    return desc


def parse_descriptor(spec, field="descriptor"):
    family, rest = _split(spec, field)
    p = None
    parts = [s for s in rest.split(",") if s.strip()]
    if parts and parts[-1].strip().startswith("p="):
        p = _floats(parts.pop()[len("p="):].strip(), field, 1)[0]
    rest = ",".join(parts)
    if family == "table":
        if not rest.startswith("@"):
            raise ConfigError(f"{field}: table descriptors need '@file.json'", field=field)
        data = _load_json(rest[1:], field)
        knots = data["knots"] if isinstance(data, dict) else data
        if p is None and isinstance(data, dict):
            p = data.get("p")
        return descriptor_from_parts("table", knots, p, field)
    return descriptor_from_parts(family, _floats(rest, field), p, field)


def sequence_from_parts(family, params, field="seq"):
    try:
        if not isinstance(params, dict):
            params = [float(v) for v in params]
        if family == "poly":
            return Polynomial(*params)
        if family == "explog":
            return ExpLog(*params)
        if family == "logdecay":
            return LogDecay(*params)
        if family == "const":
            return ConstantHead(*params)
        if family == "table":
            if isinstance(params, dict):
                return Table(tuple(params["values"]), params.get("tail", 0.0))
            return Table(tuple(params))
    except (OrlentError, TypeError, ValueError) as exc:
        raise ConfigError(f"{field}: {exc}", field=field) from None
    raise ConfigError(f"{field}: unknown sequence family {family!r}", field=field)


def parse_sequence(spec, field="seq"):
    family, rest = _split(spec, field)
    if family == "table" and rest.startswith("@"):
        data = _load_json(rest[1:], field)
        return sequence_from_parts("table", data if isinstance(data, dict) else list(data), field)
    return sequence_from_parts(family, _floats(rest, field), field)


def parse_k_range(spec, field="k"):
    """``5``, ``1..16``, ``1,2,8``, ``4..1048576:x2`` (geometric) or ``1..100:+9``."""
    spec = spec.strip()
    try:
        if ".." in spec:
            lo, _, rest = spec.partition("..")
            hi, _, step = rest.partition(":")
            lo, hi = int(lo), int(hi)
            if step.startswith("x"):
                ratio = float(step[1:])
                if ratio <= 1:
                    raise ValueError
                ks, k = [], lo
                while k <= hi:
                    ks.append(k)
                    k = max(k + 1, int(math.floor(k * ratio)))
            else:
                inc = int(step[1:] if step.startswith("+") else step) if step else 1
                if inc < 1:
                    raise ValueError
                ks = list(range(lo, hi + 1, inc))
        else:
            ks = sorted({int(v) for v in spec.split(",") if v.strip()})
    except ValueError:
        raise ConfigError(f"{field}: cannot parse k-range {spec!r}", field=field) from None
    if not ks:
        raise ConfigError(f"{field}: k-range {spec!r} is empty", field=field)
    if ks[0] < 1:
        raise ConfigError(f"{field}: k must be >= 1", field=field)
    return ks


# -- JSON ------------------------------------------------------------------


def descriptor_to_json(M):
    fam = M.family
    if isinstance(fam, Power):
        return {"family": "power", "params": [fam.q], "p": M.p}
    if isinstance(fam, PowerLog):
        return {"family": "powerlog", "params": [fam.q, fam.r], "p": M.p}
    return {"family": "table", "params": [list(k) for k in fam.knots], "p": M.p}


def descriptor_from_json(obj):
    return descriptor_from_parts(obj["family"], obj["params"], obj.get("p"))


_SEQ_NAMES = {Polynomial: "poly", ExpLog: "explog", LogDecay: "logdecay",
              ConstantHead: "const", Table: "table"}


def sequence_to_json(seq):
    name = _SEQ_NAMES.get(type(seq))
    if name is None:
        raise ConfigError(f"sequence {seq!r} has no JSON form", field="seq")
    if name == "table":
        return {"family": name, "params": {"values": list(seq.values), "tail": seq.tail}}
    if name == "const":
        return {"family": name, "params": [seq.value, seq.head_len_log2]}
    params = {"poly": lambda s: [s.theta], "explog": lambda s: [s.beta, s.vartheta],
              "logdecay": lambda s: [s.theta]}[name](seq)
    return {"family": name, "params": params}


def sequence_from_json(obj):
    return sequence_from_parts(obj["family"], obj["params"])


def clean(obj):
    """Replace non-finite floats (and numpy scalars) by JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
    return obj


def dumps(obj):
    return json.dumps(clean(obj), sort_keys=True, allow_nan=False)
