import csv
import io
import json

import pytest

from orlent import cli
from orlent.cli import RunConfig, main, run
from orlent.errors import ConfigError
from orlent.io import (descriptor_from_json, descriptor_to_json, dumps, parse_descriptor,
                       parse_k_range, parse_sequence, sequence_from_json, sequence_to_json)
from orlent.orlicz import PowerLog, Tabulated
from orlent.sequences import ConstantHead, ExpLog, LogDecay, Polynomial, Table


def test_parse_descriptors(tmp_path):
    M = parse_descriptor("power:2")
    assert M.family.q == 2 and M.p == 1.0
    assert parse_descriptor("power:0.5").p == 0.5
    assert parse_descriptor("power:3,p=0.5").p == 0.5
    pl = parse_descriptor("powerlog:2,-1")
    assert isinstance(pl.family, PowerLog) and pl.family.r == -1
    knots = tmp_path / "knots.json"
    knots.write_text(json.dumps({"knots": [[0, 0], [0.5, 0.25], [1, 1]], "p": 1.0}))
    tab = parse_descriptor(f"table:@{knots}")
    assert isinstance(tab.family, Tabulated) and tab(0.5) == pytest.approx(0.25)


@pytest.mark.parametrize("spec", ["power", "cube:2", "power:x", "power:2,p=3", "table:foo",
                                  "table:@/nonexistent.json", "powerlog:1,3"])
def test_parse_descriptor_errors(spec):
    with pytest.raises(ConfigError):
        parse_descriptor(spec)


def test_parse_sequences():
    assert parse_sequence("poly:1.5") == Polynomial(1.5)
    assert parse_sequence("explog:1,0.5") == ExpLog(1.0, 0.5)
    assert parse_sequence("logdecay:2") == LogDecay(2.0)
    assert parse_sequence("const:1") == ConstantHead(1.0)
    assert parse_sequence("table:1,0.5,0.25") == Table((1.0, 0.5, 0.25))
    for bad in ("poly:-1", "explog:1,2", "zeta:1", "table:1,2"):
        with pytest.raises(ConfigError):
            parse_sequence(bad)


def test_k_ranges():
    assert parse_k_range("5") == [5]
    assert parse_k_range("1..4") == [1, 2, 3, 4]
    assert parse_k_range("8,1,2,2") == [1, 2, 8]
    assert parse_k_range("4..64:x2") == [4, 8, 16, 32, 64]
    assert parse_k_range("1..20:+9") == [1, 10, 19]
    for bad in ("0..3", "a", "5..1", "1..9:x1", "1..9:+0"):
        with pytest.raises(ConfigError):
            parse_k_range(bad)


def test_json_round_trips():
    for spec in ("power:2", "power:0.5", "powerlog:2,-1,p=0.75"):
        M = parse_descriptor(spec)
        back = descriptor_from_json(json.loads(dumps(descriptor_to_json(M))))
        assert back == M
    for seq in (Polynomial(1.0), ExpLog(0.5, 0.3), LogDecay(1.0), ConstantHead(2.0),
                ConstantHead(1.0, 4.0), Table((1.0, 0.5), 0.1)):
        assert sequence_from_json(json.loads(dumps(sequence_to_json(seq)))) == seq


def test_dumps_non_finite():
    assert json.loads(dumps({"a": float("nan"), "b": float("inf")})) == {"a": None, "b": "inf"}


def _run(**kw):
    buf = io.StringIO()
    code = run(RunConfig(**kw), out=buf)
    return code, buf.getvalue()


def test_bounds_command_json_and_csv():
    code, out = _run(command="bounds", seq="poly:1", k="1..16", fmt="csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16 and rows[3]["k"] == "4"
    code, out = _run(command="bounds", seq="logdecay:1", k="4")
    row = json.loads(out)
    assert code == 0 and row["hypothesis_path"] == "doubling" and row["theta_mode"] == "exact"


def test_bounds_deterministic():
    a = _run(command="bounds", seq="explog:1,0.5", k="1..30:+7")[1]
    assert a == _run(command="bounds", seq="explog:1,0.5", k="1..30:+7")[1]


def test_oracle_command_csv():
    code, out = _run(command="oracle", n=1, k="1..3", fmt="csv", M1="power:1", M2="power:1")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["instance_id", "k", "lower", "upper"]
    assert rows[1][0] == "n=1;w=1" and len(rows) == 4


def test_nets_and_lemmas_commands():
    code, out = _run(command="nets", mode="count", m="1", sizes="2,2")
    assert code == 0 and json.loads(out)["count"] == "6"
    code, out = _run(command="nets", mode="card", m="5..8")
    assert code == 0 and len(out.splitlines()) == 4
    code, out = _run(command="nets", mode="omega", m="5", samples=50)
    assert code == 0 and json.loads(out)["max_error"] <= 4
    code, out = _run(command="lemmas")
    assert code == 0 and any(json.loads(line)["name"] == "MainTheorem" for line in out.splitlines())


def test_exit_codes(capsys):
    assert _run(command="bounds", M1="power:2", M2="power:1")[0] == 1
    assert _run(command="bounds", seq="poly:1", k="4", head=True)[0] == 1
    assert _run(command="bounds", rtol=-1.0)[0] == 2
    assert _run(command="bounds", fmt="xml")[0] == 2
    assert _run(command="oracle", k="1")[0] == 2  # neither weights nor n
    assert _run(command="oracle", n=2, weights="1,2")[0] == 2
    assert _run(command="oracle", n=5, k="2", delta=0.02)[0] == 3
    assert _run(command="nets", mode="code", n=256, k="60")[0] == 1
    err = capsys.readouterr().err
    assert "ConfigError: rtol" in err and "BudgetExceeded" in err


def test_config_error_names_field():
    with pytest.raises(ConfigError) as exc:
        RunConfig(command="verify", suites=["nope"]).validate()
    assert exc.value.context["field"] == "suite"


def test_main_entry(capsys):
    assert main(["bounds", "--seq", "poly:1", "--k", "4"]) == 0
    row = json.loads(capsys.readouterr().out)
    assert row["lambda"] == pytest.approx(0.125)
    assert main(["verify", "--suite", "constants"]) == 0
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_csv_render_nested():
    text = cli.render([{"a": {"x": 1}, "b": None}], "csv", "nets")
    assert text.splitlines() == ["a,b", '"{""x"": 1}",']
