import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from crnlift import networks
from crnlift.algebra import parse_xpoly
from crnlift.cli import main

SCHEMA = json.loads(resources.files("crnlift").joinpath("schema/report.v1.json").read_text())


def run_json(capsys, *argv):
    code = main([*argv, "--json", "--no-time"])
    out = capsys.readouterr().out
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    return code, payload, out


@pytest.fixture
def bad_network(tmp_path):
    p = tmp_path / "bad.crn"
    p.write_text("A + -> B\n")
    return str(p)


def test_validate_text(capsys):
    assert main(["validate", "binding_release"]) == 0
    out = capsys.readouterr().out
    assert "dim S = 2" in out
    assert "F[X2] = k3*x4" in out


@pytest.mark.parametrize("command", ["validate", "reduce", "gb", "lift", "binomial", "indep"])
def test_every_command_emits_schema_valid_json(capsys, command):
    code, payload, _ = run_json(capsys, command, "mapk")
    assert code == 0
    assert payload["command"]["name"] == command
    assert payload["timings"] == {}


def test_invariants_command(capsys):
    code, payload, _ = run_json(capsys, "invariants", "mapk", "--keep", "e,x0,x1,x2")
    assert code == 0
    assert payload["results"]["core"] == ["-k2*k4*e*x1^2 + k1*k3*x0*e*x2"]
    assert len(payload["results"]["extended"]) == 1


def test_json_output_is_byte_identical(capsys):
    _, _, first = run_json(capsys, "lift", "triangle")
    _, _, second = run_json(capsys, "lift", "triangle")
    assert first == second


def test_basis_strings_round_trip(capsys):
    from crnlift.independence import check_independence
    from crnlift.lift import lift_groebner
    from crnlift.reduction import reduce_network

    _, payload, _ = run_json(capsys, "lift", "mapk")
    variables = payload["results"]["order"]["variables"]
    parsed = [parse_xpoly(s, variables) for s in payload["results"]["lifted_basis"]]
    N = networks.load("mapk", "kappa")
    R = reduce_network(N, N.intermediates_hint)
    check_independence(R)
    assert parsed == lift_groebner(R).lifted_basis.polys


def test_binomial_witness(capsys):
    _, payload, _ = run_json(capsys, "binomial", "mapk", "--intermediates", "Y1,Y2,Y3,Y4,Y5,Y6")
    res = payload["results"]
    assert res["verdict"] == "not_binomial"
    assert res["witness"]["intermediate"] == "Y4" and res["witness"]["terms"] == 2


def test_empty_network_has_an_empty_basis(capsys):
    code, payload, _ = run_json(capsys, "gb", "empty")
    assert code == 0 and payload["results"]["basis"] == []


def test_parse_error_exits_with_one(capsys, bad_network):
    assert main(["validate", bad_network]) == 1
    assert "line 1" in capsys.readouterr().err


def test_invalid_intermediate_exits_with_one(capsys):
    assert main(["reduce", "mapk", "--intermediates", "X0"]) == 1
    assert "X0 is not itself a complex" in capsys.readouterr().err


def test_singular_system_exits_with_two(capsys, tmp_path):
    p = tmp_path / "trap.crn"
    p.write_text("A -> Y1\nY1 -> Y2\nY2 -> Y1\n")
    code, payload, _ = run_json(capsys, "reduce", str(p), "--intermediates", "Y1,Y2")
    assert code == 2 and payload["error"]["exit_code"] == 2


def test_gate_refusal_exits_with_three(capsys, tmp_path):
    p = tmp_path / "shared.crn"
    p.write_text("intermediates: Y\nA -> Y\nB -> Y\nY -> C\nY -> D\n")
    assert main(["lift", str(p)]) == 3
    capsys.readouterr()
    assert main(["lift", str(p), "--assume-independent"]) == 0
    assert "assume" in capsys.readouterr().err.lower()


def test_cross_checks(capsys):
    code, payload, _ = run_json(capsys, "indep", "triangle", "--cross-check")
    assert code == 0 and payload["results"]["elimination_check"] == [True]
    code, _, _ = run_json(capsys, "reduce", "triangle", "--cross-check")
    assert code == 0


def test_order_flag(capsys):
    _, payload, _ = run_json(capsys, "gb", "triangle_core", "--order", "lex:x1,x2,x3")
    assert payload["results"]["order"]["kind"] == "lex"
    assert payload["results"]["basis"] == ["x1^2 + ((k1 - k2)/(2*k3))*x1*x2"]
    assert main(["gb", "triangle_core", "--order", "matrix:1,1,1;1,1,0;2,2,0"]) == 1


@pytest.mark.parametrize("parallel", [[], ["--parallel"]])
def test_bench_routes_agree(capsys, parallel):
    code, payload, _ = run_json(capsys, "bench", "triangle", "--timeout", "60", *parallel)
    routes = payload["results"]["routes"]
    assert code == 0
    assert routes["direct_block"]["size"] == routes["lifted"]["size"]
    assert all(r["status"] == "ok" for r in routes.values())


def test_bench_timeout_is_not_fatal(capsys):
    code, payload, _ = run_json(capsys, "bench", "conradi", "--auto", "--timeout", "0.2")
    routes = payload["results"]["routes"]
    assert code == 0
    assert routes["direct_grevlex"]["status"] == "timeout"
    assert routes["lifted"] == {"status": "ok", "size": 33}


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "crnlift.cli", "validate", "triangle", "--json", "--no-time"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["results"]
