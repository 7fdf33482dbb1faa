import json

import pytest

from curveseq.cli import main, report_from_json


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_seq_golden(capsys):
    code, out = run_cli(["seq", "--init", "0,1,2,-1/8,-1/2", "--n", "6"], capsys)
    assert code == 0
    assert "c_5 = -77/128" in out


def test_congruence_pass(capsys):
    code, out = run_cli(["congruence", "--p", "5", "--rmax", "1", "--nmax", "125"], capsys)
    assert code == 0
    assert "congruences" in out


def test_congruence_failure_exit_code(tmp_path, capsys):
    # non-special data loses 7-integrality: the scan fails and exit is 1,
    # and every failed check carries a witness in the JSON report
    path = tmp_path / "fail.json"
    code, out = run_cli(
        ["congruence", "--init", "0,0,0,0,1", "--p", "7", "--rmax", "1",
         "--nmax", "120", "--json", str(path)],
        capsys,
    )
    assert code == 1
    assert "FAIL" in out
    data = json.loads(path.read_text())
    failed = [c for c in data["checks"] if c["status"] == "fail"]
    assert failed and all(c["witness"] is not None for c in failed)


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["seq", "--bogus-flag"])
    assert exc.value.code == 2


def test_modp_space_and_json_roundtrip(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out = run_cli(["modp-space", "--p", "7", "--json", str(path)], capsys)
    assert code == 0
    assert "dim V_7 = 2" in out
    data = json.loads(path.read_text())
    assert data["command"] == "modp-space"
    assert data["params"] == {"p": 7}
    assert set(data.keys()) == {"command", "params", "version", "checks"}
    for check in data["checks"]:
        assert set(check.keys()) == {"name", "status", "details", "witness"}
        assert check["status"] in ("pass", "fail", "skip")
    rep = report_from_json(path.read_text())
    assert rep.to_dict() == data  # parse(emit(report)) round-trips


def test_modp_space_pmax_tabulation(capsys):
    code, out = run_cli(["modp-space", "--pmax", "23"], capsys)
    assert code == 0
    assert "cartier form" in out and "23" in out


def test_identities_command(capsys):
    code, out = run_cli(["identities"], capsys)
    assert code == 0
    assert "0 failed" in out


def test_closed_forms_command(capsys):
    code, out = run_cli(["closed-forms", "--n", "10"], capsys)
    assert code == 0
    assert "-154" in out


def test_asd_command(capsys):
    code, out = run_cli(["asd", "--curve", "0,1", "--p", "5", "--rmax", "2", "--nmax", "3"], capsys)
    assert code == 0


def test_cartier_command(capsys):
    code, out = run_cli(["cartier", "--p", "7", "--pmax", "40"], capsys)
    assert code == 0


def test_frobenius_command(capsys):
    code, out = run_cli(["frobenius", "--pmax", "20", "--vp-limit", "11"], capsys)
    assert code == 0


def test_all_quick(capsys):
    import time

    t0 = time.time()
    code, out = run_cli(["all", "--quick", "--seed", "1"], capsys)
    assert code == 0
    assert "0 failed" in out
    assert time.time() - t0 < 120  # comfortably inside the stated budgets


def test_report_scalars_serialize_exactly():
    from fractions import Fraction

    from curveseq.cli import json_scalar
    from curveseq.exactnum import fp

    assert json_scalar(Fraction(-77, 128)) == "-77/128"
    assert json_scalar(fp(3, 7)) == {"value": 3, "p": 7}
    assert json_scalar([Fraction(1, 2), 5]) == ["1/2", 5]
