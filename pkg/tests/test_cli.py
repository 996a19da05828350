"""CLI behavior: formats, exit codes, determinism."""

import json

import pytest

from finsurg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_d_lens_table_format(capsys):
    code, out, _ = run(capsys, "d-lens", "3", "1")
    assert code == 0
    assert out.splitlines() == ["0 1/2", "1 -1/6", "2 -1/6"]


def test_d_lens_json_format(capsys):
    code, out, _ = run(capsys, "d-lens", "4", "3", "--format", "json")
    assert code == 0
    assert json.loads(out) == [
        {"i": 0, "d": "0"}, {"i": 1, "d": "1/4"}, {"i": 2, "d": "0"},
        {"i": 3, "d": "-3/4"},
    ]


def test_d_lens_csv_format(capsys):
    code, out, _ = run(capsys, "d-lens", "3", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["i,d", "0,1/6", "1,1/6", "2,-1/2"]


def test_d_lens_trefoil_flag(capsys):
    code, out, _ = run(capsys, "d-lens", "3", "1", "--trefoil")
    assert out.splitlines()[0] == "0 -3/2"


def test_d_lens_usage_error(capsys):
    code, out, err = run(capsys, "d-lens", "4", "2")
    assert code == 1
    assert not out
    assert "coprime" in err


def test_search_csv(capsys):
    code, out, _ = run(capsys, "search", "--p-max", "1", "--jobs", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == (
        "p,q,epsilon,a,b,genus,t_sequence,match_kind,match_params"
    )
    assert lines[1] == '1,1,1,1,0,1,1 0,torus,"3,2"'
    assert len(lines) == 2


def test_search_table_format(capsys):
    code, out, _ = run(
        capsys, "search", "--p-max", "10", "--format", "table", "--jobs", "1"
    )
    assert code == 0
    assert out.splitlines()[-1] == "8 candidates with p <= 10"


def test_search_json_format(capsys):
    code, out, _ = run(
        capsys, "search", "--p-max", "3", "--format", "json", "--jobs", "1"
    )
    body = json.loads(out)
    assert body["count"] == 3
    assert [c["p"] for c in body["candidates"]] == [1, 2, 3]


def test_tseq_outputs(capsys):
    code, out, _ = run(capsys, "tseq", "--torus", "5,2")
    assert code == 0
    assert out.strip() == "t: 1,1,0; g=2; admissible"

    code, out, _ = run(capsys, "tseq", "--alexander", "-1,1")
    assert out.strip() == "t: 1,0; g=1; admissible"

    # [9,2;3,2] torsion: the same sequence the p=19 search candidate carries
    code, out, _ = run(capsys, "tseq", "--cable", "9,2,3,2")
    assert out.strip() == "t: 2,2,1,1,1,1,0; g=6; admissible"


def test_tseq_bad_polynomial_exit_code(capsys):
    code, out, err = run(capsys, "tseq", "--alexander", "1,1")
    assert code == 1
    assert "T=1" in err


def test_tseq_inadmissible_is_reported_not_fatal(capsys):
    code, out, _ = run(capsys, "tseq", "--alexander", "3,-1")
    assert code == 0
    assert "not admissible" in out


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "search")[0] == 1  # missing --p-max
    assert run(capsys, "no-such-command")[0] == 1
    assert run(capsys, "tseq", "--torus", "5")[0] == 1  # wrong arity
    assert run(capsys, "verify", "--suite", "nope")[0] == 1


def test_verify_pass_and_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lens-tables")
    assert code == 0
    assert out.splitlines()[-1] == "suite lens-tables: PASS"


def test_search_determinism_across_jobs(capsys):
    _, out1, _ = run(capsys, "search", "--p-max", "60", "--jobs", "1")
    _, out2, _ = run(capsys, "search", "--p-max", "60", "--jobs", "2")
    assert out1 == out2


def test_verify_failure_exits_2(capsys, monkeypatch):
    from finsurg.verify import SUITES, SuiteReport

    monkeypatch.setitem(
        SUITES, "lens-tables",
        lambda: SuiteReport("lens-tables", False, ["forced failure"]),
    )
    code, out, _ = run(capsys, "verify", "--suite", "lens-tables")
    assert code == 2
    assert out.splitlines()[-1] == "suite lens-tables: FAIL"


def test_invariant_breach_exits_3(capsys, monkeypatch):
    from finsurg.lens import InvariantError
    import finsurg.service

    def boom(p, q):
        raise InvariantError("forced")

    monkeypatch.setattr(finsurg.service, "d_lens_table", boom)
    code, out, err = run(capsys, "d-lens", "3", "1")
    assert code == 3
    assert "invariant" in err


def test_cli_against_live_server(capsys, monkeypatch):
    # the same client code drives a real HTTP server when FINSURG_URL is set
    import threading
    import time

    import uvicorn

    from finsurg.service import app

    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    try:
        for _ in range(200):
            if server.started:
                break
            time.sleep(0.02)
        else:
            pytest.skip("server did not start")
        port = server.servers[0].sockets[0].getsockname()[1]
        monkeypatch.setenv("FINSURG_URL", f"http://127.0.0.1:{port}")
        code, out, _ = run(capsys, "d-lens", "3", "1")
        assert code == 0
        assert out.splitlines() == ["0 1/2", "1 -1/6", "2 -1/6"]
    finally:
        server.should_exit = True
        thread.join(timeout=5)
