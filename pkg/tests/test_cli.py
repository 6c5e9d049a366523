import json

import pytest

from bilevel import cli, model1


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_missing_k_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "--model", "1", "--input", "eil76"])
    assert info.value.code == 2
    assert "--k" in capsys.readouterr().err


def test_k_out_of_range_is_usage_error():
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "--model", "2", "--k", "11", "--gen", "artificial11"])
    assert info.value.code == 2


def test_missing_file_fails(tmp_path):
    with pytest.raises(SystemExit) as info:
        cli.main(["brute", "--model", "1", "--k", "1", "--input", str(tmp_path / "nope.tsp")])
    assert info.value.code == 1


def test_solve_writes_identical_results(tmp_path, capsys):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        code, cap = run(capsys, "solve", "--model", "2", "--k", "2", "--gen", "uniform:40:2:1",
                        "--restarts", "3", "--seed", "4", "--init", "random", "--threads", "1",
                        "--out", str(out), "--format", "json", "--svg", str(tmp_path / "p.svg"))
        assert code == 0
        assert cap.out.count("seed=") == 4  # three restarts plus the best line
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    rows = json.loads(outs[0])
    assert [r["seed"] for r in rows] == [4, 5, 6]
    assert all(r["time_s"] is None for r in rows)
    assert (tmp_path / "p.svg").read_text().startswith("<svg")


def test_timing_flag_fills_time(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code, _ = run(capsys, "solve", "--model", "1", "--k", "2", "--gen", "uniform:20:2",
                  "--mu-min", "1e-2", "--timing", "--out", str(out))
    assert code == 0
    header, line = out.read_text().splitlines()
    assert line.split(",")[header.split(",").index("time_s")] != ""


def test_brute_and_cap(capsys):
    code, cap = run(capsys, "brute", "--model", "1", "--k", "2", "--gen", "artificial11")
    assert code == 0 and "cost=140.0000" in cap.out
    code, cap = run(capsys, "brute", "--model", "2", "--k", "3", "--input", "eil76", "--cap", "10")
    assert code == 1 and "refusing" in cap.err


def test_sweep(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, cap = run(capsys, "sweep", "--model", "1", "--ks", "1,2", "--inits", "kmeans,uniform",
                    "--gen", "uniform:15:2", "--mu-min", "1e-2", "--out", str(out))
    assert code == 0
    assert len(out.read_text().splitlines()) == 5
    with pytest.raises(SystemExit):
        cli.main(["sweep", "--model", "1", "--ks", "1", "--inits", "bogus", "--gen", "artificial11"])


def test_verify_subset(capsys):
    code, cap = run(capsys, "verify", "--suite", "inverses", "--suite", "dc")
    assert code == 0
    assert "2/2 suites passed" in cap.out


def test_verify_fault_injection(capsys, monkeypatch):
    original = model1.conjugate_step
    monkeypatch.setattr(model1, "conjugate_step", lambda p, Y: original(p, Y) * 1.001)
    code, cap = run(capsys, "verify", "--suite", "conjugate")
    assert code == 1
    assert "FAIL conjugate" in cap.out


def test_threads_env(monkeypatch):
    monkeypatch.setenv("BILEVEL_THREADS", "3")
    assert cli._default_threads() == 3
    monkeypatch.setenv("BILEVEL_THREADS", "junk")
    assert cli._default_threads() >= 1
