import json
from fractions import Fraction

import pytest

from rotabound.cli import main
from rotabound.matroid import Instance


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.setenv("ROTABOUND_OUT_DIR", str(tmp_path))
    return tmp_path


def gen(out, n, p, seed):
    path = out / f"inst_{n}_{seed}.json"
    assert main(["gen", "--n", str(n), "--p", str(p), "--seed", str(seed), "--out", str(path)]) == 0
    return path


def test_gen_roundtrip_digest(out, capsys):
    path = gen(out, 24, 1009, 7)
    digest = capsys.readouterr().out.split()[0]
    assert Instance.loads(path.read_text()).digest() == digest
    assert (out / "inst_24_7.json.meta.json").exists()


def test_gen_small_passes_invariants(out):
    inst = Instance.loads(gen(out, 3, 5, 42).read_text())
    assert inst.n == 3 and all(inst.matroid.rank(b) == 3 for b in inst.bases)


def test_gen_default_path_uses_env_dir(out):
    assert main(["gen", "--n", "2", "--p", "3", "--seed", "1"]) == 0
    assert (out / "instance_n2_p3_s1.json").exists()


def test_gen_rejects_zero(out, capsys):
    assert main(["gen", "--n", "0"]) == 2
    assert "--n" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["gen"])
    assert exc.value.code == 2


def test_extract_reproducible(out, capsys):
    path = gen(out, 24, 1009, 3)
    a, b = out / "a.json", out / "b.json"
    assert main(["extract", "--instance", str(path), "--seed", "5", "--out", str(a)]) == 0
    assert main(["extract", "--instance", str(path), "--seed", "5", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    result = json.loads(a.read_text())
    assert result["m"] == 1 and len(result["transversals"]) == 1
    csv = capsys.readouterr().out.strip().splitlines()
    assert csv[-2] == "n,alpha,m,rounds_used,successes"
    assert csv[-1].startswith("24,12,1,1,1")


def test_extract_shortfall_exit_code(out, tmp_path):
    from rotabound.matroid import PartitionMatroid

    n = 4
    inst = Instance(PartitionMatroid([e % n for e in range(n * n)], [1] * n),
                    [range(i * n, (i + 1) * n) for i in range(n)])
    path = tmp_path / "grid.json"
    path.write_text(inst.dumps())
    res = tmp_path / "r.json"
    code = main(["extract", "--instance", str(path), "--alpha", "1", "--m", "4",
                 "--max-rounds", "2", "--seed", "1", "--out", str(res)])
    assert code == 3
    assert json.loads(res.read_text())["shortfall"] is True


def test_extract_bad_instance(out, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "matroid": {"kind": "uniform", "rank": 2, "ground_size": 4}, "bases": [[0, 1], [1, 2]]}')
    assert main(["extract", "--instance", str(bad)]) == 2
    assert "bad.json" in capsys.readouterr().err
    assert main(["extract", "--instance", str(tmp_path / "missing.json")]) == 2


def test_verify_qn_single(out):
    path = out / "qn.csv"
    assert main(["verify-qn", "--lo", "2", "--hi", "2", "--out", str(path)]) == 0
    rows = path.read_text().splitlines()
    assert rows[1].split(",")[:3] == ["2", "3", "1/32"]


def test_verify_qn_beyond_59(out):
    path = out / "qn.csv"
    assert main(["verify-qn", "--lo", "60", "--hi", "80", "--out", str(path)]) == 0
    rows = [r.split(",") for r in path.read_text().splitlines()[1:]]
    assert len(rows) == 21 and all(r[-1] == "true" for r in rows)
    assert all(Fraction(r[2]) <= Fraction(1, 2) for r in rows)


def test_verify_qn_bad_range(out):
    assert main(["verify-qn", "--lo", "1", "--hi", "5"]) == 2


@pytest.mark.parametrize("n,code", [(60, 0), (3000, 0), (59, 1)])
def test_verify_claim(out, n, code):
    path = out / f"claim{n}.json"
    assert main(["verify-claim", "--n", str(n), "--out", str(path)]) == code
    report = json.loads(path.read_text())
    assert report["passed"] is (code == 0)
    if n == 59:
        t1 = report["checks"][0]
        assert t1["status"] == "fail" and Fraction(t1["lower"]) > Fraction(1, 8)


def test_qkn_row(out, capsys):
    assert main(["qkn", "--k", "2", "--n", "4", "--alpha", "1"]) == 0
    header, row = capsys.readouterr().out.strip().splitlines()
    cols = dict(zip(header.split(","), row.split(",")))
    assert cols["q_exact"] == "1/4" and cols["lemma4_bound"] == "1/4" and cols["holds"] == "true"


def test_sweep_small(out):
    path = out / "sweep.csv"
    assert main(["sweep", "--n-lo", "5", "--n-hi", "8", "--alpha", "1", "--alpha", "2", "--out", str(path)]) == 0
    rows = [dict(zip(path.read_text().splitlines()[0].split(","), r.split(",")))
            for r in path.read_text().splitlines()[1:]]
    assert len(rows) == 2 * (5 + 6 + 7 + 8)
    assert all(r["holds"] == "true" for r in rows)
    assert all(Fraction(r["q_exact"]) == 0 for r in rows if int(r["k"]) <= int(r["alpha"]))


def test_coupling_command(out, tmp_path):
    path = gen(out, 6, 101, 2)
    trace, report = tmp_path / "trace.json", tmp_path / "coupling.json"
    code = main(["--threads", "2", "coupling", "--instance", str(path), "--k", "4", "--alpha", "1",
                 "--trials", "3000", "--seed", "8", "--dump-trace", str(trace), "--out", str(report)])
    assert code == 0
    body = json.loads(report.read_text())
    assert body["domination"]["coupled_rank_violations"] == 0
    assert set(body["summary"]) >= {"empirical_Q", "coupled_small_union_frequency", "q_exact"}
    steps = json.loads(trace.read_text())["steps"]
    assert len(steps) == 4
    again = tmp_path / "again.json"
    main(["coupling", "--instance", str(path), "--k", "4", "--alpha", "1",
          "--trials", "3000", "--seed", "8", "--out", str(again)])
    assert again.read_bytes() == report.read_bytes()


def test_coupling_bad_k(out):
    path = gen(out, 3, 5, 0)
    assert main(["coupling", "--instance", str(path), "--k", "7", "--alpha", "1"]) == 2
