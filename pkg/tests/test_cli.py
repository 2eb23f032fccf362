import csv
import io
import json

import pytest

from stirling_search import golden
from stirling_search.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_scan_csv(capsys):
    code, out, err = run(capsys, "scan", "--kind=2", "--lo=0", "--hi=9999", "--format=csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 176
    assert rows[0] == {"kind": "2", "a": "0", "count": "inf", "positions": ""}
    assert next(r for r in rows if r["a"] == "15")["positions"] == "5:2 6:5"


def test_scan_golden_compare(capsys):
    code, _, err = run(capsys, "scan", "--kind=1", "--lo=0", "--hi=9999", "--compare=golden", "--format=csv")
    assert code == 0
    assert "appendix-first: MATCH" in err


def test_scan_cache(tmp_path, capsys):
    cache = tmp_path / "cache.csv"
    code, first, _ = run(capsys, "scan", "--kind=2", "--lo=2", "--hi=5000", "--format=csv", f"--cache={cache}")
    assert code == 0 and cache.exists()
    lines = cache.read_text().splitlines()
    assert lines[0] == "#kind=2,hi=5000" and lines[1] == "kind,n,k,value"
    keys = [tuple(map(int, line.split(",")[:3])) for line in lines[2:]]
    assert keys == sorted(keys)
    _, second, _ = run(capsys, "scan", "--kind=2", "--lo=2", "--hi=5000", "--format=csv", f"--cache={cache}")
    assert first == second
    _, sub, _ = run(capsys, "scan", "--kind=2", "--lo=100", "--hi=200", "--format=csv", f"--cache={cache}")
    _, direct, _ = run(capsys, "scan", "--kind=2", "--lo=100", "--hi=200", "--format=csv")
    assert sub == direct


def test_collisions(capsys):
    code, out, _ = run(capsys, "collisions", "--kind=1", "--hi=100000", "--format=json")
    assert code == 0
    records = json.loads(out)["records"]
    assert [(r["a"], r["positions"]) for r in records] == [(6, "4:1 4:3"), (120, "6:1 16:15")]


def test_collisions_golden(capsys):
    code, _, err = run(capsys, "collisions", "--hi=100000", "--compare=golden", "--format=csv")
    assert code == 0 and "collisions: MATCH" in err


def test_json_roundtrip(tmp_path, capsys):
    out = tmp_path / "dio2.json"
    assert run(capsys, "dio2", "--nmax=100", "--format=json", f"--out={out}")[0] == 0
    data = json.loads(out.read_text())
    assert data["records"] == [{"n": 1, "m": 2}, {"n": 3, "m": 4}, {"n": 5, "m": 16}]


def test_csv_roundtrip_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "sieve", "--nmax=2000", "--format=csv", f"--out={path}")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.DictReader(io.StringIO(a.read_text())))
    assert rows[0] == {"k": "3", "n": "3", "disposition": "solution", "detail": "3"}
    assert {(int(r["k"]), int(r["n"])) for r in rows} == {
        (5, 2), (3, 3), (6, 3), (9, 3), (14, 3), (23, 3), (42, 3), (9, 4), (24, 4), (27, 4),
        (3, 5), (6, 5), (8, 5), (30, 5), (32, 5), (41, 5), (41, 8),
    }


def test_sieve_golden_desk_scale(capsys):
    code, _, err = run(capsys, "sieve", "--compare=golden", "--format=csv")
    assert code == 0
    assert "builtin-paper (19 primes 100019..100271)" in err


def test_sieve_all_lists_eliminations(capsys):
    code, out, _ = run(capsys, "sieve", "--kmin=3", "--kmax=3", "--nmax=20", "--all", "--format=csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 19
    assert {r["disposition"] for r in rows} >= {"eliminated", "solution"}


def test_sieve_with_prime_file(tmp_path, capsys):
    path = tmp_path / "primes.txt"
    path.write_text("100279\n100291\n")
    code, _, err = run(capsys, "sieve", "--nmax=100", f"--primes={path}", "--format=csv")
    assert code == 0 and "2 primes 100279..100291" in err


def test_polygonal(capsys):
    code, out, _ = run(capsys, "polygonal", "--format=csv", "--compare=golden")
    assert code == 0
    assert out.splitlines()[1:] == ["3,3,3", "3,5,15", "6,3,2", "6,5,8", "9,4,3", "24,4,2", "41,5,3"]


def test_small_commands(capsys):
    assert run(capsys, "dio1", "--nmax=1000", "--format=csv")[1] == "n,m\n14,364\n"
    assert run(capsys, "rn", "--nmax=100", "--format=csv")[1].splitlines()[-1] == "12,4095"
    out = run(capsys, "stirling", "--kind=1", "--n=4", "--format=csv")[1]
    assert [line.split(",")[-1] for line in out.splitlines()[1:]] == ["0", "6", "11", "6", "1"]
    out = run(capsys, "multiplicity", "--a=1", "--format=csv")[1]
    assert "inf" in out
    out = json.loads(run(capsys, "bound", "--a", "2", "4095", "--check", "--format=json")[1])
    assert out["records"][1]["m2"] == 2 and out["records"][1]["bound"] > 15


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify-identities", "--nmax=20", "--format=csv")
    assert code == 0 and ",0,True" in out


def test_compare_exit_status_on_injected_mismatch(monkeypatch, capsys):
    original = golden._read_csv

    def tampered(name):
        rows = original(name)
        if name == "collisions.csv":
            rows[0] = dict(rows[0], a="16")
        return rows

    assert run(capsys, "compare", "--table=collisions")[0] == 0
    monkeypatch.setattr(golden, "_read_csv", tampered)
    code, _, err = run(capsys, "compare", "--table=collisions")
    assert code == 1 and "MISMATCH" in err


def test_compare_errata_flag(capsys):
    assert run(capsys, "compare", "--table=appendix-second")[0] == 0
    assert run(capsys, "compare", "--table=appendix-second", "--errata=off")[0] == 1


@pytest.mark.parametrize("argv", [["frobnicate"], ["scan", "--hi=abc"], ["scan", "--hi=-5"], ["sieve", "--format=xml"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_unreadable_prime_file(capsys, tmp_path):
    code, _, err = run(capsys, "sieve", f"--primes={tmp_path / 'missing.txt'}")
    assert code == 2 and "error" in err


def test_bad_interval(capsys):
    assert run(capsys, "scan", "--lo=10", "--hi=5")[0] == 2
