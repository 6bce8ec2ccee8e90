import csv
import io
import json
import os
import subprocess
import sys

import pytest

from matchcover.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_by_nx(out):
    return {(r["n"], r["x"]): r for r in json.loads(out)["rows"]}


def test_parse_range():
    assert parse_range("5") == [5]
    assert parse_range("2-4") == [2, 3, 4] == parse_range("2:4")


def test_bounds_rows(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "2-5")
    assert code == 0
    rows = rows_by_nx(out)
    r = rows[(3, 2)]
    assert (r["thm1_threshold"], r["thm2_exact"], r["w_count"], r["main_k"], r["main_vacuous"]) == (4, "5/1", 9, 0, True)
    assert rows[(5, 5)]["main_k"] == 3
    assert rows[(2, 1)]["thm1_exact"] == "3/2" and rows[(2, 1)]["thm1_threshold"] == 1


def test_bounds_csv(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "3", "--x", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0])[:2] == ["n", "x"]
    assert rows[0]["thm2_exact"] == "5/1"


def test_bounds_bad_arguments(capsys):
    assert run(capsys, "bounds", "--n", "3", "--x", "7")[0] == 2
    assert run(capsys, "bounds", "--n", "abc")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["bounds"])
    assert info.value.code == 2


def test_hyperbounds(capsys):
    code, out, _ = run(capsys, "hyperbounds", "--t", "3", "--n", "3-4")
    rows = rows_by_nx(out)
    assert rows[(4, 4)]["N"] == 15400 and rows[(4, 4)]["conjecture_k"] == 8
    assert rows[(3, 3)]["conjecture_k"] == 0 and rows[(3, 3)]["vacuous"]
    _, out2, _ = run(capsys, "hyperbounds", "--t", "2", "--n", "2-6")
    _, out3, _ = run(capsys, "bounds", "--n", "2-6")
    h, b = rows_by_nx(out2), rows_by_nx(out3)
    for key in b:
        assert h[key]["N"] == b[key]["w_count"]
        assert h[key]["conjecture_k"] == b[key]["main_k"]


def test_verify_t2(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "T2", "--n", "3", "--x", "2", "--mode", "exhaustive")
    doc = json.loads(out)
    assert code == 0 and doc["families_tested"] == 1365 and doc["counterexamples"] == []


def test_verify_main_vacuous(capsys):
    code, out, err = run(capsys, "verify", "--theorem", "MAIN", "--n", "3", "--x", "2", "--mode", "random")
    assert code == 0 and "vacuous" in err and json.loads(out)["vacuous"]


def test_verify_counterexample_exit(capsys, tmp_path):
    path = tmp_path / "rep.json"
    code, _, _ = run(capsys, "verify", "--theorem", "T1", "--n", "1", "--x", "1", "--out", str(path))
    assert code == 1
    assert json.loads(path.read_text())["counterexamples"]


def test_verify_guard(capsys):
    code, _, err = run(capsys, "verify", "--theorem", "T2", "--n", "5", "--x", "4")
    assert code == 2 and "override" in err


def write_family(tmp_path, matchings, n=2):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps({"type": "matching_family", "n": n, "matchings": matchings}))
    return str(path)


def test_oracle_two_matchings(capsys, tmp_path):
    path = write_family(tmp_path, [[[1, 2], [3, 4]], [[1, 3], [2, 4]]])
    code, out, _ = run(capsys, "oracle", "--family", path, "--x", "1")
    doc = json.loads(out)
    assert code == 0 and doc["min_max_agreement"] == 0 and doc["covering_radius"] == 2
    assert doc["witness"] == [[1, 4], [2, 3]] and doc["agreements"] == [0, 0]


def test_oracle_full_k4(capsys, tmp_path):
    path = write_family(tmp_path, [[[1, 2], [3, 4]], [[1, 3], [2, 4]], [[1, 4], [2, 3]]])
    code, out, _ = run(capsys, "oracle", "--family", path, "--x", "1")
    doc = json.loads(out)
    assert doc["witness"] == "no witness" and doc["min_max_agreement"] == 2


def test_oracle_malformed(capsys, tmp_path):
    path = write_family(tmp_path, [[[1, 2], [3, 9]]])
    code, _, err = run(capsys, "oracle", "--family", path)
    assert code == 2 and "vertex 9" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "matching_family",\n"n": 2,\n]')
    code, _, err = run(capsys, "oracle", "--family", str(bad))
    assert code == 2 and "line 3" in err
    code, _, _ = run(capsys, "oracle", "--family", str(tmp_path / "missing.json"))
    assert code == 2


def test_ftable(capsys):
    code, out, _ = run(capsys, "ftable", "--n", "3", "--n-min", "2")
    rows = rows_by_nx(out)
    assert code == 0
    assert (rows[(2, 1)]["f"], rows[(2, 1)]["thm1"], rows[(2, 1)]["thm2"]) == (2, 1, 1)
    assert rows[(3, 3)]["f"] == 14
    assert not any(r["bound_exceeds_f"] for r in rows.values())


def test_ftable_flags_k2_boundary(capsys):
    code, out, _ = run(capsys, "ftable", "--n", "1")
    assert code == 1 and json.loads(out)["rows"][0]["bound_exceeds_f"]


def test_ftable_guard(capsys):
    assert run(capsys, "ftable", "--n", "4")[0] == 2


def test_claimcheck(capsys):
    code, out, _ = run(capsys, "claimcheck", "--n", "3", "--x", "2", "--samples", "100")
    doc = json.loads(out)
    assert code == 0 and doc["counting_claim"]["details"]["violations"] == 0


def test_conjecture_t2(capsys):
    code, out, _ = run(capsys, "conjecture", "--t", "2", "--n", "5", "--x", "5", "--samples", "100")
    assert code == 0 and json.loads(out)["families_tested"] == 100


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "2")
    assert [json.loads(line) for line in out.splitlines()] == [
        [[1, 2], [3, 4]],
        [[1, 3], [2, 4]],
        [[1, 4], [2, 3]],
    ]
    code, out, _ = run(capsys, "enumerate", "--n", "3", "--t", "3")
    assert len(out.splitlines()) == 280
    assert run(capsys, "enumerate", "--n", "9")[0] == 2


def test_search(capsys, tmp_path):
    path = write_family(tmp_path, [[[1, 2], [3, 4], [5, 6]]], n=3)
    code, out, _ = run(capsys, "search", "--family", path, "--x", "1", "--seed", "3")
    doc = json.loads(out)
    assert code == 0 and doc["witness"] is not None and doc["value"] == 0


def test_seed_validation(capsys):
    assert run(capsys, "bounds", "--n", "3", "--seed", "-1")[0] == 2


def _cli(args, threads):
    env = dict(os.environ, MATCHCOVER_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "matchcover", *args], capture_output=True, env=env, check=False)


def test_byte_identical_across_thread_counts():
    args = ["verify", "--theorem", "MAIN", "--n", "5", "--x", "5", "--mode", "random", "--samples", "60", "--seed", "17"]
    a, b, c = _cli(args, 1), _cli(args, 2), _cli(args, 1)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout == c.stdout
