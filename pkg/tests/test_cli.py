import json

import pytest

from kakeya.cli import main
from kakeya.linalg import PointSet
from kakeya.gf import GF


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_writes_pointset_and_summary(tmp_path, capsys):
    path = tmp_path / "md.txt"
    code, out, _ = run(capsys, "construct", "--id", "missing-digit", "--q", 3, "--n", 2, "--out", path)
    assert code == 0
    summary = json.loads(out)
    assert summary["size"] == 7 and summary["schema"] == "construct-summary v1"
    assert summary["seed"] == 3405691582
    K = PointSet.load(path)
    assert K.card == 7 and "card=7" in path.read_text()


@pytest.mark.parametrize("argv,size", [
    (["--id", "universal", "--q", 2, "--n", 4, "--k", 2], 7),
    (["--id", "kakeya-universal", "--q", 2, "--n", 4, "--r", 2], 15),
    (["--id", "lift", "--q", 3, "--n", 3, "--r", 2], 25),
    (["--id", "final-upper", "--q", 3, "--n", 4, "--r", 1], 49),
    (["--id", "value-set", "--q", 5, "--n", 2], 20),
    (["--id", "quadratic", "--q", 8, "--n", 2], 46),
    (["--id", "product", "--q", 3, "--n", 3], 21),
])
def test_construct_ids(capsys, argv, size):
    code, out, _ = run(capsys, "construct", *argv)
    assert code == 0 and json.loads(out)["size"] == size


def test_random_rotation_and_give_up(capsys, monkeypatch):
    code, out, _ = run(capsys, "construct", "--id", "random-rotation", "--q", 3, "--n", 3, "--seed", 1)
    assert code == 0 and json.loads(out)["attempts"] >= 1
    import kakeya.constructions as C

    monkeypatch.setattr(C, "direction_coverage", lambda K: 0.9)
    code, _, err = run(capsys, "construct", "--id", "random-rotation", "--q", 3, "--n", 3, "--max-attempts", 2)
    assert code == 2 and "gave up" in err


def test_verify_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.txt"
    run(capsys, "construct", "--id", "missing-digit", "--q", 3, "--n", 2, "--out", good)
    code, out, _ = run(capsys, "verify", good, "--r", 1)
    assert code == 0 and json.loads(out)["status"] == "verified"

    empty = tmp_path / "empty.txt"
    PointSet.empty(GF(3), 2).save(empty)
    code, out, _ = run(capsys, "verify", empty, "--r", 1)
    report = json.loads(out)
    assert code == 1 and report["first_failure"] == [[1, 0]]

    bad = tmp_path / "bad.txt"
    bad.write_text("not a pointset\n")
    assert run(capsys, "verify", bad, "--r", 1)[0] == 3
    assert run(capsys, "verify", tmp_path / "missing.txt", "--r", 1)[0] == 3


def test_verify_sampled_and_universal(tmp_path, capsys):
    big = tmp_path / "m55.txt"
    run(capsys, "construct", "--id", "missing-digit", "--q", 5, "--n", 5, "--out", big)
    code, out, _ = run(capsys, "verify", big, "--r", 1, "--mode", "sampled", "--samples", 1000)
    assert code == 0 and json.loads(out)["status"] == "no-failure-in-sample"
    u = tmp_path / "u.txt"
    run(capsys, "construct", "--id", "universal", "--q", 2, "--n", 4, "--k", 2, "--out", u)
    code, out, _ = run(capsys, "verify", u, "--universal", 2)
    assert code == 0 and json.loads(out)["checked"] == 120


def test_parameter_errors(capsys):
    assert run(capsys, "construct", "--id", "missing-digit", "--q", 6, "--n", 2)[0] == 4
    assert run(capsys, "construct", "--id", "universal", "--q", 2, "--n", 2)[0] == 4
    assert run(capsys, "construct", "--id", "quadratic", "--q", 2, "--n", 2)[0] == 4
    assert run(capsys, "search", "--q", 4, "--n", 4, "--r", 1)[0] == 4


def test_bounds_command(tmp_path, capsys):
    code, out, _ = run(capsys, "bounds", "--q", 3, "--n", 2, "--r", 1)
    rep = json.loads(out)["rows"][0]
    assert code == 0 and rep["lower"] == "81/25" and rep["best_upper"] == 7
    path = tmp_path / "atlas.csv"
    code, _, _ = run(capsys, "bounds", "--q", "2-3", "--n", "1-3", "--r", "1,2", "--format", "csv", "--out", path)
    assert code == 0 and path.read_text().startswith("schema,q,n,r,bound_id")


def test_search_command(capsys):
    code, out, _ = run(capsys, "search", "--q", 2, "--n", 2, "--r", 1)
    res = json.loads(out)
    assert code == 0 and res["minimum"] == 3 and res["certificate_verified"]
    code, out, _ = run(capsys, "search", "--q", 3, "--n", 2, "--r", 1, "--budget", 2)
    assert code == 5 and json.loads(out)["status"] == "budget-exhausted"


def test_polycheck_and_ifset(capsys):
    code, out, _ = run(capsys, "polycheck", "--q", 3, "--trials", 200, "--seed", 7)
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "ifset", "--q", 8, "--f", "x^6+x^2")
    data = json.loads(out)
    assert code == 0 and data["max_size"] == 6 and len(data["rows"]) == 8
    code, out, _ = run(capsys, "ifset", "--q", 16)
    assert json.loads(out)["max_size"] == 11
    assert run(capsys, "ifset", "--q", 5, "--f", "y^2")[0] == 3


def test_outputs_are_byte_identical_and_round_trip(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"rr{i}.txt"
        js = tmp_path / f"rr{i}.json"
        run(capsys, "construct", "--id", "random-rotation", "--q", 3, "--n", 3, "--seed", 5, "--out", path, "--json", js)
        outs.append((path.read_bytes(), js.read_bytes().replace(str(path).encode(), b"")))
        assert PointSet.from_text(path.read_text()).to_text() == path.read_text()
    assert outs[0] == outs[1]


def test_thread_count_does_not_change_output(tmp_path, capsys):
    path = tmp_path / "k.txt"
    run(capsys, "construct", "--id", "final-upper", "--q", 3, "--n", 4, "--r", 1, "--out", path)
    a = run(capsys, "verify", path, "--r", 1, "--threads", 1)[1]
    b = run(capsys, "verify", path, "--r", 1, "--threads", 4)[1]
    assert a == b
