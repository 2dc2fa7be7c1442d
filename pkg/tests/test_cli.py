import json

import pytest

from smoothgor.cli import BAD_INPUT, INTERNAL, OK, main
from smoothgor.construct import simplex
from smoothgor.polytope import hull, read_polytope, to_json


def _write(tmp_path, name, P):
    path = tmp_path / name
    path.write_text(to_json(P))
    return str(path)


def test_analyze(tmp_path, capsys):
    path = _write(tmp_path, "s4.json", simplex(4))
    assert main(["analyze", path]) == OK
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("smooth, Gorenstein index 5")


def test_analyze_bad_inputs(tmp_path, capsys):
    flat = tmp_path / "flat.json"
    flat.write_text('{"lattice_dim": 2, "vertices": [[0, 0], [1, 0], [2, 0]]}')
    assert main(["analyze", str(flat)]) == BAD_INPUT
    assert "restrict_to_span" in capsys.readouterr().err
    broken = tmp_path / "broken.json"
    broken.write_text('{"lattice_dim": 2,\n "vertices": [[0, 0], [1, 0]')
    assert main(["analyze", str(broken)]) == BAD_INPUT
    assert "line 2" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "missing.json")]) == BAD_INPUT


def test_construct(tmp_path, capsys):
    assert main(["construct", "--simplex", "2", "--dilate", "3", "--out", str(tmp_path)]) == OK
    P = read_polytope(tmp_path / "3x_simplex_2.json")
    assert len(P.lattice_points()) == 10
    assert main(["construct", "--family", "20", "8", "--out", str(tmp_path)]) == OK
    meta = json.loads((tmp_path / "family_d20_r8.meta.json").read_text())
    assert len(meta) == 11
    assert all(m["index"] == m["computed_index"] == 8 for m in meta)
    assert main(["construct", "--family", "6", "3", "--out", str(tmp_path)]) == BAD_INPUT


def test_stringy(tmp_path, capsys):
    path = _write(tmp_path, "segment.json", hull([(-1,), (1,)]))
    assert main(["stringy", path]) == OK
    doc = json.loads(capsys.readouterr().out.splitlines()[0])
    assert doc["E_terms"] == [[0, 0, 2]]
    quintic = _write(tmp_path, "q.json", simplex(4).dilate(5).translate((-1,) * 4))
    assert main(["stringy", quintic, "--dual"]) == OK
    doc = json.loads(capsys.readouterr().out.splitlines()[0])
    assert doc["pair"] == [101, 1]
    square = _write(tmp_path, "sq.json", hull([(0, 0), (2, 0), (0, 1), (2, 1)]))
    assert main(["stringy", square]) == BAD_INPUT


def test_classify_and_verify(tmp_path, capsys):
    db = tmp_path / "d3"
    assert main(["classify", "--dim", "3", "--out", str(db), "--threads", "1"]) == OK
    man = json.loads((db / "manifest.json").read_text())
    assert man["counts"] == {"1": 18, "2": 3, "4": 1}
    files = sorted(p.name for p in db.iterdir())
    # idempotent rerun leaves the same files
    assert main(["classify", "--dim", "3", "--out", str(db), "--threads", "1"]) == OK
    assert sorted(p.name for p in db.iterdir()) == files
    assert main(["db-verify", str(db)]) == OK
    assert main(["fano-table", "--dim", "3", "--db", str(db)]) == OK
    assert "i_X=4: 1" in capsys.readouterr().out
    # corrupt one class
    victim = db / f"{man['classes'][0]['digest']}.json"
    doc = json.loads(victim.read_text())
    doc["vertices"][0] = [x + 1 for x in doc["vertices"][0]]
    victim.write_text(json.dumps(doc))
    assert main(["db-verify", str(db)]) == INTERNAL


def test_fano_table_without_database(tmp_path):
    assert main(["fano-table", "--dim", "3", "--db", str(tmp_path / "nothing")]) == BAD_INPUT


def test_usage_errors():
    with pytest.raises(SystemExit):
        main(["construct", "--simplex"])
