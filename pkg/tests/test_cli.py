import hashlib
import json

import pytest

from stsurf import cli


def run(capsys, *args):
    status = cli.main(list(args))
    return status, capsys.readouterr()


def digest(path):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in sorted(path.iterdir())}


def test_parse_range():
    assert cli.parse_range("3-5,8") == (3, 4, 5, 8)
    assert cli.parse_range(None) == ()


def test_config_validation():
    with pytest.raises(ValueError):
        cli.RunConfig("census").validate()
    with pytest.raises(ValueError):
        cli.RunConfig("census", n=(13,)).validate()
    with pytest.raises(ValueError):
        cli.RunConfig("chow-derive", d=(4,), M=(1,)).validate()


def test_census_h2_three(tmp_path, capsys):
    status, out = run(capsys, "census", "--stratum", "H2", "--n", "3", "--cache-dir", str(tmp_path))
    assert status == 0
    assert "H2,3,3,3,0" in out.out
    assert (tmp_path / "census-H2-3.jsonl").read_text().count("\n") == 3
    manifest = json.loads((tmp_path / "census-H2-3.manifest.json").read_text())
    assert manifest["run_config"]["command"] == "census" and manifest["complete"]


def test_reruns_are_byte_identical(tmp_path, capsys):
    run(capsys, "census", "--n", "4-6", "--cache-dir", str(tmp_path))
    first = digest(tmp_path)
    run(capsys, "census", "--n", "4-6", "--cache-dir", str(tmp_path), "--threads", "2")
    assert digest(tmp_path) == first


def test_cache_dir_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("CACHE_DIR", str(tmp_path))
    run(capsys, "census", "--stratum", "H11", "--n", "4")
    assert (tmp_path / "census-H11-4.jsonl").exists()


def test_verify_passes_and_leaves_cache_alone(tmp_path, capsys):
    run(capsys, "census", "--n", "3-7", "--cache-dir", str(tmp_path))
    before = digest(tmp_path)
    status, out = run(capsys, "verify-counts", "--n", "3-7", "--cache-dir", str(tmp_path))
    assert status == 0
    assert ",False" not in out.out
    assert "conjecture" in out.out  # even degrees are labelled
    assert digest(tmp_path) == before


def test_verify_detects_corruption(tmp_path, capsys):
    run(capsys, "census", "--stratum", "H11", "--n", "5", "--cache-dir", str(tmp_path))
    path = tmp_path / "census-H11-5.jsonl"
    rows = [json.loads(line) for line in path.read_text().splitlines()]
    rows[0]["epsilon"] = 3 if rows[0]["epsilon"] == 1 else 1
    path.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))
    status, out = run(capsys, "verify-counts", "--stratum", "H11", "--n", "5", "--cache-dir", str(tmp_path))
    assert status == 1
    assert "mismatch" in out.out


def test_malformed_cache_is_an_error(tmp_path, capsys):
    run(capsys, "census", "--stratum", "H2", "--n", "3", "--cache-dir", str(tmp_path))
    (tmp_path / "census-H2-3.jsonl").write_text("{not json\n")
    status, out = run(capsys, "verify-counts", "--stratum", "H2", "--n", "3", "--cache-dir", str(tmp_path))
    assert status == 2


def test_chow_derive_trace(capsys):
    status, out = run(capsys, "chow-derive", "--d", "5", "--M", "1", "--eps", "1")
    assert status == 0
    assert "class T,12/5*lambda1 + 24/5*lambda2" in out.out
    assert out.out.count("R1") >= 3


def test_classes_table(capsys):
    status, out = run(capsys, "classes", "--d", "7", "--format", "json")
    body = json.loads(out.out)
    assert body["config"]["d"] == [7]
    rows = body["rows"]
    t = [r for r in rows if r["curve"] == "T"]
    assert {(r["M"], r["epsilon"]) for r in t} == {
        ("1", "1"), ("1", "3"), ("2", ""), ("3", "1"), ("3", "3"), ("4", ""), ("5", "1"), ("5", "3")}
    assert any(r["curve"] == "W" for r in rows) and any(r["curve"] == "P" for r in rows)


def test_euler_command(capsys):
    status, out = run(capsys, "euler", "--d", "3-9")
    assert status == 0 and ",False" not in out.out


def test_theta_orbits(capsys):
    status, out = run(capsys, "theta-orbits", "--d", "4")
    assert status == 0
    assert ",E0,True" in out.out and ",E2,True" in out.out


def test_theta_vanishing(capsys):
    status, out = run(capsys, "theta-vanishing", "--d", "5")
    assert status == 0
    assert '5,"[(0,1),(1,0)]",even,"(-1, 1)","(1, 1)",1,0,1/8' in out.out
    assert "ok=True" in out.out


def test_orbit_partition(capsys):
    status, out = run(capsys, "orbit-partition", "--stratum", "H2", "--n", "5")
    lines = [l for l in out.out.splitlines() if l.startswith("H2,5")]
    assert sorted(int(l.split(",")[3]) for l in lines) == [9, 18]


def test_bad_arguments_exit_nonzero(capsys):
    status, _ = run(capsys, "classes")
    assert status == 2
