import json

import pytest

from moment_atlas.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_fixtures_grid_counts(tmp_path, capsys):
    code, doc = run_cli(
        capsys, "fixtures", "grid", "--k", "2", "--out", str(tmp_path)
    )
    assert code == 0
    entry = doc["files"][0]
    assert (entry["V"], entry["E"], entry["m"]) == (9, 12, 4)


def test_nbound_grid(tmp_path, capsys):
    run_cli(capsys, "fixtures", "grid", "--k", "2", "--out", str(tmp_path))
    code, doc = run_cli(capsys, "nbound", str(tmp_path / "grid_k2_complex.json"))
    assert code == 0
    assert doc["N"] == 43
    assert doc["m"] == 4
    assert len(doc["faces"]) == 4
    for f in doc["faces"]:
        assert f["A"] == pytest.approx(1.0, abs=1e-9)
        assert f["r"] == pytest.approx(1.0, abs=1e-9)


def test_nbound_tree_is_zero(tmp_path, capsys):
    run_cli(capsys, "fixtures", "tree", "--out", str(tmp_path))
    code, doc = run_cli(capsys, "nbound", str(tmp_path / "tree_complex.json"))
    assert code == 0
    assert doc["N"] == 0


def test_nbound_cubes(tmp_path, capsys):
    run_cli(
        capsys, "fixtures", "cube_grid", "--n", "3", "--k", "1", "--out", str(tmp_path)
    )
    code, doc = run_cli(
        capsys,
        "nbound",
        str(tmp_path / "cube_grid_n3_k1_complex.json"),
        "--cubes",
        str(tmp_path / "cube_grid_n3_k1_cubes.json"),
    )
    assert code == 0
    assert doc["N"] == 302 and doc["m"] == 5


def test_homology_and_euler(tmp_path, capsys):
    run_cli(capsys, "fixtures", "commutator_path", "--out", str(tmp_path))
    code, doc = run_cli(
        capsys,
        "homology",
        str(tmp_path / "figure_eight_complex.json"),
        str(tmp_path / "commutator_path.json"),
    )
    assert code == 0
    assert doc["m"] == 2
    assert doc["coefficients"] == [0, 0]
    assert doc["contractible"] is False
    assert doc["euler"] == "unicursal"
    code, doc = run_cli(
        capsys, "euler", str(tmp_path / "figure_eight_complex.json")
    )
    assert code == 0 and doc["class"] == "unicursal" and len(doc["trail"]) == 2


def test_moments_pipelines_agree(tmp_path, capsys):
    run_cli(capsys, "fixtures", "commutator_path", "--out", str(tmp_path))
    code, doc = run_cli(
        capsys,
        "moments",
        str(tmp_path / "figure_eight_complex.json"),
        str(tmp_path / "commutator_path.json"),
        "--max-degree",
        "3",
        "--pipeline",
        "both",
    )
    assert code == 0
    for row in doc["reports"]:
        assert row["agreement"] <= 1e-9 * (1 + abs(row["value_quadrature"]))


def test_scan_auto(tmp_path, capsys):
    run_cli(capsys, "fixtures", "commutator_path", "--out", str(tmp_path))
    code, doc = run_cli(
        capsys,
        "scan",
        str(tmp_path / "figure_eight_complex.json"),
        str(tmp_path / "commutator_path.json"),
        "--tol",
        "1e-9",
    )
    assert code == 0
    assert doc["all_zero"] is True
    assert doc["bound"] == 73


def test_center_verdict(tmp_path, capsys):
    run_cli(capsys, "fixtures", "tree", "--out", str(tmp_path))
    code, doc = run_cli(
        capsys,
        "center",
        str(tmp_path / "tree_complex.json"),
        str(tmp_path / "tree_walk_path.json"),
        "--no-return-map",
    )
    assert code == 0
    assert doc["decision"] == "universal_center"


def test_project(tmp_path, capsys):
    run_cli(capsys, "fixtures", "universal_center_abel", "--out", str(tmp_path))
    # a planar path cannot be projected from fewer than 3 dims; use a cube walk
    import numpy as np

    from moment_atlas import SampledPath, serialize

    pts = np.array(
        [[0.0, 0.0, 0.0], [1.0, 0.2, 0.1], [0.4, 0.8, -0.5], [0.0, 0.0, 0.0]]
    )
    path = SampledPath(times=np.arange(4.0), points=pts, closed=True)
    serialize.dump(serialize.path_to_doc(path), str(tmp_path / "p3.json"))
    code, doc = run_cli(
        capsys,
        "project",
        str(tmp_path / "p3.json"),
        "--seed",
        "3",
        "--degree",
        "2",
        "--pairs",
        "3",
    )
    assert code == 0
    assert len(doc["pairs"]) == 3
    for row in doc["pairs"]:
        assert row["expansion_ok"] is True
        assert row["restricted"][0] == pytest.approx(0.0, abs=1e-12)


def test_approx_command(capsys):
    code, doc = run_cli(
        capsys, "approx", "--dim", "1", "--degree", "8", "--fn", "abs", "--grid", "801"
    )
    assert code == 0
    assert doc["measured_error"] <= doc["bound"]


def test_analyze_report_round_trips(tmp_path, capsys):
    run_cli(capsys, "fixtures", "grid", "--k", "1", "--out", str(tmp_path))
    code, doc = run_cli(
        capsys, "analyze", str(tmp_path / "grid_k1_complex.json")
    )
    assert code == 0
    assert doc == json.loads(json.dumps(doc))
    assert doc["complex"]["m"] == 1
    assert doc["N"] == 22


def test_exit_codes(tmp_path, capsys):
    assert main(["nbound", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()
    # an off-curve path is a mathematical precondition failure
    run_cli(capsys, "fixtures", "grid", "--k", "1", "--out", str(tmp_path))
    run_cli(capsys, "fixtures", "circle_pl", "--out", str(tmp_path))
    code = main(
        [
            "homology",
            str(tmp_path / "grid_k1_complex.json"),
            str(tmp_path / "circle_pl_path.json"),
        ]
    )
    capsys.readouterr()
    assert code == 3
    assert main(["totally-bogus"]) == 64
    capsys.readouterr()
