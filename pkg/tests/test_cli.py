import json
from pathlib import Path

import pytest

from epsbm.cli.app import main
from epsbm.formats.space_file import read_space_metadata

from .strategies import random_metric_space


def _payload(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def _without_timing(path) -> dict:
    data = json.loads(Path(path).read_text())
    data.pop("wall_time_s")
    return data


def test_validate(two_point_space, write_space, capsys):
    path = write_space(two_point_space)
    assert main(["validate", "--space", path]) == 0
    data = _payload(capsys)
    assert data["command"] == "validate"
    assert data["payload"]["size"] == 2


def test_validate_invalid_file(tmp_path, capsys):
    path = tmp_path / "bad.mms"
    path.write_text("mms-1\n2\na b\n0.5 0.5\n0 1\n2 0\n")
    assert main(["validate", "--space", str(path)]) == 2
    assert "AsymmetricMatrix" in capsys.readouterr().err


def test_missing_space_file(tmp_path, capsys):
    assert main(["diameter", "--space", str(tmp_path / "nope.mms")]) == 2
    assert "error:" in capsys.readouterr().err


def test_diameter(far_space, write_space, capsys):
    assert main(["diameter", "--space", write_space(far_space)]) == 0
    assert _payload(capsys)["payload"]["within_pi"] is False


def test_intermediate(path_space, write_space, capsys):
    path = write_space(path_space)
    assert main(["intermediate", "--space", path, "--a0", "0", "--a1", "2"]) == 0
    payload = _payload(capsys)["payload"]
    assert payload["members"] == [1]
    assert payload["mass"] == 0.5


def test_bm_check_violation_exit_code(two_point_space, write_space, capsys):
    path = write_space(two_point_space)
    assert main(["bm-check", "--space", path, "--a0", "0", "--a1", "1"]) == 1
    assert _payload(capsys)["payload"]["lhs"] == 0.0


def test_bm_verify_two_point(two_point_space, write_space, capsys):
    path = write_space(two_point_space)
    assert main(["bm-verify", "--space", path, "--eps", "0", "--n", "2"]) == 1
    data = _payload(capsys)
    assert data["parameters"]["method"] == "exhaustive"
    assert data["payload"]["worst"]["a0"] == [0]


def test_bm_verify_csv_is_invalid(two_point_space, write_space, capsys):
    path = write_space(two_point_space)
    assert main(["bm-verify", "--space", path, "--format", "csv"]) == 2
    assert "csv" in capsys.readouterr().err


def test_concentration_csv(two_point_space, write_space, capsys):
    path = write_space(two_point_space)
    args = ["concentration", "--space", path, "--r-grid", "0.25:0.75:3"]
    code = main([*args, "--format", "csv"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "r,alpha,exactness,bound_thm1,bound_improved"
    assert [float(line.split(",")[1]) for line in lines[1:]] == [0.5, 0.5, 0.5]


def test_bounds(capsys):
    assert main(["bounds", "--n", "50", "--r", "0.5", "--r", "4.0"]) == 0
    rows = _payload(capsys)["payload"]["rows"]
    assert rows[0]["improved"] < rows[0]["gaussian"]
    assert rows[1]["improved"] is None


def test_bad_r_grid(capsys):
    assert main(["bounds", "--r-grid", "0.5:1"]) == 2


def test_theorem_report(two_point_space, write_space, tmp_path):
    path = write_space(two_point_space)
    out = tmp_path / "report.json"
    args = ["theorem-report", "--space", path, "--r-grid", "0.25:0.75:3"]
    code = main([*args, "--out", str(out)])
    assert code == 1
    data = json.loads(out.read_text())
    assert data["payload"]["gaussian_holds"] is True
    assert data["payload"]["verification"]["satisfied"] is False


def test_sampled_verify_independent_of_workers(write_space, tmp_path):
    path = write_space(random_metric_space(3, 30))
    outs = []
    for workers in ("1", "4"):
        out = tmp_path / f"verify-{workers}.json"
        args = ["bm-verify", "--space", path, "--method", "sampled", "--pairs", "200"]
        args += ["--seed", "5", "--eps", "0.1", "--workers", workers, "--out", str(out)]
        main(args)
        outs.append(_without_timing(out))
    assert outs[0] == outs[1]


def test_discretize_sphere_round_trip(tmp_path):
    reports = []
    spaces = []
    for workers in ("1", "4"):
        space = tmp_path / f"sphere-{workers}.mms"
        report = tmp_path / f"sphere-{workers}.json"
        code = main(
            [
                "discretize-sphere",
                "--m", "2",
                "--centers", "8",
                "--samples", "4000",
                "--cloud-size", "500",
                "--seed", "1",
                "--workers", workers,
                "--out", str(space),
                "--report", str(report),
            ]
        )
        assert code == 0
        spaces.append(space.read_text())
        data = _without_timing(report)
        data["parameters"].pop("out")
        reports.append(data)
    assert spaces[0] == spaces[1]
    assert reports[0] == reports[1]

    meta = read_space_metadata(spaces[0])
    assert int(meta["mc_samples"]) == 4000
    assert float(meta["effective_eps"]) >= float(meta["covering_radius"])


def test_verify_discretized_sphere_uses_cover_and_mc_slack(tmp_path, capsys):
    space = tmp_path / "sphere.mms"
    main(
        [
            "discretize-sphere", "--centers", "8", "--samples", "4000",
            "--cloud-size", "500", "--out", str(space),
        ]
    )
    capsys.readouterr()
    main(["bm-verify", "--space", str(space), "--cover-multiple", "4"])
    data = _payload(capsys)
    params = data["parameters"]
    meta = read_space_metadata(space.read_text())
    assert params["eps"] == pytest.approx(4 * float(meta["effective_eps"]))
    assert params["tol"] is None
    assert params["mc_samples"] == 4000
    assert data["payload"]["mc_samples"] == 4000
    assert data["payload"]["worst"]["mc_slack"] >= 0.0


def test_discretize_needs_out(capsys):
    assert main(["discretize-sphere", "--centers", "4", "--samples", "100"]) == 2


@pytest.mark.parametrize("a0", ["0,0", "-1"])
def test_bad_index_list_is_invalid_input(path_space, write_space, capsys, a0):
    path = write_space(path_space)
    assert main(["bm-check", "--space", path, f"--a0={a0}", "--a1", "2"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unwritable_report_is_invalid_input(
    two_point_space, write_space, tmp_path, capsys
):
    path = write_space(two_point_space)
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    out = blocker / "report.json"
    assert main(["diameter", "--space", path, "--out", str(out)]) == 2
    assert "cannot write report" in capsys.readouterr().err


def test_unwritable_space_file_is_invalid_input(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    args = ["discretize-sphere", "--centers", "4", "--samples", "100"]
    args += ["--cloud-size", "50", "--out", str(blocker / "sphere.mms")]
    assert main(args) == 2
    assert "cannot write space file" in capsys.readouterr().err
