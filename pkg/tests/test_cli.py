import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from boxcert import catalog
from boxcert.cli import main
from boxcert.model import parse_box, serialize_box


@pytest.fixture
def runner():
    return CliRunner()


def write_box(tmp_path, box, name="box.json"):
    path = tmp_path / name
    path.write_text(serialize_box(box))
    return str(path)


def test_check_nd_pass(runner, tmp_path, w_box):
    path = write_box(tmp_path, w_box)
    result = runner.invoke(main, ["check-nd", path])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["command"] == "check-nd"
    assert report["verdict"] == "pass"
    assert report["certificates"] == []


def test_check_e1_violation(runner, tmp_path, indet_boxes):
    path = write_box(tmp_path, indet_boxes["I1"])
    result = runner.invoke(main, ["check-e1", path])
    assert result.exit_code == 2
    report = json.loads(result.stdout)
    assert report["verdict"] == "fail"
    assert len(report["certificates"]) == 2
    assert all(c["total"] == "3/2" for c in report["certificates"])


def test_check_e1_text_format(runner, tmp_path, indet_boxes):
    path = write_box(tmp_path, indet_boxes["I1"])
    result = runner.invoke(main, ["check-e1", path, "--format", "text"])
    assert result.exit_code == 2
    assert "check-e1: fail" in result.output
    assert "total 3/2" in result.output


def test_check_lo_two_copies_pr(runner, tmp_path):
    path = write_box(tmp_path, catalog.pr_box())
    assert runner.invoke(main, ["check-lo", path]).exit_code == 0
    result = runner.invoke(main, ["check-lo", path, "--copies", "2"])
    assert result.exit_code == 2
    report = json.loads(result.stdout)
    total = Fraction(report["certificates"][0]["total"])
    assert total > 1


def test_vertices(runner):
    result = runner.invoke(main, ["vertices"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert len(report["vertices"]) == 12
    names = [v["name"] for v in report["vertices"]]
    assert names == [f"D{i}" for i in range(1, 9)] + [f"I{i}" for i in range(1, 5)]


def test_extend_feasible_and_infeasible(runner, tmp_path, det_boxes, indet_boxes):
    good = write_box(tmp_path, det_boxes["D2"], "good.json")
    result = runner.invoke(main, ["extend", good])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["verdict"] == "feasible"

    bad = write_box(tmp_path, indet_boxes["I3"], "bad.json")
    result = runner.invoke(main, ["extend", bad])
    assert result.exit_code == 2
    report = json.loads(result.stdout)
    assert report["verdict"] == "infeasible"
    assert report["certificates"][0]["kind"] == "farkas"


def test_gm_round_trip(runner):
    result = runner.invoke(main, ["gm", "--c", "1/6"])
    assert result.exit_code == 0
    box = parse_box(result.output)
    assert len(box.scenario.contexts) == 9


def test_gm_rejects_bad_c(runner):
    assert runner.invoke(main, ["gm", "--c", "1/2"]).exit_code == 1
    assert runner.invoke(main, ["gm", "--c", "0.5"]).exit_code == 1


def test_ch_on_gm_box(runner, tmp_path):
    emitted = runner.invoke(main, ["gm", "--c", "1/4"])
    path = tmp_path / "gm.json"
    path.write_text(emitted.output)
    result = runner.invoke(main, ["ch", str(path)])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["verdict"] == "pass"
    assert len(report["values"]) == 36


def test_certify_gm_single(runner):
    result = runner.invoke(main, ["certify-gm", "--c", "1/6"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["verdict"] == "unphysical"
    cert = report["certificates"][0]
    assert cert["forced_point"] == ["1/12", "1/12", "1/12"]
    assert cert["verified"] is True


def test_certify_gm_grid(runner):
    result = runner.invoke(main, ["certify-gm", "--grid", "3"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert [c["c"] for c in report["certificates"]] == ["1/9", "2/9", "1/3"]


def test_certify_gm_requires_one_mode(runner):
    assert runner.invoke(main, ["certify-gm"]).exit_code == 1
    assert runner.invoke(main, ["certify-gm", "--c", "1/6", "--grid", "2"]).exit_code == 1


def test_noise_threshold(runner):
    result = runner.invoke(main, ["noise-threshold", "--vertex", "I2"])
    assert result.exit_code == 0
    assert json.loads(result.stdout)["threshold"] == "1/3"


def test_noise_threshold_unknown_vertex(runner):
    assert runner.invoke(main, ["noise-threshold", "--vertex", "D1"]).exit_code == 1


def test_missing_file_is_usage_error(runner, tmp_path):
    assert runner.invoke(main, ["check-nd", str(tmp_path / "nope.json")]).exit_code == 1


def test_malformed_box_is_usage_error(runner, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    assert runner.invoke(main, ["check-e1", str(path)]).exit_code == 1
