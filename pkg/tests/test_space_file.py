import pytest

from epsbm.core import RawSpace, SpaceValidationError, validate_space
from epsbm.core.errors import EpsBMError, SpaceFileSyntaxError
from epsbm.formats.space_file import (
    emit_space,
    parse_space,
    read_space_file,
    read_space_metadata,
    write_space_file,
)
from epsbm.services.discretize import discretize_sphere

from .strategies import random_metric_space

TWO_POINT = """mms-1
2
p q
0.5 0.5
0 1
1 0
"""


def test_parse_minimal_file():
    space = parse_space(TWO_POINT)
    assert space.labels == ("p", "q")
    assert space.dist.tolist() == [[0.0, 1.0], [1.0, 0.0]]
    assert space.weights.tolist() == [0.5, 0.5]


def test_parse_missing_row_reports_line():
    text = "mms-1\n3\na b c\n0.25 0.5 0.25\n0 1 2\n1 0 1\n"
    with pytest.raises(SpaceFileSyntaxError) as excinfo:
        parse_space(text)
    assert excinfo.value.line == 7
    assert str(excinfo.value).startswith("line 7:")


def test_parse_bad_header():
    with pytest.raises(SpaceFileSyntaxError) as excinfo:
        parse_space("mms-2\n1\na\n1\n0\n")
    assert excinfo.value.line == 1


def test_parse_bad_number():
    with pytest.raises(SpaceFileSyntaxError) as excinfo:
        parse_space(TWO_POINT.replace("0.5 0.5", "0.5 half"))
    assert excinfo.value.line == 4


def test_parse_wrong_row_length():
    with pytest.raises(SpaceFileSyntaxError) as excinfo:
        parse_space(TWO_POINT.replace("1 0\n", "1 0 3\n"))
    assert excinfo.value.line == 6


def test_parse_trailing_content():
    with pytest.raises(SpaceFileSyntaxError) as excinfo:
        parse_space(TWO_POINT + "0 0\n")
    assert excinfo.value.line == 7


def test_parse_runs_validation():
    with pytest.raises(SpaceValidationError):
        parse_space(TWO_POINT.replace("1 0\n", "2 0\n"))


def test_metadata_lines_are_ignored_and_readable(two_point_space):
    text = emit_space(two_point_space, {"seed": 7, "mc_samples": 1000})
    assert text.endswith("# seed = 7\n# mc_samples = 1000\n")
    assert parse_space(text) == two_point_space
    assert read_space_metadata(text) == {"seed": "7", "mc_samples": "1000"}


def test_emit_parse_random_space():
    space = random_metric_space(99, 9)
    assert parse_space(emit_space(space)) == space


def test_emit_parse_discretized_sphere(tmp_path):
    space = discretize_sphere(2, 12, 20_000, seed=5, cloud_size=1500).space
    path = write_space_file(tmp_path / "sphere.mms", space)
    assert read_space_file(path) == space


def test_emit_rejects_unwritable_labels():
    space = validate_space(
        RawSpace(labels=["a b", "c"], dist=[[0, 1], [1, 0]], weights=[0.5, 0.5])
    )
    with pytest.raises(EpsBMError):
        emit_space(space)
