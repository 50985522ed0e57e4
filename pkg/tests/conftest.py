import pytest

from epsbm.core.validation import RawSpace, validate_space
from epsbm.formats.space_file import emit_space


@pytest.fixture
def two_point_space():
    """Two points at distance 1 with equal weights."""
    return validate_space(RawSpace(dist=[[0.0, 1.0], [1.0, 0.0]], weights=[0.5, 0.5]))


@pytest.fixture
def path_space():
    """The path a - b - c with unit steps and weights (1/4, 1/2, 1/4)."""
    return validate_space(
        RawSpace(
            labels=["a", "b", "c"],
            dist=[[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]],
            weights=[0.25, 0.5, 0.25],
        )
    )


@pytest.fixture
def far_space():
    """A path whose end points are 3.5 apart, more than pi."""
    return validate_space(
        RawSpace(
            dist=[[0.0, 1.75, 3.5], [1.75, 0.0, 1.75], [3.5, 1.75, 0.0]],
            weights=[0.25, 0.5, 0.25],
        )
    )


@pytest.fixture
def write_space(tmp_path):
    """Write a space to an mms-1 file and return its path as a string."""

    def _write(space, name="space.mms"):
        path = tmp_path / name
        path.write_text(emit_space(space), encoding="utf-8")
        return str(path)

    return _write
