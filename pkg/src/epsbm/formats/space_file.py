"""Reader and writer for the mms-1 space file format.

Layout::

    mms-1
    N
    label_1 ... label_N
    w_1 ... w_N
    d_11 ... d_1N
    ...
    d_N1 ... d_NN
    # key = value        (optional metadata lines)

Numbers are written with 17 significant digits, which round-trips doubles.
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from epsbm.config.settings import ValidationConfig
from epsbm.core.errors import EpsBMError, SpaceFileSyntaxError
from epsbm.core.models import MetricMeasureSpace
from epsbm.core.validation import RawSpace, validate_space
from epsbm.utils.file_utils import atomic_write_text

logger = logging.getLogger(__name__)

FORMAT_VERSION = "mms-1"


def _content_lines(text: str) -> list[tuple[int, str]]:
    """Non-blank, non-comment lines with their 1-based line numbers."""
    out = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            out.append((number, stripped))
    return out


def _numbers(number: int, line: str, count: int, what: str) -> list[float]:
    tokens = line.split()
    if len(tokens) != count:
        raise SpaceFileSyntaxError(
            number, f"expected {count} {what}, found {len(tokens)}"
        )
    try:
        return [float(tok) for tok in tokens]
    except ValueError as e:
        raise SpaceFileSyntaxError(number, f"malformed number in {what}: {e}") from None


def parse_space(
    text: str, config: Optional[ValidationConfig] = None
) -> MetricMeasureSpace:
    """
    Parse an mms-1 document into a validated space.

    Args:
        text: File contents
        config: Validation config; defaults to the global one

    Returns:
        Validated MetricMeasureSpace

    Raises:
        SpaceFileSyntaxError: If the layout is broken (carries the line number)
        SpaceValidationError: If the parsed space violates an invariant
    """
    lines = _content_lines(text)
    if not lines or lines[0][1] != FORMAT_VERSION:
        where = lines[0][0] if lines else 1
        raise SpaceFileSyntaxError(where, f"expected format header {FORMAT_VERSION!r}")
    if len(lines) < 2:
        raise SpaceFileSyntaxError(lines[0][0] + 1, "missing point count")

    number, line = lines[1]
    try:
        size = int(line)
    except ValueError:
        raise SpaceFileSyntaxError(
            number, f"point count {line!r} is not an integer"
        ) from None
    if size < 1:
        raise SpaceFileSyntaxError(number, f"point count must be >= 1, got {size}")

    expected = 4 + size
    if len(lines) < expected:
        last = lines[-1][0]
        raise SpaceFileSyntaxError(
            last + 1,
            f"expected {size} labels, weights and {size} matrix rows; "
            f"file ends after {max(0, len(lines) - 4)} rows",
        )
    if len(lines) > expected:
        raise SpaceFileSyntaxError(
            lines[expected][0], "unexpected content after matrix"
        )

    number, line = lines[2]
    labels = line.split()
    if len(labels) != size:
        raise SpaceFileSyntaxError(
            number, f"expected {size} labels, found {len(labels)}"
        )
    weights = _numbers(*lines[3], size, "weights")
    rows = [_numbers(num, row, size, "distances") for num, row in lines[4:]]

    logger.debug("parsed %d-point space", size)
    return validate_space(RawSpace(labels=labels, dist=rows, weights=weights), config)


def read_space_metadata(text: str) -> dict[str, str]:
    """Collect the ``# key = value`` lines of a space file."""
    meta = {}
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped.startswith("#"):
            continue
        key, sep, value = stripped.lstrip("#").partition("=")
        if sep:
            meta[key.strip()] = value.strip()
    return meta


def _fmt(values: np.ndarray) -> str:
    return " ".join(format(float(v), ".17g") for v in values)


def emit_space(
    space: MetricMeasureSpace, metadata: Optional[dict[str, object]] = None
) -> str:
    """
    Serialize a space to mms-1 text.

    Raises:
        EpsBMError: If a label is empty or contains whitespace
    """
    for label in space.labels:
        if not label or len(label.split()) != 1 or label.startswith("#"):
            raise EpsBMError(f"label {label!r} cannot be written to a space file")
    lines = [
        FORMAT_VERSION,
        str(space.size),
        " ".join(space.labels),
        _fmt(space.weights),
    ]
    lines.extend(_fmt(row) for row in space.dist)
    for key, value in (metadata or {}).items():
        lines.append(f"# {key} = {value}")
    return "\n".join(lines) + "\n"


def read_space_file(
    path: str | Path, config: Optional[ValidationConfig] = None
) -> MetricMeasureSpace:
    """Read and validate a space file."""
    return parse_space(Path(path).read_text(encoding="utf-8"), config)


def write_space_file(
    path: str | Path,
    space: MetricMeasureSpace,
    metadata: Optional[dict[str, object]] = None,
) -> Path:
    """Write a space file atomically."""
    return atomic_write_text(path, emit_space(space, metadata))
