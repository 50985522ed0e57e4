"""Run reports and their JSON and CSV renderings."""

import csv
import io
from typing import Any, Literal

from pydantic import BaseModel, SerializeAsAny

from epsbm.core.errors import UnsupportedFormat
from epsbm.services.concentration import ConcentrationProfile

ReportFormat = Literal["json", "csv"]

PROFILE_COLUMNS = ["r", "alpha", "exactness", "bound_thm1", "bound_improved"]


class RunReport(BaseModel):
    """
    One command run: what was asked, what came out, and how long it took.

    The parameters carry everything needed to rerun the command (eps, n,
    t grid, seeds, sample counts).
    """

    command: str
    parameters: dict[str, Any]
    payload: SerializeAsAny[BaseModel]
    wall_time_s: float = 0.0


def _cell(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def profile_csv(profile: ConcentrationProfile) -> str:
    """CSV table of a concentration profile, one row per radius."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(PROFILE_COLUMNS)
    for row in zip(
        profile.r_values,
        profile.alpha_values,
        profile.exactness,
        profile.bound1_values,
        profile.bound2_values,
        strict=True,
    ):
        r, alpha, exactness, bound1, bound2 = row
        writer.writerow(
            [_cell(r), _cell(alpha), exactness, _cell(bound1), _cell(bound2)]
        )
    return buffer.getvalue()


def emit_report(
    report: RunReport, fmt: ReportFormat = "json", *, with_timing: bool = True
) -> str:
    """
    Render a report.

    Args:
        report: The run report
        fmt: "json" (full report, fields in declaration order) or "csv"
            (concentration profiles only)
        with_timing: Keep wall_time_s in the JSON output

    Returns:
        Report text ending in a newline

    Raises:
        UnsupportedFormat: For csv on a non-profile payload or an unknown format
    """
    if fmt == "json":
        exclude = None if with_timing else {"wall_time_s"}
        return report.model_dump_json(indent=2, exclude=exclude) + "\n"
    if fmt == "csv":
        if not isinstance(report.payload, ConcentrationProfile):
            raise UnsupportedFormat(
                f"csv output is only available for concentration profiles, "
                f"not {type(report.payload).__name__}"
            )
        return profile_csv(report.payload)
    raise UnsupportedFormat(f"unknown report format {fmt!r}")
