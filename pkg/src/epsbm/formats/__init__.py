"""Space files and run reports."""

from .reports import RunReport, emit_report, profile_csv
from .space_file import (
    emit_space,
    parse_space,
    read_space_file,
    read_space_metadata,
    write_space_file,
)

__all__ = [
    "RunReport",
    "emit_report",
    "emit_space",
    "parse_space",
    "profile_csv",
    "read_space_file",
    "read_space_metadata",
    "write_space_file",
]
