from .report import CoverageTable, ShapeMismatch, coverage, failure_times, scatter_csv, scatter_rows
from .runner import (
    RECORD_FIELDS,
    RunRecord,
    RunSpec,
    expand_config,
    read_records,
    records_to_csv,
    run_matrix,
    run_one,
    write_matrix_output,
)

__all__ = [
    "RECORD_FIELDS", "CoverageTable", "RunRecord", "RunSpec", "ShapeMismatch", "coverage",
    "expand_config", "failure_times", "read_records", "records_to_csv", "run_matrix",
    "run_one", "scatter_csv", "scatter_rows", "write_matrix_output",
]
