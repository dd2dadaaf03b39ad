"""
Batch analysis of a directory of matrix files with concurrent workers.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Union

from .analysis import ALL_OUTPUTS, AnalysisReport, Output, ReversibilityAnalyzer, emit_report
from .exceptions import InvalidInputError
from .matrix_io import detect_format
from .progress import ProgressCallback, ProgressTracker
from .utils import validate_output_dir

logger = logging.getLogger(__name__)

MATRIX_EXTENSIONS = (".json", ".csv")


@dataclass
class BatchItem:
    """One analyzed file.

    Attributes:
        input_path: Matrix file
        output_path: Report file written for it
        report: The analysis report
    """

    input_path: str
    output_path: str
    report: AnalysisReport

    @property
    def exit_code(self) -> int:
        return self.report.exit_code


def report_path(input_path: str, output_dir: str, mode: str = "json") -> str:
    """Deterministic report name: ``<stem>.report.json`` or ``<stem>.report.txt``."""
    stem, _ = os.path.splitext(os.path.basename(input_path))
    suffix = "json" if mode == "json" else "txt"
    return os.path.join(output_dir, f"{stem}.report.{suffix}")


def list_matrix_files(directory: str) -> List[str]:
    """Matrix files directly under ``directory``, sorted by name.

    Raises:
        InvalidInputError: If directory does not exist
    """
    if not os.path.isdir(directory):
        raise InvalidInputError(f"Batch directory not found: {directory}")
    names = sorted(
        name
        for name in os.listdir(directory)
        if os.path.splitext(name)[1].lower() in MATRIX_EXTENSIONS
        and os.path.isfile(os.path.join(directory, name))
    )
    return [os.path.join(directory, name) for name in names]


class BatchAnalyzer:
    """Analyze many matrix files in parallel, one report file each."""

    def __init__(self, analyzer: Optional[ReversibilityAnalyzer] = None, max_workers: int = 4):
        """Initialize batch analyzer.

        Args:
            analyzer: ReversibilityAnalyzer to use (a default one when None)
            max_workers: Maximum number of concurrent analyses
        """
        if max_workers < 1:
            raise InvalidInputError(f"max_workers must be at least 1, got {max_workers}")
        self.analyzer = analyzer or ReversibilityAnalyzer()
        self.max_workers = max_workers

    def analyze_directory(
        self,
        directory: str,
        output_dir: Optional[str] = None,
        **kwargs,
    ) -> List[BatchItem]:
        """Analyze every matrix file in a directory.

        Reports go to ``output_dir`` (default ``<directory>/reports``).
        """
        files = list_matrix_files(directory)
        output_dir = output_dir or os.path.join(directory, "reports")
        return self.analyze_files(files, output_dir, **kwargs)

    def analyze_files(
        self,
        files: List[str],
        output_dir: str,
        fmt: Optional[str] = None,
        outputs: Iterable[Union[str, Output]] = ALL_OUTPUTS,
        preset: Optional[str] = None,
        sl_check: bool = True,
        tolerance_overrides: Optional[Mapping[str, float]] = None,
        mode: str = "json",
        progress_callback: Optional[ProgressCallback] = None,
    ) -> List[BatchItem]:
        """Analyze files concurrently and write their reports.

        Args:
            files: Matrix file paths
            output_dir: Directory receiving the reports
            fmt: Matrix format; detected per file from the extension when None
            outputs: Parts of the pipeline to report
            preset: Tolerance preset
            sl_check: Require det = 1
            tolerance_overrides: Named tolerance values
            mode: "json" or "text"
            progress_callback: Optional progress callback

        Returns:
            BatchItem list in the order of ``files``
        """
        validate_output_dir(output_dir)
        outputs = frozenset(outputs)
        tracker = ProgressTracker(len(files), progress_callback)
        logger.info("analyzing %d files with %d workers", len(files), self.max_workers)

        items = {}
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_file = {
                executor.submit(
                    self._analyze_single,
                    path,
                    output_dir,
                    fmt,
                    outputs,
                    preset,
                    sl_check,
                    tolerance_overrides,
                    mode,
                ): path
                for path in files
            }
            for future in as_completed(future_to_file):
                path = future_to_file[future]
                item = future.result()
                items[path] = item
                tracker.update(os.path.basename(path), item.exit_code)

        return [items[path] for path in files]

    def _analyze_single(
        self,
        input_path: str,
        output_dir: str,
        fmt: Optional[str],
        outputs: frozenset,
        preset: Optional[str],
        sl_check: bool,
        tolerance_overrides: Optional[Mapping[str, float]],
        mode: str,
    ) -> BatchItem:
        report = self.analyzer.analyze_file(
            input_path,
            fmt or detect_format(input_path),
            outputs,
            preset,
            sl_check,
            tolerance_overrides,
        )
        output_path = report_path(input_path, output_dir, mode)
        with open(output_path, "wb") as f:
            f.write(emit_report(report, mode))
        return BatchItem(input_path, output_path, report)


def batch_exit_code(items: List[BatchItem]) -> int:
    """Largest per-file exit code, 0 for an empty batch."""
    return max((item.exit_code for item in items), default=0)
