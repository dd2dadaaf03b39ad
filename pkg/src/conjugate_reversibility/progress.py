"""
Progress reporting for batch analysis and self-tests.
"""

import logging
import threading
from typing import Optional, Protocol

from tqdm import tqdm

logger = logging.getLogger(__name__)


class ProgressCallback(Protocol):
    """Called once per finished item."""

    def __call__(self, name: str, completed: int, total: int, exit_code: int) -> None:
        """Progress callback signature.

        Args:
            name: Label of the item that just finished
            completed: Items finished so far, this one included
            total: Items in the run
            exit_code: The item's exit code (0 on success)
        """
        ...


class ProgressTracker:
    """Thread-safe completion counter feeding a callback."""

    def __init__(self, total: int, callback: Optional[ProgressCallback] = None):
        self.total = total
        self.callback = callback
        self.completed = 0
        self.failed = 0
        self._lock = threading.Lock()

    @property
    def percentage(self) -> float:
        return 100.0 if self.total == 0 else 100.0 * self.completed / self.total

    def update(self, name: str, exit_code: int = 0) -> None:
        with self._lock:
            self.completed += 1
            if exit_code != 0:
                self.failed += 1
            completed = self.completed
        logger.debug("%s finished with exit code %d (%d/%d)", name, exit_code, completed, self.total)
        if self.callback:
            self.callback(name=name, completed=completed, total=self.total, exit_code=exit_code)


def create_tqdm_callback(desc: str = "Analyzing") -> ProgressCallback:
    """Progress callback drawing a tqdm bar; the bar closes on the last item."""
    pbar: Optional[tqdm] = None

    def callback(name: str, completed: int, total: int, exit_code: int) -> None:
        nonlocal pbar
        if pbar is None:
            pbar = tqdm(total=total, desc=desc, unit="matrix")
        pbar.set_postfix_str(name if exit_code == 0 else f"{name} (exit {exit_code})")
        pbar.update(completed - pbar.n)
        if completed >= total:
            pbar.close()
            pbar = None

    return callback


def create_log_callback() -> ProgressCallback:
    """Progress callback writing one log line per item."""

    def callback(name: str, completed: int, total: int, exit_code: int) -> None:
        logger.info("[%d/%d] %s: exit %d", completed, total, name, exit_code)

    return callback
