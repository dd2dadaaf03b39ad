"""
Utility functions for file validation, formatting and logging setup.
"""

import logging
import os
from typing import Optional

from .exceptions import InvalidInputError

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def validate_input_file(path: str) -> None:
    """Validate that an input file exists and is readable.

    Args:
        path: Path to input file

    Raises:
        InvalidInputError: If file doesn't exist or is not accessible
    """
    if not os.path.exists(path):
        raise InvalidInputError(f"Input file not found: {path}")

    if not os.path.isfile(path):
        raise InvalidInputError(f"Input path is not a file: {path}")

    if not os.access(path, os.R_OK):
        raise InvalidInputError(f"Input file is not readable: {path}")


def validate_output_dir(path: str) -> None:
    """Create an output directory if needed and check that it is writable.

    Raises:
        InvalidInputError: If the directory cannot be created or written
    """
    if not os.path.exists(path):
        try:
            os.makedirs(path, exist_ok=True)
        except OSError as e:
            raise InvalidInputError(f"Cannot create output directory: {path}. Error: {e}")

    if not os.path.isdir(path):
        raise InvalidInputError(f"Output path is not a directory: {path}")

    if not os.access(path, os.W_OK):
        raise InvalidInputError(f"Output directory is not writable: {path}")


def format_complex(z: complex, digits: int = 6) -> str:
    """Format a complex number compactly, dropping a zero imaginary part."""
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


def configure_logging(level: str = "WARNING", log_file: Optional[str] = None) -> None:
    """Configure root logging for command-line use.

    Args:
        level: Logging level name
        log_file: Optional file receiving log records instead of stderr
    """
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        raise InvalidInputError(f"Unknown log level: {level}")

    handlers = [logging.FileHandler(log_file)] if log_file else [logging.StreamHandler()]
    logging.basicConfig(level=numeric, format=LOG_FORMAT, handlers=handlers, force=True)
