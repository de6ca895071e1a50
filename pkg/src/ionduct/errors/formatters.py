"""Terminal colors for command-line diagnostics, with auto-detection."""

import os
import sys
from typing import TextIO

__all__ = ["enable_colors", "format_error", "format_warning", "format_success", "RED", "YELLOW", "GREEN", "RESET"]

RED = "\033[31m"
YELLOW = "\033[33m"
GREEN = "\033[32m"
RESET = "\033[0m"

_COLORS_ENABLED: bool | None = None


def _supports_color(stream: TextIO) -> bool:
    """Decide whether to color a stream.

    NO_COLOR and IONDUCT_NO_COLOR disable colors, FORCE_COLOR enables them,
    otherwise colors follow whether the stream is a TTY.
    """
    if os.environ.get("NO_COLOR") or os.environ.get("IONDUCT_NO_COLOR"):
        return False
    if os.environ.get("FORCE_COLOR"):
        return True
    return hasattr(stream, "isatty") and stream.isatty()


def enable_colors(enabled: bool | None = None) -> bool:
    """Enable or disable colored diagnostics; ``None`` auto-detects on stderr.

    Examples:
        >>> enable_colors(False)
        False
    """
    global _COLORS_ENABLED
    _COLORS_ENABLED = _supports_color(sys.stderr) if enabled is None else enabled
    return _COLORS_ENABLED


def _colorize(text: str, color: str) -> str:
    if _COLORS_ENABLED is None:
        enable_colors()
    return f"{color}{text}{RESET}" if _COLORS_ENABLED else text


def format_error(text: str) -> str:
    """Format text as an error (red)."""
    return _colorize(text, RED)


def format_warning(text: str) -> str:
    """Format text as a warning (yellow)."""
    return _colorize(text, YELLOW)


def format_success(text: str) -> str:
    """Format text as a success message (green)."""
    return _colorize(text, GREEN)
