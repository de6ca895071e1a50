from .formatters import enable_colors, format_error, format_success, format_warning
from .suggestions import format_suggestions, get_suggestions, levenshtein_distance

__all__ = [
    # Formatters
    "enable_colors",
    "format_error",
    "format_warning",
    "format_success",
    # Suggestions
    "levenshtein_distance",
    "get_suggestions",
    "format_suggestions",
]
