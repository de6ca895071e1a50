from .enums import Metric, Severity, StrEnum, StudyParameter, Target
from .search import first_true, golden_section_argmax, last_true
from .types import FloatArray, PathLike, Point

__all__ = [
    "StrEnum",
    "Severity",
    "Target",
    "Metric",
    "StudyParameter",
    "PathLike",
    "Point",
    "FloatArray",
    "golden_section_argmax",
    "first_true",
    "last_true",
]
