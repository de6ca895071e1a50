"""Typo suggestions for file keys using Levenshtein similarity."""

from collections.abc import Sequence

__all__ = ["get_suggestions", "levenshtein_distance", "format_suggestions"]


def levenshtein_distance(s1: str, s2: str) -> int:
    """Minimum number of single-character edits turning ``s1`` into ``s2``.

    Examples:
        >>> levenshtein_distance("gap_m", "gap_mm")
        1
        >>> levenshtein_distance("tip_count", "tip_count")
        0
    """
    if len(s1) < len(s2):
        s1, s2 = s2, s1
    if not s2:
        return len(s1)

    previous = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1):
        current = [i + 1]
        for j, c2 in enumerate(s2):
            current.append(min(previous[j + 1] + 1, current[j] + 1, previous[j] + (c1 != c2)))
        previous = current
    return previous[-1]


def get_suggestions(
    key: str,
    available_keys: Sequence[str],
    max_suggestions: int = 3,
    similarity_threshold: float = 0.6,
) -> list[tuple[str, float]]:
    """Rank known keys by similarity to a key that was not recognized.

    Similarity is ``1 - distance / max(len)``, case-insensitive; only keys at
    or above ``similarity_threshold`` are returned, best first, ties in the
    order of ``available_keys``.

    Examples:
        >>> get_suggestions("gpa_m", ["gap_m", "gap_mm", "stage_count"])
        [('gap_m', 0.6)]
    """
    if not key or not available_keys:
        return []

    scored = []
    for candidate in available_keys:
        longest = max(len(key), len(candidate))
        similarity = 1.0 - levenshtein_distance(key.lower(), candidate.lower()) / longest
        if similarity >= similarity_threshold:
            scored.append((candidate, similarity))

    scored.sort(key=lambda item: item[1], reverse=True)
    return scored[:max_suggestions]


def format_suggestions(suggestions: list[tuple[str, float]]) -> str:
    """Render suggestions for an error message; empty when there are none.

    Examples:
        >>> print(format_suggestions([("gap_m", 0.8)]))
        Did you mean one of these?
            - gap_m (80% match)
    """
    if not suggestions:
        return ""
    lines = ["Did you mean one of these?"]
    lines.extend(f"    - {name} ({int(round(score * 100))}% match)" for name, score in suggestions)
    return "\n".join(lines)
