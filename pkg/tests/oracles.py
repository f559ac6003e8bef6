"""Brute-force reference implementations, deliberately independent of cmaf's code paths."""

from __future__ import annotations

PASSING_AT_LEVEL_1 = {"satisfied", "partially_satisfied", "not_applicable"}
PASSING_ABOVE_1 = {"satisfied", "not_applicable"}


def control_ok(status: str, level: int) -> bool:
    return status in (PASSING_AT_LEVEL_1 if level == 1 else PASSING_ABOVE_1)


def oracle_level(controls: list[tuple[int, str]], vacuous: set[int] = frozenset()) -> int:
    """Largest L such that every control at a level <= L passes.

    ``controls`` is (level, status) pairs. Tries every candidate level from
    the top down instead of walking gates upward.
    """
    for candidate in range(5, -1, -1):
        if all(control_ok(s, lvl) for lvl, s in controls if lvl <= candidate and lvl not in vacuous):
            return candidate
    return 0


def spearman_no_ties(x, y) -> float:
    """Textbook 1 - 6*sum(d^2)/(n(n^2-1)); valid only without ties."""
    n = len(x)
    rank_x = {v: i + 1 for i, v in enumerate(sorted(x))}
    rank_y = {v: i + 1 for i, v in enumerate(sorted(y))}
    d2 = sum((rank_x[a] - rank_y[b]) ** 2 for a, b in zip(x, y))
    return 1 - 6 * d2 / (n * (n * n - 1))
