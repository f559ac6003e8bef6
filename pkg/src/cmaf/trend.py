"""Level deltas between two score cards of the same organization."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from . import _jsonio
from .errors import TrendError
from .scoring import ScoreCard


@dataclass(frozen=True)
class TrendReport:
    org_id: str
    earlier: tuple[str, date]
    later: tuple[str, date]
    per_requirement_delta: dict[str, int]
    per_unit_delta: dict[str, int]
    per_pillar_delta: dict[str, int]
    overall_delta: int
    regressions: tuple[str, ...]
    improvements: tuple[str, ...]
    only_in_earlier: tuple[str, ...] = ()
    only_in_later: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "org_id": self.org_id,
            "earlier": {"assessment_id": self.earlier[0], "date": self.earlier[1].isoformat()},
            "later": {"assessment_id": self.later[0], "date": self.later[1].isoformat()},
            "overall_delta": self.overall_delta,
            "per_pillar_delta": dict(self.per_pillar_delta),
            "per_requirement_delta": dict(self.per_requirement_delta),
            "per_unit_delta": dict(self.per_unit_delta),
            "regressions": list(self.regressions),
            "improvements": list(self.improvements),
            "structural_changes": {
                "only_in_earlier": list(self.only_in_earlier),
                "only_in_later": list(self.only_in_later),
            },
        }


def _deltas(before: dict[str, int], after: dict[str, int]) -> dict[str, int]:
    return {k: after[k] - before[k] for k in after if k in before}


def diff(earlier: ScoreCard, later: ScoreCard) -> TrendReport:
    """Compare two cards; deltas are ``later - earlier``.

    Cards must share org and exact catalog id/version, and ``earlier`` must
    not postdate ``later``.
    """
    if earlier.org.org_id != later.org.org_id:
        raise TrendError(f"org mismatch: {earlier.org.org_id!r} vs {later.org.org_id!r}")
    if (earlier.catalog_id, earlier.catalog_version) != (later.catalog_id, later.catalog_version):
        raise TrendError(
            f"catalog mismatch: {earlier.catalog_id}@{earlier.catalog_version} "
            f"vs {later.catalog_id}@{later.catalog_version}"
        )
    if earlier.date > later.date:
        raise TrendError(f"earlier assessment dated {earlier.date} is after later one dated {later.date}")

    before_units = earlier.unit_levels
    after_units = later.unit_levels
    unit_delta = _deltas(before_units, after_units)
    return TrendReport(
        org_id=later.org.org_id,
        earlier=(earlier.assessment_id, earlier.date),
        later=(later.assessment_id, later.date),
        per_requirement_delta=_deltas(earlier.per_requirement, later.per_requirement),
        per_unit_delta=unit_delta,
        per_pillar_delta=_deltas(earlier.per_pillar, later.per_pillar),
        overall_delta=later.overall_level - earlier.overall_level,
        regressions=tuple(u for u, d in unit_delta.items() if d < 0),
        improvements=tuple(u for u, d in unit_delta.items() if d > 0),
        only_in_earlier=tuple(u for u in before_units if u not in after_units),
        only_in_later=tuple(u for u in after_units if u not in before_units),
    )


def serialize_trend(report: TrendReport) -> str:
    return _jsonio.dumps(report.to_dict())


def _signed(d: int) -> str:
    return f"+{d}" if d > 0 else str(d)


def render_trend_markdown(report: TrendReport, earlier: ScoreCard, later: ScoreCard) -> str:
    lines = [
        f"# CMAF progress: {report.org_id}",
        "",
        f"- Earlier: {report.earlier[0]} ({report.earlier[1].isoformat()}), overall level {earlier.overall_level}",
        f"- Later: {report.later[0]} ({report.later[1].isoformat()}), overall level {later.overall_level}",
        f"- Overall change: {_signed(report.overall_delta)}",
        "",
        "| Unit | Earlier | Later | Change |",
        "|---|---|---|---|",
    ]
    before, after = earlier.unit_levels, later.unit_levels
    for uid, d in report.per_unit_delta.items():
        lines.append(f"| {uid} | {before[uid]} | {after[uid]} | {_signed(d)} |")
    lines += ["", "Regressions: " + (", ".join(report.regressions) or "none")]
    lines.append("Improvements: " + (", ".join(report.improvements) or "none"))
    if report.only_in_earlier or report.only_in_later:
        lines.append(
            "Structural changes: removed " + (", ".join(report.only_in_earlier) or "none")
            + "; added " + (", ".join(report.only_in_later) or "none")
        )
    return "\n".join(lines) + "\n"
