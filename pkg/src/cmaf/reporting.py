"""SVG seals and radar charts, plus markdown/JSON/CSV reports.

Every renderer is a pure function of its inputs: numbers are formatted with
fixed precision and nothing time-dependent is written unless a ``stamp``
string is passed in explicitly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .catalog import MAX_LEVEL, PILLAR_TITLES, Catalog, MaturityLevel
from .scoring import COUNT_KEYS, GapReport, ScoreCard, scorecard_to_dict

# Level 0 -> level 5, red to blue. Red strictly decreases and blue strictly
# increases along the list; tests rely on it.
PALETTE = ("#DC281E", "#C86428", "#AA9632", "#6EAA5A", "#3C82AA", "#1E3CC8")

REPORT_FORMATS = ("md", "json", "csv")
_FORMAT_ALIASES = {"markdown": "md", "md": "md", "json": "json", "csv": "csv"}


def hex_to_rgb(color: str) -> tuple[int, int, int]:
    color = color.lstrip("#")
    return int(color[0:2], 16), int(color[2:4], 16), int(color[4:6], 16)


def _num(x: float) -> str:
    text = f"{x:.2f}"
    return "0.00" if text == "-0.00" else text


@dataclass(frozen=True)
class SealSpec:
    level: int
    palette: tuple[str, ...] = PALETTE

    def __post_init__(self):
        if not isinstance(self.level, int) or not 0 <= self.level <= MAX_LEVEL:
            raise ValueError(f"seal level must be 0..5, got {self.level!r}")
        if len(self.palette) != 6:
            raise ValueError("seal palette needs exactly 6 colors")

    @property
    def ring_count(self) -> int:
        return self.level + 1


def render_seal(level: int, palette: tuple[str, ...] = PALETTE, *, stamp: str | None = None) -> str:
    """Concentric-circle seal: one ring for level 0 up to six for level 5.

    Ring ``i`` (0 = innermost) is filled with ``palette[i]``. Circles are
    emitted outermost first so inner rings paint on top.
    """
    spec = SealSpec(level, tuple(palette))
    size = 200
    c = size / 2
    step = 15
    label = MaturityLevel(level).label
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"  <title>Maturity level {level}: {escape(label)}</title>",
    ]
    if stamp:
        lines.append(f"  <!-- generated {escape(stamp)} -->")
    for ring in reversed(range(spec.ring_count)):
        lines.append(
            f'  <circle cx="{_num(c)}" cy="{_num(c)}" r="{_num(step * (ring + 1))}" '
            f'fill="{spec.palette[ring]}" stroke="#FFFFFF" stroke-width="2" data-ring="{ring}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def radar_axes(card: ScoreCard, sub_requirements: bool = False) -> list[tuple[str, int]]:
    if sub_requirements:
        return [(uid, s.attained_level) for uid, s in card.per_unit.items()]
    return list(card.per_requirement.items())


def render_radar(card: ScoreCard, *, sub_requirements: bool = False, stamp: str | None = None) -> str:
    """Spider chart: one axis per requirement (or per scored leaf unit)."""
    axes = radar_axes(card, sub_requirements)
    if not axes:
        raise ValueError("score card has no requirement levels to plot")
    size = 640
    c = size / 2
    radius = 220.0
    n = len(axes)

    def point(k: int, r: float) -> tuple[float, float]:
        angle = -math.pi / 2 + 2 * math.pi * k / n
        return c + r * math.cos(angle), c + r * math.sin(angle)

    def points(rs) -> str:
        return " ".join(f"{_num(x)},{_num(y)}" for x, y in (point(k, r) for k, r in enumerate(rs)))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="12">',
        f"  <title>Maturity profile {escape(card.assessment_id)}</title>",
    ]
    if stamp:
        out.append(f"  <!-- generated {escape(stamp)} -->")
    out.append('  <g id="grid" fill="none" stroke="#CCCCCC">')
    for lvl in range(1, MAX_LEVEL + 1):
        out.append(
            f'    <polygon class="grid" data-level="{lvl}" points="{points([radius * lvl / MAX_LEVEL] * n)}"/>'
        )
    out.append("  </g>")
    out.append('  <g id="axes" stroke="#888888">')
    for k, (uid, _) in enumerate(axes):
        x, y = point(k, radius)
        out.append(
            f'    <line class="axis" data-unit="{escape(uid)}" x1="{_num(c)}" y1="{_num(c)}" '
            f'x2="{_num(x)}" y2="{_num(y)}"/>'
        )
    out.append("  </g>")
    out.append('  <g id="labels" fill="#333333" text-anchor="middle" dominant-baseline="middle">')
    for k, (uid, lvl) in enumerate(axes):
        x, y = point(k, radius + 24)
        out.append(f'    <text class="label" x="{_num(x)}" y="{_num(y)}">{escape(uid)} ({lvl})</text>')
    for lvl in range(1, MAX_LEVEL + 1):
        x, y = point(0, radius * lvl / MAX_LEVEL)
        out.append(f'    <text class="tick" x="{_num(x + 8)}" y="{_num(y)}" font-size="9">{lvl}</text>')
    out.append("  </g>")
    out.append(
        f'  <polygon class="profile" fill="#1E3CC8" fill-opacity="0.25" stroke="#1E3CC8" stroke-width="2" '
        f'points="{points([radius * lvl / MAX_LEVEL for _, lvl in axes])}"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# reports


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|").replace("\n", " ")


def _titles(card: ScoreCard, gaps: GapReport, catalog: Catalog | None) -> dict[str, str]:
    titles = {g.unit_id: g.title for g in gaps.units}
    if catalog is not None:
        titles.update({u.id: u.title for u in catalog.units()})
    return titles


def _pillar_titles(catalog: Catalog | None) -> dict[str, str]:
    if catalog is None:
        return dict(PILLAR_TITLES)
    return {p.id: p.title for p in catalog.pillars}


def _gap_section(gaps: GapReport) -> list[str]:
    lines = ["## Gap analysis", ""]
    open_gaps = [g for g in gaps.units if not g.satisfied_at_target]
    if not open_gaps:
        lines.append("Every unit has attained level 5; no blocking controls remain.")
    for g in open_gaps:
        lines += [
            f"### {g.unit_id} {_md_cell(g.title)}: level {g.attained_level} to {g.target_level}",
            "",
            "| Control | Level | Status | Statement |",
            "|---|---|---|---|",
        ]
        for b in g.blocking_controls:
            lines.append(f"| {b.control_id} | {b.level} | {_status(b)} | {_md_cell(b.statement)} |")
        lines.append("")
    return lines


def _status(b) -> str:
    return b.status.value if b.answered else "unanswered"


def _render_markdown(card: ScoreCard, gaps: GapReport, catalog: Catalog | None, stamp: str | None) -> str:
    titles = _titles(card, gaps, catalog)
    pillar_titles = _pillar_titles(catalog)
    total_controls = sum(sum(s.counts.values()) for s in card.per_unit.values())
    answered = total_controls - sum(s.counts["unanswered"] for s in card.per_unit.values())
    org = card.org
    lines = [
        f"# CMAF maturity report: {card.assessment_id}",
        "",
        f"- Organization: {org.display_name} ({org.org_id})",
        f"- Sector: {org.sector}; size: {org.size_class}; entity: {org.entity_kind}",
        f"- Catalog: {card.catalog_id} {card.catalog_version}",
        f"- Assessment date: {card.date.isoformat()}",
        f"- Overall level: {card.overall_level} ({MaturityLevel(card.overall_level).label})",
        f"- Mean requirement level: {float(card.mean_requirement_level):.2f}",
        f"- Coverage: {card.coverage * 100:.1f}% ({answered} of {total_controls} controls answered)",
    ]
    if stamp:
        lines.append(f"- Generated: {stamp}")

    by_pillar: dict[str, list[str]] = {pid: [] for pid in card.per_pillar}
    for rid in card.per_requirement:
        by_pillar.setdefault(rid[0], []).append(rid)
    unit_levels = card.unit_levels

    for pid, rids in by_pillar.items():
        plevel = card.per_pillar.get(pid)
        heading = f"## Pillar {pid}: {pillar_titles.get(pid, '')}"
        if plevel is not None:
            heading += f" (level {plevel}, {MaturityLevel(plevel).label})"
        lines += ["", heading, "", "| Unit | Title | Level | Maturity |", "|---|---|---|---|"]
        for rid in rids:
            for uid, lvl in unit_levels.items():
                if uid == rid or uid.startswith(rid + "."):
                    name = uid if uid == rid else f"&nbsp;&nbsp;{uid}"
                    lines.append(
                        f"| {name} | {_md_cell(titles.get(uid, ''))} | {lvl} | {MaturityLevel(lvl).label} |"
                    )

    lines += [""] + _gap_section(gaps)
    return "\n".join(lines).rstrip("\n") + "\n"


def _render_csv(card: ScoreCard, gaps: GapReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["unit_id", "kind", "parent", "attained_level", "controls", *COUNT_KEYS, "blocking"])
    blocking = {g.unit_id: len(g.blocking_controls) for g in gaps.units}
    for rid, lvl in card.per_requirement.items():
        children = [s for uid, s in card.per_unit.items() if uid.startswith(rid + ".")]
        if children:
            members = children
        else:
            members = [card.per_unit[rid]] if rid in card.per_unit else []
        counts = {k: sum(s.counts[k] for s in members) for k in COUNT_KEYS}
        writer.writerow([
            rid, "requirement", "", lvl, sum(counts.values()), *(counts[k] for k in COUNT_KEYS),
            sum(blocking.get(s.unit_id, 0) for s in members),
        ])
        for s in children:
            writer.writerow([
                s.unit_id, "sub-requirement", rid, s.attained_level, sum(s.counts.values()),
                *(s.counts[k] for k in COUNT_KEYS), blocking.get(s.unit_id, 0),
            ])
    return buf.getvalue()


def report_to_dict(card: ScoreCard, gaps: GapReport, stamp: str | None = None) -> dict:
    out = {"scorecard": scorecard_to_dict(card), "gaps": gaps.to_dict()}
    if stamp:
        out["generated"] = stamp
    return out


def render_report(
    card: ScoreCard,
    gaps: GapReport,
    format: str = "md",
    *,
    catalog: Catalog | None = None,
    stamp: str | None = None,
) -> str:
    fmt = _FORMAT_ALIASES.get(format)
    if fmt is None:
        raise ValueError(f"unknown report format {format!r}; expected md, json or csv")
    if gaps.assessment_id != card.assessment_id:
        raise ValueError("score card and gap report come from different assessments")
    if fmt == "md":
        return _render_markdown(card, gaps, catalog, stamp)
    if fmt == "csv":
        return _render_csv(card, gaps)
    return json.dumps(report_to_dict(card, gaps, stamp), indent=2, ensure_ascii=False) + "\n"


def render_gaps(gaps: GapReport, format: str = "md") -> str:
    fmt = _FORMAT_ALIASES.get(format)
    if fmt is None:
        raise ValueError(f"unknown report format {format!r}; expected md, json or csv")
    if fmt == "json":
        return json.dumps(gaps.to_dict(), indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["unit_id", "attained_level", "target_level", "control_id", "level", "status", "statement"])
        for g in gaps.units:
            for b in g.blocking_controls:
                writer.writerow([g.unit_id, g.attained_level, g.target_level, b.control_id, b.level, _status(b), b.statement])
        return buf.getvalue()
    return "\n".join(_gap_section(gaps)).rstrip("\n") + "\n"
