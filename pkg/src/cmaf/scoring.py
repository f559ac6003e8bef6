"""Maturity scoring: cumulative level gates per unit, minimum rollup, gap analysis.

A leaf unit attains level L when the gates of levels 1..L all pass. The
level-1 gate accepts partially satisfied controls; gates 2..5 need every
control satisfied (or not applicable). A level with no controls is vacuous
and passes. Requirements, pillars and the overall score take the minimum
of their parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from enum import Enum
from fractions import Fraction
from typing import Mapping

from . import _jsonio
from .assessment import BoundAssessment, OrgProfile, ResponseStatus, org_from_dict, parse_date
from .catalog import CONTROL_LEVELS, MAX_LEVEL, Unit, unit_sort_key
from .errors import SchemaError


class Gate(str, Enum):
    PASSED = "passed"
    FAILED = "failed"
    VACUOUS = "vacuous"


COUNT_KEYS = ("satisfied", "partially_satisfied", "not_satisfied", "not_applicable", "unanswered")


def control_passes(status: ResponseStatus, level: int) -> bool:
    if status is ResponseStatus.SATISFIED or status is ResponseStatus.NOT_APPLICABLE:
        return True
    if status is ResponseStatus.PARTIALLY_SATISFIED:
        return level == 1
    return False


@dataclass(frozen=True)
class UnitScore:
    unit_id: str
    attained_level: int
    gates: dict[int, Gate]
    failing: dict[int, tuple[str, ...]]
    counts: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "attained_level": self.attained_level,
            "gates": {str(lvl): g.value for lvl, g in self.gates.items()},
            "failing": {str(lvl): list(ids) for lvl, ids in self.failing.items() if ids},
            "counts": dict(self.counts),
        }


def score_unit(unit: Unit, responses: Mapping[str, ResponseStatus]) -> UnitScore:
    """Score one leaf unit. Controls missing from ``responses`` count as not satisfied."""
    if not unit.is_leaf:
        raise ValueError(f"score_unit needs a leaf unit; {unit.id} has sub-requirements")
    by_level: dict[int, list[str]] = {lvl: [] for lvl in CONTROL_LEVELS}
    failing: dict[int, list[str]] = {lvl: [] for lvl in CONTROL_LEVELS}
    counts = dict.fromkeys(COUNT_KEYS, 0)
    for control in unit.controls:
        status = responses.get(control.id)
        if status is None:
            counts["unanswered"] += 1
            status = ResponseStatus.NOT_SATISFIED
        else:
            counts[status.value] += 1
        if control.level in by_level:
            by_level[control.level].append(control.id)
            if not control_passes(status, control.level):
                failing[control.level].append(control.id)

    gates: dict[int, Gate] = {}
    attained = 0
    climbing = True
    for lvl in CONTROL_LEVELS:
        if lvl in unit.vacuous_levels or not by_level[lvl]:
            gates[lvl] = Gate.VACUOUS
        elif failing[lvl]:
            gates[lvl] = Gate.FAILED
        else:
            gates[lvl] = Gate.PASSED
        if climbing and gates[lvl] is not Gate.FAILED:
            attained = lvl
        else:
            climbing = False
    if unit.vacuous_levels:
        for lvl in unit.vacuous_levels:
            if lvl in failing:
                failing[lvl] = []
    return UnitScore(
        unit_id=unit.id,
        attained_level=attained,
        gates=gates,
        failing={lvl: tuple(ids) for lvl, ids in failing.items()},
        counts=counts,
    )


@dataclass(frozen=True)
class ScoreCard:
    assessment_id: str
    org: OrgProfile
    catalog_id: str
    catalog_version: str
    date: date
    per_unit: dict[str, UnitScore]
    per_requirement: dict[str, int]
    per_pillar: dict[str, int]
    overall_level: int
    mean_requirement_level: Fraction
    coverage: float

    @property
    def unit_levels(self) -> dict[str, int]:
        """Level of every unit: requirements and scored leaves, in catalog order."""
        levels: dict[str, int] = {}
        for rid, lvl in self.per_requirement.items():
            levels[rid] = lvl
            for uid, score in self.per_unit.items():
                if uid.startswith(rid + "."):
                    levels[uid] = score.attained_level
        return levels


def _rollup(per_unit: dict[str, UnitScore], catalog) -> tuple[dict, dict, int, Fraction]:
    per_requirement = {}
    for req in catalog.requirements():
        if req.is_leaf:
            per_requirement[req.id] = per_unit[req.id].attained_level
        else:
            per_requirement[req.id] = min(per_unit[c.id].attained_level for c in req.children)
    per_pillar = {p.id: min(per_requirement[r.id] for r in p.requirements) for p in catalog.pillars}
    overall = min(per_pillar.values())
    mean = Fraction(sum(per_requirement.values()), len(per_requirement))
    return per_requirement, per_pillar, overall, mean


def score_card(bound: BoundAssessment) -> ScoreCard:
    statuses = bound.statuses
    per_unit = {u.id: score_unit(u, statuses) for u in bound.catalog.leaves()}
    per_requirement, per_pillar, overall, mean = _rollup(per_unit, bound.catalog)
    a = bound.assessment
    return ScoreCard(
        assessment_id=a.assessment_id,
        org=a.org,
        catalog_id=a.catalog_id,
        catalog_version=a.catalog_version,
        date=a.date,
        per_unit=per_unit,
        per_requirement=per_requirement,
        per_pillar=per_pillar,
        overall_level=overall,
        mean_requirement_level=mean,
        coverage=bound.coverage,
    )


# --------------------------------------------------------------------------
# gap analysis


@dataclass(frozen=True)
class BlockingControl:
    control_id: str
    level: int
    statement: str
    status: ResponseStatus
    answered: bool

    def to_dict(self) -> dict:
        return {
            "control_id": self.control_id,
            "level": self.level,
            "statement": self.statement,
            "status": self.status.value,
            "answered": self.answered,
        }


@dataclass(frozen=True)
class UnitGap:
    unit_id: str
    title: str
    attained_level: int
    target_level: int
    blocking_controls: tuple[BlockingControl, ...]

    @property
    def satisfied_at_target(self) -> bool:
        return self.attained_level == MAX_LEVEL

    def to_dict(self) -> dict:
        return {
            "unit_id": self.unit_id,
            "title": self.title,
            "attained_level": self.attained_level,
            "target_level": self.target_level,
            "satisfied_at_target": self.satisfied_at_target,
            "blocking_controls": [b.to_dict() for b in self.blocking_controls],
        }


@dataclass(frozen=True)
class GapReport:
    assessment_id: str
    units: tuple[UnitGap, ...]

    def unit(self, unit_id: str) -> UnitGap:
        for gap in self.units:
            if gap.unit_id == unit_id:
                return gap
        raise KeyError(unit_id)

    def to_dict(self) -> dict:
        return {"assessment_id": self.assessment_id, "units": [g.to_dict() for g in self.units]}


def gap_analysis(bound: BoundAssessment, card: ScoreCard | None = None, *, lang: str | None = None) -> GapReport:
    """Controls that keep each leaf unit from its next level.

    Because gates are cumulative, every gate up to the attained level has
    already passed, so the blocking set is exactly the failing controls of
    the target-level gate.
    """
    if card is None:
        card = score_card(bound)
    index = bound.catalog.control_index
    statuses = bound.statuses
    gaps = []
    for unit in sorted(bound.catalog.leaves(), key=lambda u: unit_sort_key(u.id)):
        score = card.per_unit[unit.id]
        target = min(score.attained_level + 1, MAX_LEVEL)
        blocking: list[BlockingControl] = []
        if score.attained_level < MAX_LEVEL:
            for lvl in range(1, target + 1):
                for cid in score.failing[lvl]:
                    control = index[cid]
                    blocking.append(BlockingControl(
                        control_id=cid,
                        level=lvl,
                        statement=control.text(lang),
                        status=statuses.get(cid, ResponseStatus.NOT_SATISFIED),
                        answered=cid in statuses,
                    ))
        gaps.append(UnitGap(unit.id, unit.title, score.attained_level, target, tuple(blocking)))
    return GapReport(card.assessment_id, tuple(gaps))


# --------------------------------------------------------------------------
# serialization


def scorecard_to_dict(card: ScoreCard) -> dict:
    return {
        "assessment_id": card.assessment_id,
        "org": card.org.to_dict(),
        "catalog_id": card.catalog_id,
        "catalog_version": card.catalog_version,
        "date": card.date.isoformat(),
        "overall_level": card.overall_level,
        "mean_requirement_level": round(float(card.mean_requirement_level), 2),
        "coverage": card.coverage,
        "pillars": dict(card.per_pillar),
        "requirements": dict(card.per_requirement),
        "units": {uid: s.to_dict() for uid, s in card.per_unit.items()},
    }


def serialize_scorecard(card: ScoreCard) -> str:
    return _jsonio.dumps(scorecard_to_dict(card))


def _level(value, path: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= MAX_LEVEL:
        raise SchemaError(path, "expected level 0..5")
    return value


def _unit_score_from_dict(uid: str, obj, path: str) -> UnitScore:
    obj = _jsonio.expect_object(obj, path)
    _jsonio.reject_unknown(obj, {"attained_level", "gates", "failing", "counts"}, path)
    attained = _level(obj.get("attained_level"), f"{path}.attained_level")
    raw_gates = _jsonio.field(obj, "gates", dict, path)
    gates = {}
    for lvl in CONTROL_LEVELS:
        raw = raw_gates.get(str(lvl))
        try:
            gates[lvl] = Gate(raw)
        except ValueError:
            raise SchemaError(f"{path}.gates.{lvl}", "expected passed, failed or vacuous") from None
    raw_failing = _jsonio.field(obj, "failing", dict, path, required=False, default={})
    failing = {lvl: tuple(raw_failing.get(str(lvl), ())) for lvl in CONTROL_LEVELS}
    raw_counts = _jsonio.field(obj, "counts", dict, path, required=False, default={})
    counts = {k: raw_counts.get(k, 0) for k in COUNT_KEYS}
    expected = 0
    for lvl in CONTROL_LEVELS:
        if gates[lvl] is Gate.FAILED:
            break
        expected = lvl
    if expected != attained:
        raise SchemaError(f"{path}.attained_level", f"gates imply level {expected}, document says {attained}")
    return UnitScore(uid, attained, gates, failing, counts)


def scorecard_from_dict(doc) -> ScoreCard:
    doc = _jsonio.expect_object(doc, "$")
    _jsonio.reject_unknown(doc, {
        "assessment_id", "org", "catalog_id", "catalog_version", "date", "overall_level",
        "mean_requirement_level", "coverage", "pillars", "requirements", "units",
    }, "$")
    requirements = {
        rid: _level(v, f"$.requirements.{rid}") for rid, v in _jsonio.field(doc, "requirements", dict, "$").items()
    }
    if not requirements:
        raise SchemaError("$.requirements", "must not be empty")
    pillars = {pid: _level(v, f"$.pillars.{pid}") for pid, v in _jsonio.field(doc, "pillars", dict, "$").items()}
    overall = _level(doc.get("overall_level"), "$.overall_level")
    if pillars and overall != min(pillars.values()):
        raise SchemaError("$.overall_level", "must equal the minimum pillar level")
    mean = Fraction(sum(requirements.values()), len(requirements))
    stated = doc.get("mean_requirement_level")
    if not isinstance(stated, (int, float)) or isinstance(stated, bool) or round(float(mean), 2) != stated:
        raise SchemaError("$.mean_requirement_level", f"expected {round(float(mean), 2)}")
    coverage = doc.get("coverage")
    if not isinstance(coverage, (int, float)) or isinstance(coverage, bool) or not 0 <= coverage <= 1:
        raise SchemaError("$.coverage", "expected number in [0, 1]")
    units = {
        uid: _unit_score_from_dict(uid, obj, f"$.units.{uid}")
        for uid, obj in _jsonio.field(doc, "units", dict, "$").items()
    }
    return ScoreCard(
        assessment_id=_jsonio.field(doc, "assessment_id", str, "$"),
        org=org_from_dict(_jsonio.field(doc, "org", dict, "$"), "$.org"),
        catalog_id=_jsonio.field(doc, "catalog_id", str, "$"),
        catalog_version=_jsonio.field(doc, "catalog_version", str, "$"),
        date=parse_date(_jsonio.field(doc, "date", str, "$"), "$.date"),
        per_unit=units,
        per_requirement=requirements,
        per_pillar=pillars,
        overall_level=overall,
        mean_requirement_level=mean,
        coverage=float(coverage),
    )


def parse_scorecard(document: str | bytes, *, source: str | None = None) -> ScoreCard:
    return scorecard_from_dict(_jsonio.loads(document, source))
