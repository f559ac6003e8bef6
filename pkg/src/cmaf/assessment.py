"""Assessment documents: one organization's per-control responses.

Parsing checks the document on its own; :func:`bind` ties it to a catalog
and computes coverage. Controls with no response are scored as
``not_satisfied`` downstream, so coverage is always reported next to levels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from functools import cached_property

from . import _jsonio
from .catalog import Catalog, normalize_control_id
from .errors import CatalogMismatchError, SchemaError, UnknownControlError


class ResponseStatus(str, Enum):
    SATISFIED = "satisfied"
    PARTIALLY_SATISFIED = "partially_satisfied"
    NOT_SATISFIED = "not_satisfied"
    NOT_APPLICABLE = "not_applicable"


class AssessmentMethod(str, Enum):
    TABLE_TOP = "table_top"
    INTERVIEW = "interview"
    ON_SITE_VISIT = "on_site_visit"
    SELF_ASSESSMENT = "self_assessment"


SIZE_CLASSES = ("small", "mid", "large")
ENTITY_KINDS = ("OES", "DSP", "other")

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


@dataclass(frozen=True)
class OrgProfile:
    org_id: str
    display_name: str
    sector: str
    size_class: str
    entity_kind: str
    tags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "org_id": self.org_id,
            "display_name": self.display_name,
            "sector": self.sector,
            "size_class": self.size_class,
            "entity_kind": self.entity_kind,
        }
        if self.tags:
            out["tags"] = list(self.tags)
        return out


@dataclass(frozen=True)
class ControlResponse:
    control_id: str
    status: ResponseStatus
    evidence: str | None = None
    justification: str | None = None

    def to_dict(self) -> dict:
        out = {"control_id": self.control_id, "status": self.status.value}
        if self.evidence is not None:
            out["evidence"] = self.evidence
        if self.justification is not None:
            out["justification"] = self.justification
        return out


@dataclass(frozen=True)
class Assessment:
    assessment_id: str
    org: OrgProfile
    catalog_id: str
    catalog_version: str
    date: date
    methods: tuple[AssessmentMethod, ...]
    responses: tuple[ControlResponse, ...]


@dataclass(frozen=True)
class BoundAssessment:
    assessment: Assessment
    catalog: Catalog
    coverage: float
    unanswered: tuple[str, ...] = field(repr=False)

    @cached_property
    def statuses(self) -> dict[str, ResponseStatus]:
        return {r.control_id: r.status for r in self.assessment.responses}

    def status_of(self, control_id: str) -> ResponseStatus:
        """Effective status; unanswered controls count as not satisfied."""
        return self.statuses.get(control_id, ResponseStatus.NOT_SATISFIED)


# --------------------------------------------------------------------------
# parsing

_ROOT_KEYS = {"assessment_id", "org", "catalog_id", "catalog_version", "date", "methods", "responses"}
_ORG_KEYS = {"org_id", "display_name", "sector", "size_class", "entity_kind", "tags"}
_RESPONSE_KEYS = {"control_id", "status", "evidence", "justification"}


def _nonempty(obj: dict, key: str, path: str) -> str:
    value = _jsonio.field(obj, key, str, path)
    if not value.strip():
        raise SchemaError(f"{path}.{key}", "must not be empty")
    return value


def _enum(kind, raw: str, path: str):
    try:
        return kind(raw)
    except ValueError:
        allowed = ", ".join(m.value for m in kind)
        raise SchemaError(path, f"{raw!r} is not one of {allowed}") from None


def parse_date(raw: str, path: str) -> date:
    if not _DATE_RE.match(raw):
        raise SchemaError(path, "expected date YYYY-MM-DD")
    try:
        return date.fromisoformat(raw)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def org_from_dict(obj, path: str) -> OrgProfile:
    obj = _jsonio.expect_object(obj, path)
    _jsonio.reject_unknown(obj, _ORG_KEYS, path)
    size = _nonempty(obj, "size_class", path)
    if size not in SIZE_CLASSES:
        raise SchemaError(f"{path}.size_class", f"{size!r} is not one of {', '.join(SIZE_CLASSES)}")
    kind = _jsonio.field(obj, "entity_kind", str, path)
    if kind not in ENTITY_KINDS:
        raise SchemaError(f"{path}.entity_kind", f"{kind!r} is not one of {', '.join(ENTITY_KINDS)}")
    tags = _jsonio.field(obj, "tags", list, path, required=False, default=[])
    if not all(isinstance(t, str) and t for t in tags):
        raise SchemaError(f"{path}.tags", "expected array of non-empty strings")
    return OrgProfile(
        org_id=_nonempty(obj, "org_id", path),
        display_name=_jsonio.field(obj, "display_name", str, path),
        sector=_nonempty(obj, "sector", path),
        size_class=size,
        entity_kind=kind,
        tags=tuple(tags),
    )


def _response_from_dict(obj, path: str) -> ControlResponse:
    obj = _jsonio.expect_object(obj, path)
    _jsonio.reject_unknown(obj, _RESPONSE_KEYS, path)
    status = _enum(ResponseStatus, _jsonio.field(obj, "status", str, path), f"{path}.status")
    justification = _jsonio.field(obj, "justification", str, path, required=False)
    if status is ResponseStatus.NOT_APPLICABLE and not (justification and justification.strip()):
        raise SchemaError(f"{path}.justification", "justification required for not_applicable")
    return ControlResponse(
        control_id=normalize_control_id(_nonempty(obj, "control_id", path)),
        status=status,
        evidence=_jsonio.field(obj, "evidence", str, path, required=False),
        justification=justification,
    )


def assessment_from_dict(doc) -> Assessment:
    doc = _jsonio.expect_object(doc, "$")
    _jsonio.reject_unknown(doc, _ROOT_KEYS, "$")

    raw_methods = _jsonio.field(doc, "methods", list, "$")
    if not raw_methods:
        raise SchemaError("$.methods", "at least one assessment method is required")
    methods = []
    for i, m in enumerate(raw_methods):
        if not isinstance(m, str):
            raise SchemaError(f"$.methods[{i}]", "expected string")
        method = _enum(AssessmentMethod, m, f"$.methods[{i}]")
        if method in methods:
            raise SchemaError(f"$.methods[{i}]", f"method {m!r} listed twice")
        methods.append(method)

    responses = []
    first_seen: dict[str, int] = {}
    for i, r in enumerate(_jsonio.field(doc, "responses", list, "$")):
        resp = _response_from_dict(r, f"$.responses[{i}]")
        if resp.control_id in first_seen:
            raise SchemaError(
                f"$.responses[{i}].control_id",
                f"duplicate control_id {resp.control_id!r} (first at responses[{first_seen[resp.control_id]}])",
            )
        first_seen[resp.control_id] = i
        responses.append(resp)

    return Assessment(
        assessment_id=_nonempty(doc, "assessment_id", "$"),
        org=org_from_dict(_jsonio.field(doc, "org", dict, "$"), "$.org"),
        catalog_id=_jsonio.field(doc, "catalog_id", str, "$"),
        catalog_version=_jsonio.field(doc, "catalog_version", str, "$"),
        date=parse_date(_jsonio.field(doc, "date", str, "$"), "$.date"),
        methods=tuple(methods),
        responses=tuple(responses),
    )


def parse_assessment(document: str | bytes, *, source: str | None = None) -> Assessment:
    return assessment_from_dict(_jsonio.loads(document, source))


def assessment_to_dict(assessment: Assessment) -> dict:
    return {
        "assessment_id": assessment.assessment_id,
        "org": assessment.org.to_dict(),
        "catalog_id": assessment.catalog_id,
        "catalog_version": assessment.catalog_version,
        "date": assessment.date.isoformat(),
        "methods": [m.value for m in assessment.methods],
        "responses": [r.to_dict() for r in assessment.responses],
    }


def serialize_assessment(assessment: Assessment) -> str:
    return _jsonio.dumps(assessment_to_dict(assessment))


# --------------------------------------------------------------------------
# binding


def bind(assessment: Assessment, catalog: Catalog) -> BoundAssessment:
    if (assessment.catalog_id, assessment.catalog_version) != (catalog.catalog_id, catalog.version):
        raise CatalogMismatchError(
            f"assessment targets catalog {assessment.catalog_id}@{assessment.catalog_version}, "
            f"got {catalog.catalog_id}@{catalog.version}"
        )
    known = catalog.control_index
    unknown = [r.control_id for r in assessment.responses if r.control_id not in known]
    if unknown:
        raise UnknownControlError(unknown)
    answered = {r.control_id for r in assessment.responses}
    unanswered = tuple(cid for cid in known if cid not in answered)
    total = len(known)
    coverage = len(answered) / total if total else 0.0
    return BoundAssessment(assessment=assessment, catalog=catalog, coverage=coverage, unanswered=unanswered)


def blank_assessment(catalog: Catalog) -> Assessment:
    """Template listing every catalog control as not yet satisfied."""
    return Assessment(
        assessment_id="assessment-id",
        org=OrgProfile("org-id", "Organization name", "sector", "mid", "OES"),
        catalog_id=catalog.catalog_id,
        catalog_version=catalog.version,
        date=date(2000, 1, 1),
        methods=(AssessmentMethod.SELF_ASSESSMENT,),
        responses=tuple(
            ControlResponse(c.id, ResponseStatus.NOT_SATISFIED, evidence="") for c in catalog.controls()
        ),
    )
