"""Control catalog: maturity scale, catalog hierarchy, parsing and validation.

A catalog is a three-pillar tree (IDENTIFICATION, PROTECTION, DEFENSE) of
requirements, optionally split into sub-requirements. Leaf units hold
controls, each bound to one maturity level in 1..5.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property, lru_cache
from importlib import resources
from typing import Iterator

from . import _jsonio
from .errors import InvariantError, SchemaError


class MaturityLevel(IntEnum):
    INCOMPLETE = 0
    INITIAL = 1
    BASIC = 2
    ADVANCED = 3
    EFFECTIVE = 4
    EFFICIENT = 5

    @property
    def ordinal(self) -> int:
        return int(self)

    @property
    def short_name(self) -> str:
        return _LEVEL_NAMES[self][0]

    @property
    def long_name(self) -> str:
        return _LEVEL_NAMES[self][1]

    @property
    def label(self) -> str:
        """Display form, e.g. ``"Advanced - Defined"``."""
        return f"{self.short_name} - {self.long_name}"


_LEVEL_NAMES = {
    0: ("Incomplete", "Not existing"),
    1: ("Initial", "Reactive"),
    2: ("Basic", "Managed"),
    3: ("Advanced", "Defined"),
    4: ("Effective", "Quantitatively Managed"),
    5: ("Efficient", "Optimized"),
}

LEVELS = tuple(MaturityLevel)
CONTROL_LEVELS = (1, 2, 3, 4, 5)
MAX_LEVEL = 5

PILLAR_TITLES = {"A": "IDENTIFICATION", "B": "PROTECTION", "C": "DEFENSE"}

UNIT_ID_RE = re.compile(r"^[A-Z][0-9]+(\.[0-9]+)?$")
CONTROL_ID_RE = re.compile(r"^(?P<unit>[A-Z][0-9]+(?:\.[0-9]+)?)-L(?P<level>[0-9])-(?P<seq>[0-9]{2})$")
_LOOSE_UNIT_RE = re.compile(r"^([A-Z])\.?([0-9]+)(?:\.([0-9]+))?\.?$")

BUILTIN_CATALOG_RESOURCE = "data/cmaf_catalog.json"


def normalize_unit_id(raw: str) -> str:
    """Map the mixed id styles (``C.17``, ``B.10.1.``, ``B8``) onto ``C17``/``B10.1``/``B8``."""
    m = _LOOSE_UNIT_RE.match(raw.strip())
    if not m:
        return raw
    letter, major, minor = m.groups()
    return f"{letter}{int(major)}" + (f".{int(minor)}" if minor is not None else "")


def normalize_control_id(raw: str) -> str:
    head, sep, tail = raw.partition("-")
    if not sep:
        return raw
    return f"{normalize_unit_id(head)}-{tail}"


def unit_sort_key(unit_id: str) -> tuple:
    """Natural order for unit ids: A1 < A6 < B7 < B7.1 < B10 < C17."""
    m = _LOOSE_UNIT_RE.match(unit_id)
    if not m:
        return (unit_id, 0, -1)
    letter, major, minor = m.groups()
    return (letter, int(major), -1 if minor is None else int(minor))


@dataclass(frozen=True)
class Control:
    id: str
    statement: str
    level: int
    guidance: str | None = None
    translations: dict[str, str] = field(default_factory=dict, compare=True, hash=False)

    def text(self, lang: str | None = None) -> str:
        if lang and lang in self.translations:
            return self.translations[lang]
        return self.statement


@dataclass(frozen=True)
class Unit:
    id: str
    title: str
    kind: str  # "requirement" | "sub-requirement"
    controls: tuple[Control, ...] = ()
    children: tuple[Unit, ...] = ()
    vacuous_levels: tuple[int, ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def controls_at(self, level: int) -> list[Control]:
        return [c for c in self.controls if c.level == level]


@dataclass(frozen=True)
class Pillar:
    id: str
    title: str
    requirements: tuple[Unit, ...]


@dataclass(frozen=True)
class Catalog:
    catalog_id: str
    version: str
    pillars: tuple[Pillar, ...]

    def requirements(self) -> Iterator[Unit]:
        for pillar in self.pillars:
            yield from pillar.requirements

    def units(self) -> Iterator[Unit]:
        """Every unit in document order, parents before their children."""
        for req in self.requirements():
            yield req
            yield from req.children

    def leaves(self) -> Iterator[Unit]:
        return (u for u in self.units() if u.is_leaf)

    def controls(self) -> Iterator[Control]:
        for unit in self.leaves():
            yield from unit.controls

    @cached_property
    def unit_index(self) -> dict[str, Unit]:
        return {u.id: u for u in self.units()}

    @cached_property
    def control_index(self) -> dict[str, Control]:
        return {c.id: c for c in self.controls()}

    @cached_property
    def control_owner(self) -> dict[str, str]:
        return {c.id: u.id for u in self.leaves() for c in u.controls}

    @cached_property
    def pillar_of(self) -> dict[str, str]:
        return {r.id: p.id for p in self.pillars for r in p.requirements}

    def unit(self, unit_id: str) -> Unit:
        return self.unit_index[unit_id]


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    path: str
    message: str

    def to_dict(self) -> dict:
        return {"severity": self.severity, "path": self.path, "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {
            "errors": len(self.errors),
            "warnings": len(self.warnings),
            "findings": [f.to_dict() for f in self.findings],
        }


def validate_catalog(catalog: Catalog) -> ValidationReport:
    """Check every catalog invariant and return the findings; never raises."""
    findings: list[Finding] = []

    def error(path: str, message: str) -> None:
        findings.append(Finding("error", path, message))

    def warn(path: str, message: str) -> None:
        findings.append(Finding("warning", path, message))

    pillar_ids = [p.id for p in catalog.pillars]
    if pillar_ids != list(PILLAR_TITLES):
        error("pillars", f"expected pillars A, B, C in order, found {', '.join(pillar_ids) or 'none'}")

    seen_units: dict[str, str] = {}
    seen_controls: dict[str, str] = {}

    def check_unit(unit: Unit, path: str, parent: Unit | None) -> None:
        if not UNIT_ID_RE.match(unit.id):
            error(path, f"malformed unit id {unit.id!r}")
        if unit.id in seen_units:
            error(path, f"duplicate unit id {unit.id!r} (also at {seen_units[unit.id]})")
        else:
            seen_units[unit.id] = path
        if parent is None:
            if "." in unit.id:
                error(path, f"requirement id {unit.id!r} must not carry a sub-requirement suffix")
        else:
            if not unit.id.startswith(parent.id + ".") or unit.id.count(".") != 1:
                error(path, f"dangling child id {unit.id!r}: must extend parent {parent.id!r} with a dotted suffix")
            if unit.children:
                error(path, "sub-requirements cannot have sub-requirements")
        if not unit.title.strip():
            error(path, "unit title is empty")

        if unit.controls and unit.children:
            error(path, "unit has controls and children")
        elif not unit.controls and not unit.children:
            error(path, "unit has neither controls nor children")

        for lvl in unit.vacuous_levels:
            if lvl not in CONTROL_LEVELS:
                error(path, f"vacuous level {lvl} must be 1..5")
        if len(set(unit.vacuous_levels)) != len(unit.vacuous_levels):
            error(path, "vacuous_levels lists a level twice")
        if unit.children and unit.vacuous_levels:
            error(path, "vacuous_levels only apply to units with controls")

        for i, control in enumerate(unit.controls):
            cpath = f"{path}/controls[{i}]"
            if control.level not in CONTROL_LEVELS:
                error(cpath, "control level must be 1..5")
            m = CONTROL_ID_RE.match(control.id)
            if not m:
                error(cpath, f"malformed control id {control.id!r}; expected <unit>-L<level>-<nn>")
            else:
                if m["unit"] != unit.id:
                    error(cpath, f"control id names unit {m['unit']!r} but is owned by {unit.id!r}")
                if int(m["level"]) != control.level:
                    error(cpath, f"control id names level {m['level']} but level field is {control.level}")
            if control.id in seen_controls:
                error(cpath, f"duplicate control id {control.id!r} (also at {seen_controls[control.id]})")
            else:
                seen_controls[control.id] = cpath
            if not control.statement.strip():
                error(cpath, "control statement is empty")
            if control.level in unit.vacuous_levels:
                error(cpath, f"level {control.level} is marked vacuous but has controls")

        if unit.controls:
            populated = {c.level for c in unit.controls}
            for lvl in CONTROL_LEVELS:
                if lvl not in populated and lvl not in unit.vacuous_levels:
                    warn(path, f"no level-{lvl} controls and level not marked vacuous")

        for child in unit.children:
            check_unit(child, f"{path}/{child.id}", unit)

    for pillar in catalog.pillars:
        ppath = pillar.id
        expected_title = PILLAR_TITLES.get(pillar.id)
        if expected_title is None:
            error(ppath, f"unknown pillar id {pillar.id!r}")
        elif pillar.title != expected_title:
            error(ppath, f"pillar {pillar.id} title must be {expected_title!r}")
        if not pillar.requirements:
            error(ppath, "pillar has no requirements")
        for req in pillar.requirements:
            rpath = f"{ppath}/{req.id}"
            if not req.id.startswith(pillar.id):
                error(rpath, f"requirement {req.id!r} does not belong to pillar {pillar.id}")
            check_unit(req, rpath, None)

    return ValidationReport(tuple(findings))


# --------------------------------------------------------------------------
# parsing / serialization

_CATALOG_KEYS = {"catalog_id", "version", "pillars"}
_PILLAR_KEYS = {"id", "title", "requirements"}
_UNIT_KEYS = {"id", "title", "sub_requirements", "controls", "vacuous_levels"}
_CONTROL_KEYS = {"id", "level", "statement", "guidance", "translations"}


def _parse_control(obj, path: str) -> Control:
    obj = _jsonio.expect_object(obj, path)
    _jsonio.reject_unknown(obj, _CONTROL_KEYS, path)
    translations = _jsonio.field(obj, "translations", dict, path, required=False, default={})
    for lang, text in translations.items():
        if not isinstance(text, str):
            raise SchemaError(f"{path}.translations.{lang}", "expected string")
    return Control(
        id=normalize_control_id(_jsonio.field(obj, "id", str, path)),
        statement=_jsonio.field(obj, "statement", str, path),
        level=_jsonio.field(obj, "level", int, path),
        guidance=_jsonio.field(obj, "guidance", str, path, required=False),
        translations=dict(translations),
    )


def _parse_unit(obj, path: str, kind: str) -> Unit:
    obj = _jsonio.expect_object(obj, path)
    _jsonio.reject_unknown(obj, _UNIT_KEYS, path)
    unit_id = normalize_unit_id(_jsonio.field(obj, "id", str, path))
    path = f"{path}[{unit_id}]"
    subs = _jsonio.field(obj, "sub_requirements", list, path, required=False, default=[])
    controls = _jsonio.field(obj, "controls", list, path, required=False, default=[])
    vacuous = _jsonio.field(obj, "vacuous_levels", list, path, required=False, default=[])
    for i, lvl in enumerate(vacuous):
        if not isinstance(lvl, int) or isinstance(lvl, bool):
            raise SchemaError(f"{path}.vacuous_levels[{i}]", "expected integer")
    return Unit(
        id=unit_id,
        title=_jsonio.field(obj, "title", str, path),
        kind=kind,
        controls=tuple(_parse_control(c, f"{path}.controls[{i}]") for i, c in enumerate(controls)),
        children=tuple(_parse_unit(s, f"{path}.sub_requirements[{i}]", "sub-requirement") for i, s in enumerate(subs)),
        vacuous_levels=tuple(vacuous),
    )


def catalog_from_dict(doc) -> Catalog:
    """Build a Catalog from decoded JSON, checking the schema only (no invariants)."""
    doc = _jsonio.expect_object(doc, "$")
    _jsonio.reject_unknown(doc, _CATALOG_KEYS, "$")
    pillars = []
    for i, p in enumerate(_jsonio.field(doc, "pillars", list, "$")):
        ppath = f"$.pillars[{i}]"
        p = _jsonio.expect_object(p, ppath)
        _jsonio.reject_unknown(p, _PILLAR_KEYS, ppath)
        reqs = _jsonio.field(p, "requirements", list, ppath)
        pillars.append(Pillar(
            id=_jsonio.field(p, "id", str, ppath),
            title=_jsonio.field(p, "title", str, ppath),
            requirements=tuple(
                _parse_unit(r, f"{ppath}.requirements[{j}]", "requirement") for j, r in enumerate(reqs)
            ),
        ))
    return Catalog(
        catalog_id=_jsonio.field(doc, "catalog_id", str, "$"),
        version=_jsonio.field(doc, "version", str, "$"),
        pillars=tuple(pillars),
    )


def parse_catalog(document: str | bytes, *, source: str | None = None) -> Catalog:
    """Parse a catalog document and enforce every error-level invariant.

    Raises DocumentSyntaxError, SchemaError or InvariantError. Coverage
    warnings do not fail parsing; run :func:`validate_catalog` to see them.
    """
    catalog = catalog_from_dict(_jsonio.loads(document, source))
    report = validate_catalog(catalog)
    if report.errors:
        raise InvariantError(report.errors)
    return catalog


def _control_to_dict(control: Control) -> dict:
    out: dict = {"id": control.id, "level": control.level, "statement": control.statement}
    if control.guidance is not None:
        out["guidance"] = control.guidance
    if control.translations:
        out["translations"] = dict(control.translations)
    return out


def _unit_to_dict(unit: Unit) -> dict:
    out: dict = {"id": unit.id, "title": unit.title}
    if unit.children:
        out["sub_requirements"] = [_unit_to_dict(c) for c in unit.children]
    if unit.controls:
        out["controls"] = [_control_to_dict(c) for c in unit.controls]
    if unit.vacuous_levels:
        out["vacuous_levels"] = list(unit.vacuous_levels)
    return out


def catalog_to_dict(catalog: Catalog) -> dict:
    return {
        "catalog_id": catalog.catalog_id,
        "version": catalog.version,
        "pillars": [
            {"id": p.id, "title": p.title, "requirements": [_unit_to_dict(r) for r in p.requirements]}
            for p in catalog.pillars
        ],
    }


def serialize_catalog(catalog: Catalog) -> str:
    return _jsonio.dumps(catalog_to_dict(catalog))


def builtin_catalog_text() -> str:
    return resources.files("cmaf").joinpath(BUILTIN_CATALOG_RESOURCE).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def builtin_catalog() -> Catalog:
    """The canonical CMAF catalog shipped with the package.

    Control statements are illustrative authored data; pass a different
    catalog document to substitute them.
    """
    return parse_catalog(builtin_catalog_text(), source=BUILTIN_CATALOG_RESOURCE)
