from __future__ import annotations

import random
from datetime import date
from pathlib import Path

import pytest

from cmaf.assessment import (
    Assessment,
    AssessmentMethod,
    ControlResponse,
    OrgProfile,
    ResponseStatus,
    bind,
)
from cmaf.catalog import builtin_catalog
from cmaf.scoring import score_card

SAMPLES = Path(__file__).resolve().parents[1] / "src" / "cmaf" / "data" / "samples"

STATUSES = tuple(ResponseStatus)


def make_assessment(
    catalog,
    statuses: dict[str, ResponseStatus | str],
    *,
    assessment_id: str = "t-1",
    org_id: str = "org-1",
    display_name: str = "Test Org",
    sector: str = "healthcare",
    size_class: str = "mid",
    entity_kind: str = "OES",
    when: date = date(2024, 1, 1),
) -> Assessment:
    responses = []
    for cid, status in statuses.items():
        status = ResponseStatus(status)
        justification = "out of scope" if status is ResponseStatus.NOT_APPLICABLE else None
        responses.append(ControlResponse(cid, status, justification=justification))
    return Assessment(
        assessment_id=assessment_id,
        org=OrgProfile(org_id, display_name, sector, size_class, entity_kind),
        catalog_id=catalog.catalog_id,
        catalog_version=catalog.version,
        date=when,
        methods=(AssessmentMethod.SELF_ASSESSMENT,),
        responses=tuple(responses),
    )


def all_status(catalog, status) -> dict[str, ResponseStatus]:
    return {c.id: ResponseStatus(status) for c in catalog.controls()}


def random_statuses(catalog, rng: random.Random, *, answer_rate: float = 0.9) -> dict[str, ResponseStatus]:
    """Responses biased toward realistic profiles: mostly satisfied low levels."""
    out = {}
    for unit in catalog.leaves():
        cut = rng.randint(0, 5)
        for c in unit.controls:
            if rng.random() > answer_rate:
                continue
            if c.level <= cut:
                out[c.id] = rng.choice((ResponseStatus.SATISFIED,) * 6 + STATUSES)
            else:
                out[c.id] = rng.choice(STATUSES)
    return out


def card_for(catalog, statuses, **kw):
    return score_card(bind(make_assessment(catalog, statuses, **kw), catalog))


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def samples_dir() -> Path:
    return SAMPLES


def statuses_for_levels(catalog, levels: dict[str, int], default: int = 0) -> dict[str, ResponseStatus]:
    """Satisfy every control up to the wanted level of each leaf, fail the rest."""
    out = {}
    for unit in catalog.leaves():
        want = levels.get(unit.id, default)
        for c in unit.controls:
            out[c.id] = ResponseStatus.SATISFIED if c.level <= want else ResponseStatus.NOT_SATISFIED
    return out
