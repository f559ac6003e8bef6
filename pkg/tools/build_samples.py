"""Regenerate the fictitious sample assessments under src/cmaf/data/samples/.

The three organizations mirror the kind of pilot mix used to validate the
framework (low, medium and high expected maturity); every value is invented.
A second, later assessment of the healthcare operator supports trend demos.

Usage: python3 tools/build_samples.py
"""

import json
import random
from pathlib import Path

from cmaf.catalog import builtin_catalog

OUT = Path(__file__).resolve().parents[1] / "src" / "cmaf" / "data" / "samples"

ORGS = {
    "healthcare-2024": (
        {"org_id": "gr-hosp-017", "display_name": "Example Regional Hospital", "sector": "healthcare",
         "size_class": "mid", "entity_kind": "OES"},
        "2024-03-12", ["table_top", "interview", "on_site_visit"], (0, 2), 11,
    ),
    "healthcare-2025": (
        {"org_id": "gr-hosp-017", "display_name": "Example Regional Hospital", "sector": "healthcare",
         "size_class": "mid", "entity_kind": "OES"},
        "2025-04-02", ["self_assessment"], (1, 3), 12,
    ),
    "digital-infrastructure-2024": (
        {"org_id": "gr-ixp-004", "display_name": "Example Internet Exchange", "sector": "digital-infrastructure",
         "size_class": "mid", "entity_kind": "OES"},
        "2024-05-20", ["table_top", "interview", "on_site_visit"], (2, 3), 21,
    ),
    "air-transport-2024": (
        {"org_id": "gr-air-001", "display_name": "Example International Airport", "sector": "air-transport",
         "size_class": "large", "entity_kind": "OES"},
        "2024-06-18", ["table_top", "interview", "on_site_visit"], (3, 5), 31,
    ),
}


def responses_for(catalog, level_range, seed):
    rng = random.Random(seed)
    out = []
    for unit in catalog.leaves():
        target = rng.randint(*level_range)
        for control in unit.controls:
            if control.level <= target:
                status = "satisfied"
            elif control.level == target + 1:
                status = rng.choice(["partially_satisfied", "not_satisfied", "satisfied"])
            else:
                status = "not_satisfied"
            roll = rng.random()
            if roll < 0.04 and level_range[0] == 0:
                continue  # left unanswered
            response = {"control_id": control.id, "status": status}
            if status == "satisfied":
                response["evidence"] = f"Reviewed during assessment ({unit.title})."
            if roll > 0.985 and control.level > 1:
                response = {
                    "control_id": control.id,
                    "status": "not_applicable",
                    "justification": "Service not operated by the organization.",
                }
            out.append(response)
    return out


def main():
    catalog = builtin_catalog()
    OUT.mkdir(parents=True, exist_ok=True)
    for name, (org, when, methods, level_range, seed) in ORGS.items():
        doc = {
            "assessment_id": name,
            "org": org,
            "catalog_id": catalog.catalog_id,
            "catalog_version": catalog.version,
            "date": when,
            "methods": methods,
            "responses": responses_for(catalog, level_range, seed),
        }
        (OUT / f"{name}.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
