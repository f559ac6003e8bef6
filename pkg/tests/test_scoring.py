from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmaf.assessment import ResponseStatus, bind, parse_assessment
from cmaf.catalog import Catalog, Control, Pillar, Unit, builtin_catalog
from cmaf.errors import SchemaError
from cmaf.scoring import (
    Gate,
    gap_analysis,
    parse_scorecard,
    score_card,
    score_unit,
    scorecard_to_dict,
    serialize_scorecard,
)

from conftest import all_status, card_for, make_assessment, random_statuses
from oracles import oracle_level

S, P, N, NA = (
    ResponseStatus.SATISFIED,
    ResponseStatus.PARTIALLY_SATISFIED,
    ResponseStatus.NOT_SATISFIED,
    ResponseStatus.NOT_APPLICABLE,
)


def unit_with(levels: list[int], uid: str = "X1", vacuous=()) -> Unit:
    seq: dict[int, int] = {}
    controls = []
    for lvl in levels:
        seq[lvl] = seq.get(lvl, 0) + 1
        controls.append(Control(f"{uid}-L{lvl}-{seq[lvl]:02d}", f"control {lvl}.{seq[lvl]}", lvl))
    return Unit(uid, "Test unit", "requirement", controls=tuple(controls), vacuous_levels=tuple(vacuous))


def responses(unit: Unit, statuses) -> dict:
    return {c.id: s for c, s in zip(unit.controls, statuses) if s is not None}


# -- score_unit examples ---------------------------------------------------


def test_all_not_satisfied_is_level_0():
    u = unit_with([1, 1, 2, 3, 4, 5])
    assert score_unit(u, responses(u, [N] * 6)).attained_level == 0


def test_all_satisfied_is_level_5():
    u = unit_with([1, 1, 2, 3, 4, 5])
    score = score_unit(u, responses(u, [S] * 6))
    assert score.attained_level == 5
    assert set(score.gates.values()) == {Gate.PASSED}


def test_gap_in_the_middle_stops_the_climb():
    u = unit_with([1, 2, 3, 4, 5])
    statuses = [S, S, N, S, S]
    expected = oracle_level([(c.level, s.value) for c, s in zip(u.controls, statuses)])
    assert expected == 2  # frozen from the oracle
    score = score_unit(u, responses(u, statuses))
    assert score.attained_level == expected
    assert score.gates[3] is Gate.FAILED
    assert score.gates[4] is Gate.PASSED
    assert score.failing[3] == ("X1-L3-01",)


def test_partial_level_1_control_gives_level_1():
    u = unit_with([1, 2, 3, 4, 5])
    assert score_unit(u, responses(u, [P, N, N, N, N])).attained_level == 1


def test_partial_above_level_1_fails_the_gate():
    u = unit_with([1, 2, 3, 4, 5])
    assert score_unit(u, responses(u, [S, P, S, S, S])).attained_level == 1


def test_not_applicable_passes_every_gate():
    u = unit_with([1, 2, 3, 4, 5])
    assert score_unit(u, responses(u, [NA] * 5)).attained_level == 5


def test_unanswered_counts_as_not_satisfied():
    u = unit_with([1, 2])
    score = score_unit(u, {})
    assert score.attained_level == 0
    assert score.counts["unanswered"] == 2


def test_vacuous_levels_pass():
    u = unit_with([1, 2, 5], vacuous=(3, 4))
    score = score_unit(u, responses(u, [S, S, N]))
    assert score.attained_level == 4
    assert score.gates[3] is Gate.VACUOUS and score.gates[5] is Gate.FAILED


def test_every_level_vacuous_reaches_5():
    u = Unit("X1", "empty", "requirement", controls=(), vacuous_levels=(1, 2, 3, 4, 5))
    score = score_unit(u, {})
    assert score.attained_level == 5 and set(score.gates.values()) == {Gate.VACUOUS}


def test_non_leaf_rejected(catalog):
    with pytest.raises(ValueError):
        score_unit(catalog.unit("B8"), {})


# -- oracle equivalence ------------------------------------------------------


@st.composite
def unit_and_statuses(draw):
    populated = draw(st.lists(st.integers(1, 5), min_size=1, max_size=3, unique=True))
    levels = [lvl for lvl in sorted(populated) for _ in range(draw(st.integers(1, 4)))]
    vacuous = [lvl for lvl in range(1, 6) if lvl not in populated and draw(st.booleans())]
    u = unit_with(levels, vacuous=vacuous)
    statuses = draw(st.lists(st.sampled_from([S, P, N, NA, None]), min_size=len(levels), max_size=len(levels)))
    return u, statuses


@settings(max_examples=300, deadline=None)
@given(unit_and_statuses())
def test_score_unit_matches_oracle(case):
    u, statuses = case
    pairs = [(c.level, (s or N).value) for c, s in zip(u.controls, statuses)]
    score = score_unit(u, responses(u, statuses))
    assert score.attained_level == oracle_level(pairs, set(u.vacuous_levels))
    for lvl in range(1, score.attained_level + 1):
        assert score.gates[lvl] is not Gate.FAILED


# -- score_card -----------------------------------------------------------


def test_all_satisfied_card(catalog):
    card = card_for(catalog, all_status(catalog, "satisfied"))
    assert set(card.per_requirement.values()) == {5}
    assert card.overall_level == 5
    assert card.mean_requirement_level == 5
    assert card.coverage == 1.0


def statuses_for_levels(catalog, levels: dict[str, int]) -> dict:
    """Satisfy exactly the controls up to each leaf's wanted level."""
    out = {}
    for unit in catalog.leaves():
        want = levels[unit.id]
        for c in unit.controls:
            out[c.id] = S if c.level <= want else N
    return out


def test_requirement_takes_minimum_of_children(catalog):
    levels = {u.id: 5 for u in catalog.leaves()}
    levels["B7.1"], levels["B7.2"] = 2, 4
    card = card_for(catalog, statuses_for_levels(catalog, levels))
    assert card.per_requirement["B7"] == 2
    assert card.per_pillar["B"] == 2 and card.per_pillar["A"] == 5
    assert card.overall_level == 2


def test_one_weak_requirement_sets_overall(catalog):
    levels = {u.id: 3 for u in catalog.leaves()}
    levels["C18"] = 1
    card = card_for(catalog, statuses_for_levels(catalog, levels))
    assert card.overall_level == 1
    # (19 * 3 + 1) / 20
    assert card.mean_requirement_level == Fraction(58, 20)
    assert scorecard_to_dict(card)["mean_requirement_level"] == 2.9


def test_unit_levels_include_parents_and_children(catalog):
    card = card_for(catalog, all_status(catalog, "satisfied"))
    assert len(card.unit_levels) == 37
    assert list(card.unit_levels)[:8] == ["A1", "A2", "A3", "A4", "A5", "A6", "B7", "B7.1"]


# -- properties --------------------------------------------------------------

UPGRADE = {N: P, P: S}


def all_levels(card):
    return list(card.unit_levels.values()) + list(card.per_pillar.values()) + [card.overall_level]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_single_upgrade_never_lowers_any_level(seed):
    catalog = builtin_catalog()
    rng = random.Random(seed)
    statuses = random_statuses(catalog, rng)
    cid = rng.choice(sorted(catalog.control_index))
    current = statuses.get(cid, N)
    if current not in UPGRADE:
        return
    before = card_for(catalog, statuses)
    after = card_for(catalog, {**statuses, cid: UPGRADE[current]})
    assert all(b <= a for b, a in zip(all_levels(before), all_levels(after)))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_not_satisfied_to_not_applicable_never_lowers(seed):
    catalog = builtin_catalog()
    rng = random.Random(seed)
    statuses = random_statuses(catalog, rng)
    cid = rng.choice(sorted(catalog.control_index))
    statuses[cid] = N
    before = card_for(catalog, statuses)
    after = card_for(catalog, {**statuses, cid: NA})
    assert all(b <= a for b, a in zip(all_levels(before), all_levels(after)))


def test_rollup_is_order_independent(catalog):
    rng = random.Random(7)
    statuses = random_statuses(catalog, rng)
    card = card_for(catalog, statuses)
    shuffled_pillars = []
    for p in catalog.pillars:
        reqs = []
        for r in p.requirements:
            kids = list(r.children)
            rng.shuffle(kids)
            reqs.append(Unit(r.id, r.title, r.kind, r.controls, tuple(kids), r.vacuous_levels))
        rng.shuffle(reqs)
        shuffled_pillars.append(Pillar(p.id, p.title, tuple(reqs)))
    rng.shuffle(shuffled_pillars)
    shuffled = Catalog(catalog.catalog_id, catalog.version, tuple(shuffled_pillars))
    other = score_card(bind(make_assessment(shuffled, statuses), shuffled))
    assert other.per_requirement == card.per_requirement
    assert other.per_pillar == card.per_pillar
    assert other.overall_level == card.overall_level
    assert other.mean_requirement_level == card.mean_requirement_level


# -- gap analysis -------------------------------------------------------------


def test_gap_at_level_5_is_empty(catalog):
    bound = bind(make_assessment(catalog, all_status(catalog, "satisfied")), catalog)
    gaps = gap_analysis(bound)
    for g in gaps.units:
        assert g.target_level == 5 and g.blocking_controls == () and g.satisfied_at_target


def test_gap_lists_failing_next_level_controls(catalog):
    levels = {u.id: 5 for u in catalog.leaves()}
    levels["A2"] = 2
    statuses = statuses_for_levels(catalog, levels)
    bound = bind(make_assessment(catalog, statuses), catalog)
    gap = gap_analysis(bound).unit("A2")
    # recompute gate-3 membership directly from the catalog
    expected = [c.id for c in catalog.unit("A2").controls if c.level == 3 and statuses[c.id] is not S]
    assert len(expected) == 2
    assert [b.control_id for b in gap.blocking_controls] == expected
    assert gap.attained_level == 2 and gap.target_level == 3
    assert gap.blocking_controls[0].statement == catalog.control_index[expected[0]].statement


def test_gap_at_level_0(catalog):
    statuses = all_status(catalog, "satisfied")
    statuses["C20-L1-01"] = N
    bound = bind(make_assessment(catalog, statuses), catalog)
    gap = gap_analysis(bound).unit("C20")
    assert gap.attained_level == 0 and gap.target_level == 1
    assert [b.control_id for b in gap.blocking_controls] == ["C20-L1-01"]


def test_gap_report_is_ordered_by_unit_id(catalog):
    bound = bind(make_assessment(catalog, {}), catalog)
    ids = [g.unit_id for g in gap_analysis(bound).units]
    assert ids[:3] == ["A1", "A2", "A3"] and ids[-1] == "C20"
    assert ids.index("B8.5") < ids.index("B9") < ids.index("B10.1")


def test_gap_uses_translation_when_available():
    controls = (
        Control("A1-L1-01", "Plain", 1, translations={"el": "Απλό"}),
    )
    unit = Unit("A1", "t", "requirement", controls=controls, vacuous_levels=(2, 3, 4, 5))
    pillars = (
        Pillar("A", "IDENTIFICATION", (unit,)),
        Pillar("B", "PROTECTION", (Unit("B7", "t", "requirement", vacuous_levels=(1, 2, 3, 4, 5)),)),
        Pillar("C", "DEFENSE", (Unit("C17", "t", "requirement", vacuous_levels=(1, 2, 3, 4, 5)),)),
    )
    cat = Catalog("mini", "1", pillars)
    bound = bind(make_assessment(cat, {}), cat)
    assert gap_analysis(bound, lang="el").unit("A1").blocking_controls[0].statement == "Απλό"
    assert gap_analysis(bound).unit("A1").blocking_controls[0].statement == "Plain"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_gap_soundness(seed):
    catalog = builtin_catalog()
    statuses = random_statuses(catalog, random.Random(seed))
    bound = bind(make_assessment(catalog, statuses), catalog)
    for gap in gap_analysis(bound).units:
        assert (gap.blocking_controls == ()) == (gap.attained_level == 5)
        fixed = {**statuses, **{b.control_id: S for b in gap.blocking_controls}}
        rescored = score_unit(catalog.unit(gap.unit_id), fixed)
        assert rescored.attained_level >= gap.target_level


# -- serialization -----------------------------------------------------------


def test_scorecard_round_trip_bytes(catalog, samples_dir):
    for path in sorted(samples_dir.glob("*.json")):
        card = score_card(bind(parse_assessment(path.read_text(encoding="utf-8")), catalog))
        text = serialize_scorecard(card)
        again = parse_scorecard(text)
        assert serialize_scorecard(again) == text
        assert again.per_requirement == card.per_requirement
        assert again.mean_requirement_level == card.mean_requirement_level


def test_scorecard_json_shape(catalog):
    d = scorecard_to_dict(card_for(catalog, all_status(catalog, "satisfied")))
    for key in ("assessment_id", "overall_level", "mean_requirement_level", "coverage", "pillars", "requirements", "units"):
        assert key in d
    assert d["units"]["B8.2"]["gates"] == {str(i): "passed" for i in range(1, 6)}


def test_scorecard_parse_rejects_inconsistent_rollup(catalog):
    d = scorecard_to_dict(card_for(catalog, all_status(catalog, "satisfied")))
    d["overall_level"] = 3
    with pytest.raises(SchemaError, match="minimum pillar"):
        parse_scorecard(json.dumps(d))
    d = scorecard_to_dict(card_for(catalog, all_status(catalog, "satisfied")))
    d["units"]["A1"]["attained_level"] = 2
    with pytest.raises(SchemaError, match="gates imply level 5"):
        parse_scorecard(json.dumps(d))
