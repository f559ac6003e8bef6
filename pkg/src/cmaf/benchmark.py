"""Pseudonymized records, k-suppressed group statistics and rank correlations.

Records carry only the grouping attributes and requirement levels; the org
id is replaced by a salted SHA-256 pseudonym. Group statistics are withheld
entirely when a group has fewer than ``k_min`` organizations.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from fractions import Fraction
from typing import Iterable, Sequence

from . import _jsonio
from .assessment import parse_date
from .catalog import MAX_LEVEL, unit_sort_key
from .errors import BenchmarkError, SchemaError
from .scoring import ScoreCard

GROUP_KEYS = ("sector", "size_class", "entity_kind", "tag", "all")
DEFAULT_K_MIN = 3
DEFAULT_GAP_THRESHOLD = 3  # "Advanced - Defined"


@dataclass(frozen=True)
class AnonymousRecord:
    pseudonym: str
    sector: str
    size_class: str
    entity_kind: str
    date: date
    catalog_id: str
    catalog_version: str
    per_requirement: dict[str, int]
    overall_level: int
    tags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "pseudonym": self.pseudonym,
            "sector": self.sector,
            "size_class": self.size_class,
            "entity_kind": self.entity_kind,
            "date": self.date.isoformat(),
            "catalog_id": self.catalog_id,
            "catalog_version": self.catalog_version,
            "overall_level": self.overall_level,
            "requirements": dict(self.per_requirement),
        }
        if self.tags:
            out["tags"] = list(self.tags)
        return out


def pseudonym(org_id: str, salt: bytes) -> str:
    return hashlib.sha256(salt + org_id.encode("utf-8")).hexdigest()


def anonymize(card: ScoreCard, salt: bytes) -> AnonymousRecord:
    if not salt:
        raise BenchmarkError("an empty salt is refused; pseudonyms would be reversible by dictionary")
    return AnonymousRecord(
        pseudonym=pseudonym(card.org.org_id, salt),
        sector=card.org.sector,
        size_class=card.org.size_class,
        entity_kind=card.org.entity_kind,
        date=card.date,
        catalog_id=card.catalog_id,
        catalog_version=card.catalog_version,
        per_requirement=dict(card.per_requirement),
        overall_level=card.overall_level,
        tags=card.org.tags,
    )


def record_from_dict(doc) -> AnonymousRecord:
    doc = _jsonio.expect_object(doc, "$")
    _jsonio.reject_unknown(doc, {
        "pseudonym", "sector", "size_class", "entity_kind", "date", "catalog_id",
        "catalog_version", "overall_level", "requirements", "tags",
    }, "$")
    levels = _jsonio.field(doc, "requirements", dict, "$")
    for rid, lvl in levels.items():
        if not isinstance(lvl, int) or isinstance(lvl, bool) or not 0 <= lvl <= MAX_LEVEL:
            raise SchemaError(f"$.requirements.{rid}", "expected level 0..5")
    return AnonymousRecord(
        pseudonym=_jsonio.field(doc, "pseudonym", str, "$"),
        sector=_jsonio.field(doc, "sector", str, "$"),
        size_class=_jsonio.field(doc, "size_class", str, "$"),
        entity_kind=_jsonio.field(doc, "entity_kind", str, "$"),
        date=parse_date(_jsonio.field(doc, "date", str, "$"), "$.date"),
        catalog_id=_jsonio.field(doc, "catalog_id", str, "$"),
        catalog_version=_jsonio.field(doc, "catalog_version", str, "$"),
        per_requirement=dict(levels),
        overall_level=_jsonio.field(doc, "overall_level", int, "$"),
        tags=tuple(_jsonio.field(doc, "tags", list, "$", required=False, default=[])),
    )


def serialize_record(record: AnonymousRecord) -> str:
    return _jsonio.dumps(record.to_dict())


# --------------------------------------------------------------------------
# aggregation


def quantile(sorted_values: Sequence[float], q: float) -> float:
    """Linear interpolation between closest ranks (numpy's default method)."""
    if not sorted_values:
        raise ValueError("quantile of empty data")
    pos = q * (len(sorted_values) - 1)
    lo = math.floor(pos)
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = pos - lo
    return sorted_values[lo] + frac * (sorted_values[hi] - sorted_values[lo])


@dataclass(frozen=True)
class LevelStats:
    min: int
    p25: float
    median: float
    p75: float
    max: int
    mean: float

    @classmethod
    def of(cls, levels: Iterable[int]) -> LevelStats:
        values = sorted(levels)
        return cls(
            min=values[0],
            p25=quantile(values, 0.25),
            median=quantile(values, 0.5),
            p75=quantile(values, 0.75),
            max=values[-1],
            mean=float(Fraction(sum(values), len(values))),
        )

    def to_dict(self) -> dict:
        return {
            "min": self.min,
            "p25": self.p25,
            "median": self.median,
            "p75": self.p75,
            "max": self.max,
            "mean": round(self.mean, 4),
        }


@dataclass(frozen=True)
class BenchmarkSummary:
    group_by: str
    group: str
    n: int
    suppressed: bool
    per_requirement: dict[str, LevelStats]
    overall: LevelStats | None
    common_gaps: tuple[tuple[str, float], ...]

    def to_dict(self) -> dict:
        out: dict = {"group_by": self.group_by, "group": self.group, "n": self.n, "suppressed": self.suppressed}
        if not self.suppressed:
            out["overall"] = self.overall.to_dict()
            out["requirements"] = {rid: s.to_dict() for rid, s in self.per_requirement.items()}
            out["common_gaps"] = [{"requirement": rid, "share": round(share, 4)} for rid, share in self.common_gaps]
        return out


def _group_values(record: AnonymousRecord, group_by: str) -> list[str]:
    if group_by == "all":
        return ["all"]
    if group_by == "tag":
        return list(dict.fromkeys(record.tags))
    return [getattr(record, group_by)]


def _check_catalog(records: Sequence[AnonymousRecord]) -> None:
    versions = {(r.catalog_id, r.catalog_version) for r in records}
    if len(versions) > 1:
        listed = ", ".join(f"{c}@{v}" for c, v in sorted(versions))
        raise BenchmarkError(f"records mix catalog versions: {listed}")


def _requirement_order(records: Iterable[AnonymousRecord]) -> list[str]:
    return sorted({rid for r in records for rid in r.per_requirement}, key=unit_sort_key)


def aggregate(
    records: Sequence[AnonymousRecord],
    group_by: str = "all",
    k_min: int = DEFAULT_K_MIN,
    gap_threshold: int = DEFAULT_GAP_THRESHOLD,
) -> list[BenchmarkSummary]:
    """One summary per group value, sorted by group value.

    ``common_gaps`` ranks requirements by the share of organizations below
    ``gap_threshold``, descending, ties in requirement order; requirements
    nobody falls short on are left out.
    """
    if group_by not in GROUP_KEYS:
        raise BenchmarkError(f"unknown group key {group_by!r}; expected one of {', '.join(GROUP_KEYS)}")
    if k_min < 1:
        raise BenchmarkError("k_min must be at least 1")
    _check_catalog(records)

    groups: dict[str, list[AnonymousRecord]] = defaultdict(list)
    for record in records:
        for value in _group_values(record, group_by):
            groups[value].append(record)

    summaries = []
    for value in sorted(groups):
        members = groups[value]
        n = len(members)
        if n < k_min:
            summaries.append(BenchmarkSummary(group_by, value, n, True, {}, None, ()))
            continue
        rids = _requirement_order(members)
        stats = {}
        shares = []
        for rid in rids:
            levels = [r.per_requirement[rid] for r in members if rid in r.per_requirement]
            stats[rid] = LevelStats.of(levels)
            below = sum(1 for lvl in levels if lvl < gap_threshold)
            if below:
                shares.append((rid, below / len(levels)))
        order = {rid: i for i, rid in enumerate(rids)}
        shares.sort(key=lambda item: (-item[1], order[item[0]]))
        summaries.append(BenchmarkSummary(
            group_by, value, n, False, stats, LevelStats.of(r.overall_level for r in members), tuple(shares),
        ))
    return summaries


def summaries_to_dict(summaries: Sequence[BenchmarkSummary], k_min: int) -> dict:
    group_by = summaries[0].group_by if summaries else None
    return {"group_by": group_by, "k_min": k_min, "groups": [s.to_dict() for s in summaries]}


def summaries_to_csv(summaries: Sequence[BenchmarkSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["group_by", "group", "n", "suppressed", "requirement", "min", "p25", "median", "p75", "max", "mean"])
    for s in summaries:
        if s.suppressed:
            writer.writerow([s.group_by, s.group, s.n, "true", "", "", "", "", "", "", ""])
            continue
        for rid, st in s.per_requirement.items():
            d = st.to_dict()
            writer.writerow([s.group_by, s.group, s.n, "false", rid, d["min"], d["p25"], d["median"], d["p75"], d["max"], d["mean"]])
    return buf.getvalue()


# --------------------------------------------------------------------------
# correlation


def average_ranks(values: Sequence[float]) -> list[Fraction]:
    """1-based ranks; tied values share the mean of the ranks they span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: list[Fraction] = [Fraction(0)] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = Fraction(i + j + 2, 2)
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Spearman's rho as the Pearson correlation of average ranks.

    Returns None when either side is constant. Rank moments are kept exact,
    so perfectly (anti-)monotone inputs give exactly +/-1.0.
    """
    if len(x) != len(y):
        raise ValueError("spearman needs equal-length inputs")
    n = len(x)
    if n < 2:
        return None
    rx, ry = average_ranks(x), average_ranks(y)
    mx, my = sum(rx) / n, sum(ry) / n
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    if sxx == 0 or syy == 0:
        return None
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    rho_sq = sxy * sxy / (sxx * syy)
    rho = math.sqrt(rho_sq)
    return min(rho, 1.0) if sxy >= 0 else -min(rho, 1.0)


@dataclass(frozen=True)
class CorrelationMatrix:
    requirements: tuple[str, ...]
    cells: dict[tuple[str, str], float | None]
    n: dict[tuple[str, str], int]

    def get(self, a: str, b: str) -> float | None:
        return self.cells[(a, b)]

    def to_dict(self) -> dict:
        return {
            "requirements": list(self.requirements),
            "rho": [[self.cells[(a, b)] for b in self.requirements] for a in self.requirements],
            "n": [[self.n[(a, b)] for b in self.requirements] for a in self.requirements],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["requirement", *self.requirements])
        for a in self.requirements:
            row = [a]
            for b in self.requirements:
                v = self.cells[(a, b)]
                row.append("" if v is None else f"{v:.6f}")
            writer.writerow(row)
        return buf.getvalue()


def correlations(records: Sequence[AnonymousRecord], min_records: int = 3) -> CorrelationMatrix:
    if len(records) < min_records:
        raise BenchmarkError(f"correlations need at least {min_records} records, got {len(records)}")
    _check_catalog(records)
    rids = _requirement_order(records)
    cells: dict[tuple[str, str], float | None] = {}
    counts: dict[tuple[str, str], int] = {}
    for i, a in enumerate(rids):
        for b in rids[i:]:
            pairs = [(r.per_requirement[a], r.per_requirement[b]) for r in records
                     if a in r.per_requirement and b in r.per_requirement]
            rho = spearman([p[0] for p in pairs], [p[1] for p in pairs]) if len(pairs) >= min_records else None
            cells[(a, b)] = cells[(b, a)] = rho
            counts[(a, b)] = counts[(b, a)] = len(pairs)
    return CorrelationMatrix(tuple(rids), cells, counts)
