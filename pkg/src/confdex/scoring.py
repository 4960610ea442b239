"""Department production counts and scores.

A department gets credit for a paper when at least one of its registered
researchers is among the authors. The same paper counts once per
department, however many of its researchers co-authored it, and counts for
every department involved.

Scores weight papers by venue tier: 1.0 for top, 0.66 for near-the-top,
0.33 for the rest. All arithmetic is integer, in hundredths, so scores
are exact and comparisons never hinge on float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Mapping

from .classify import TIER_NEAR_TOP, TIER_STANDARD, TIER_TOP
from .registry import Registry
from .selection import IndexedPaper

# Weights in hundredths; the printed weights are these divided by 100.
WEIGHT_TOP_CENTI = 100
WEIGHT_NEAR_TOP_CENTI = 66
WEIGHT_STANDARD_CENTI = 33

_TIER_WEIGHTS = {
    TIER_TOP: WEIGHT_TOP_CENTI,
    TIER_NEAR_TOP: WEIGHT_NEAR_TOP_CENTI,
    TIER_STANDARD: WEIGHT_STANDARD_CENTI,
}


@dataclass(frozen=True)
class TierCounts:
    """Papers per venue tier for one department (A, B, C in the score)."""

    top: int = 0
    near_top: int = 0
    standard: int = 0

    @property
    def total(self) -> int:
        return self.top + self.near_top + self.standard

    @property
    def score_centi(self) -> int:
        return (
            WEIGHT_TOP_CENTI * self.top
            + WEIGHT_NEAR_TOP_CENTI * self.near_top
            + WEIGHT_STANDARD_CENTI * self.standard
        )

    @property
    def score(self) -> Decimal:
        """Exact score with two decimal places, e.g. Decimal('2.33')."""
        return Decimal(self.score_centi).scaleb(-2)


def score_centi(top: int, near_top: int, standard: int) -> int:
    return TierCounts(top, near_top, standard).score_centi


@dataclass(frozen=True)
class DepartmentStanding:
    """One row of an area ranking table."""

    dept_id: str
    name: str
    institution_kind: str
    counts: TierCounts
    researcher_count: int

    @property
    def score(self) -> Decimal:
        return self.counts.score


def paper_departments(paper: IndexedPaper, registry: Registry) -> tuple[str, ...]:
    """Departments credited for a paper, in author match order, once each."""
    depts: dict[str, None] = {}
    for rid in paper.researcher_ids:
        researcher = registry.researcher(rid)
        if researcher is not None:
            depts.setdefault(researcher.dept_id)
    return tuple(depts)


def area_standings(
    papers: Iterable[IndexedPaper],
    registry: Registry,
    tiers: Mapping[str, str],
    area_id: str,
) -> list[DepartmentStanding]:
    """Rank departments by their production in one area.

    Only departments with at least one counted paper appear. Rows are
    sorted by score descending, ties broken by department id, so equal
    scores always come out in the same order.
    """
    dept_of = {r.researcher_id: r.dept_id for r in registry.researchers}
    counts: dict[str, dict[str, int]] = {}
    researchers_seen: dict[str, set[str]] = {}
    for paper in papers:
        if paper.area_id != area_id:
            continue
        tier = tiers[paper.venue_key]
        for rid in paper.researcher_ids:
            dept_id = dept_of[rid]
            researchers_seen.setdefault(dept_id, set()).add(rid)
        for dept_id in dict.fromkeys(dept_of[r] for r in paper.researcher_ids):
            slot = counts.setdefault(dept_id, {TIER_TOP: 0, TIER_NEAR_TOP: 0, TIER_STANDARD: 0})
            slot[tier] += 1
    rows = []
    for dept_id, slot in counts.items():
        dept = registry.department(dept_id)
        rows.append(
            DepartmentStanding(
                dept_id=dept_id,
                name=dept.name,
                institution_kind=dept.institution_kind,
                counts=TierCounts(
                    top=slot[TIER_TOP],
                    near_top=slot[TIER_NEAR_TOP],
                    standard=slot[TIER_STANDARD],
                ),
                researcher_count=len(researchers_seen[dept_id]),
            )
        )
    rows.sort(key=lambda r: (-r.counts.score_centi, r.dept_id))
    return rows


def researcher_papers(
    papers: Iterable[IndexedPaper], researcher_id: str
) -> list[IndexedPaper]:
    """A researcher's papers, keeping the newest-first selection order."""
    return [p for p in papers if researcher_id in p.researcher_ids]


def standing_to_dict(row: DepartmentStanding) -> dict:
    return {
        "dept_id": row.dept_id,
        "name": row.name,
        "institution_kind": row.institution_kind,
        "top": row.counts.top,
        "near_top": row.counts.near_top,
        "standard": row.counts.standard,
        "papers": row.counts.total,
        "researchers": row.researcher_count,
        "score": str(row.score),
    }


__all__ = [
    "WEIGHT_TOP_CENTI", "WEIGHT_NEAR_TOP_CENTI", "WEIGHT_STANDARD_CENTI",
    "TierCounts", "DepartmentStanding",
    "score_centi", "paper_departments", "area_standings",
    "researcher_papers", "standing_to_dict",
]
