"""Full-paper selection: decide which dump records count for the index.

A record is kept when all four checks pass, in this order:

1. its venue key belongs to a tracked venue;
2. its year falls inside the selection window;
3. it is long enough for the venue's full-paper page floor;
4. at least one author matches a registered researcher.

Dropped records are tallied under the first check that failed, which makes
the drop report stable and easy to reason about.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .ingest import PublicationRecord, doi_from_ee
from .registry import Registry, Venue, alias_index

DEFAULT_FIRST_YEAR = 2013
DEFAULT_LAST_YEAR = 2018

DROP_UNKNOWN_VENUE = "unknown-venue"
DROP_OUTSIDE_WINDOW = "outside-window"
DROP_NOT_FULL_PAPER = "not-full-paper"
DROP_NO_REGISTERED_AUTHOR = "no-registered-author"
DROP_REASONS = (
    DROP_UNKNOWN_VENUE,
    DROP_OUTSIDE_WINDOW,
    DROP_NOT_FULL_PAPER,
    DROP_NO_REGISTERED_AUTHOR,
)


@dataclass(frozen=True)
class YearWindow:
    """Inclusive range of publication years."""

    first: int = DEFAULT_FIRST_YEAR
    last: int = DEFAULT_LAST_YEAR

    def __post_init__(self) -> None:
        if self.first > self.last:
            raise ValueError(f"empty year window {self.first}..{self.last}")

    def contains(self, year: int | None) -> bool:
        return year is not None and self.first <= year <= self.last


@dataclass(frozen=True)
class IndexedPaper:
    """A kept record, enriched with venue and researcher information."""

    key: str
    title: str
    venue_key: str
    acronym: str
    area_id: str
    year: int
    page_count: int
    pages_raw: str
    doi: str | None
    authors: tuple[str, ...]
    researcher_ids: tuple[str, ...]


@dataclass
class SelectionOutcome:
    papers: list[IndexedPaper]
    dropped: Counter
    considered: int

    @property
    def kept(self) -> int:
        return len(self.papers)


def match_authors(
    record: PublicationRecord, aliases: dict[tuple[str, str | None], str]
) -> tuple[str, ...]:
    """Registered researcher ids for a record's authors, in author order.

    Matching is by normalized name plus homonym suffix, so "João Silva 0002"
    never matches a researcher registered as plain "João Silva". A researcher
    listed twice (two of their aliases on one record) is returned once.
    """
    ids: dict[str, None] = {}
    for author in record.authors:
        rid = aliases.get((author.normalized, author.suffix))
        if rid is not None:
            ids.setdefault(rid)
    return tuple(ids)


def _to_paper(record: PublicationRecord, venue: Venue, rids: tuple[str, ...]) -> IndexedPaper:
    return IndexedPaper(
        key=record.key,
        title=record.title,
        venue_key=venue.venue_key,
        acronym=venue.acronym,
        area_id=venue.area_id,
        year=record.year,
        page_count=record.pages.count,
        pages_raw=record.pages.raw,
        doi=doi_from_ee(record.ee_links),
        authors=tuple(a.display for a in record.authors),
        researcher_ids=rids,
    )


def select_papers(
    records: Iterable[PublicationRecord],
    registry: Registry,
    window: YearWindow | None = None,
) -> SelectionOutcome:
    """Run every record through the four checks and collect the keepers.

    Kept papers are sorted newest first, then by venue key and record key,
    so output order does not depend on dump order.
    """
    window = window or YearWindow()
    venues = {v.venue_key: v for v in registry.venues}
    aliases = alias_index(registry)
    papers: list[IndexedPaper] = []
    dropped: Counter = Counter()
    considered = 0
    for record in records:
        considered += 1
        venue = venues.get(record.venue_key)
        if venue is None:
            dropped[DROP_UNKNOWN_VENUE] += 1
            continue
        if not window.contains(record.year):
            dropped[DROP_OUTSIDE_WINDOW] += 1
            continue
        if record.pages.count is None or record.pages.count < venue.min_pages:
            dropped[DROP_NOT_FULL_PAPER] += 1
            continue
        rids = match_authors(record, aliases)
        if not rids:
            dropped[DROP_NO_REGISTERED_AUTHOR] += 1
            continue
        papers.append(_to_paper(record, venue, rids))
    papers.sort(key=lambda p: (-p.year, p.venue_key, p.key))
    return SelectionOutcome(papers=papers, dropped=dropped, considered=considered)


def paper_from_dict(data: dict) -> IndexedPaper:
    return IndexedPaper(
        key=data["key"],
        title=data["title"],
        venue_key=data["venue_key"],
        acronym=data["acronym"],
        area_id=data["area_id"],
        year=data["year"],
        page_count=data["page_count"],
        pages_raw=data["pages_raw"],
        doi=data["doi"],
        authors=tuple(data["authors"]),
        researcher_ids=tuple(data["researcher_ids"]),
    )


def paper_to_dict(paper: IndexedPaper) -> dict:
    return {
        "key": paper.key,
        "title": paper.title,
        "venue_key": paper.venue_key,
        "acronym": paper.acronym,
        "area_id": paper.area_id,
        "year": paper.year,
        "page_count": paper.page_count,
        "pages_raw": paper.pages_raw,
        "doi": paper.doi,
        "authors": list(paper.authors),
        "researcher_ids": list(paper.researcher_ids),
    }


__all__ = [
    "DEFAULT_FIRST_YEAR", "DEFAULT_LAST_YEAR", "DROP_REASONS",
    "DROP_UNKNOWN_VENUE", "DROP_OUTSIDE_WINDOW", "DROP_NOT_FULL_PAPER",
    "DROP_NO_REGISTERED_AUTHOR",
    "YearWindow", "IndexedPaper", "SelectionOutcome",
    "match_authors", "select_papers", "paper_to_dict", "paper_from_dict",
]
