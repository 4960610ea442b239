"""Venue quality checks: acceptance rates, threshold compliance, tiers.

Rates are computed with integer arithmetic and rounded half-up to one
decimal place, so results are reproducible bit-for-bit across platforms.
Threshold checks always use the exact (unrounded) rate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from .registry import Registry, Venue, VenueMetrics

log = logging.getLogger(__name__)

# A venue in good standing is expected to clear all three bars.
SUBMITTED_FLOOR = 100      # submissions per year, exclusive
RATE_CEILING = 30          # acceptance rate percent, exclusive
H5_FLOOR = 20              # Google Scholar h5 index, exclusive

# The "top" tier additionally requires a much larger community signal.
TOP_SUBMITTED_FLOOR = 180
TOP_H5_FLOOR = 40

TIER_TOP = "top"
TIER_NEAR_TOP = "near-the-top"
TIER_STANDARD = "standard"

# Computed rate vs. the rate published by the venue itself; anything
# further apart than this is flagged for review.
RATE_MATCH_TOLERANCE = Decimal("0.05")


class ClassificationError(Exception):
    """Raised when venue data contradicts its configured rank."""


def exact_rate(submitted: int, accepted: int) -> Fraction:
    """Acceptance rate in percent as an exact fraction."""
    if submitted <= 0:
        raise ClassificationError(f"acceptance rate undefined for submitted={submitted}")
    return Fraction(100 * accepted, submitted)


def acceptance_rate(submitted: int, accepted: int) -> Decimal:
    """Acceptance rate in percent, rounded half-up to one decimal place.

    Done in integers: 10*rate = 1000*accepted/submitted, rounded to the
    nearest unit with ties going up.
    """
    if submitted <= 0:
        raise ClassificationError(f"acceptance rate undefined for submitted={submitted}")
    tenths, rem = divmod(1000 * accepted, submitted)
    if 2 * rem >= submitted:
        tenths += 1
    return Decimal(tenths).scaleb(-1)


@dataclass(frozen=True)
class ComplianceFlags:
    """One boolean per threshold; True means the venue clears the bar."""

    submitted_ok: bool
    rate_ok: bool
    h5_ok: bool

    @property
    def compliant(self) -> bool:
        return self.submitted_ok and self.rate_ok and self.h5_ok

    def failing(self) -> tuple[str, ...]:
        names = []
        if not self.submitted_ok:
            names.append("submitted")
        if not self.rate_ok:
            names.append("rate")
        if not self.h5_ok:
            names.append("h5")
        return tuple(names)


def check_compliance(metrics: VenueMetrics) -> ComplianceFlags:
    """Apply the three threshold checks, all strict, on exact values."""
    return ComplianceFlags(
        submitted_ok=metrics.submitted > SUBMITTED_FLOOR,
        rate_ok=exact_rate(metrics.submitted, metrics.accepted) < RATE_CEILING,
        h5_ok=metrics.h5_index > H5_FLOOR,
    )


def classify_tier(venue: Venue) -> str:
    """Resolve a venue's tier from its metrics and configured rank.

    The top tier needs both the configured rank and the volume gate
    (submitted > 180 and h5 > 40). A configured top rank without the gate
    is a config error; the gate without any configured rank only logs a
    warning, since ranking is deliberately a human decision.
    """
    m = venue.metrics
    meets_gate = m.submitted > TOP_SUBMITTED_FLOOR and m.h5_index > TOP_H5_FLOOR
    if venue.manual_rank == TIER_TOP:
        if not meets_gate:
            raise ClassificationError(
                f"venue {venue.venue_key!r} is ranked top but has "
                f"submitted={m.submitted}, h5={m.h5_index}"
            )
        return TIER_TOP
    if venue.manual_rank == TIER_NEAR_TOP:
        return TIER_NEAR_TOP
    if meets_gate:
        log.warning(
            "venue %s meets the top-tier gate (submitted=%d, h5=%d) "
            "but has no configured rank", venue.venue_key, m.submitted, m.h5_index,
        )
    return TIER_STANDARD


@dataclass(frozen=True)
class ClassifiedVenue:
    """A venue plus everything the checks derived about it."""

    venue_key: str
    acronym: str
    area_id: str
    sponsor: str
    submitted: int
    accepted: int
    h5_index: int
    min_pages: int
    rate: Decimal
    stated_rate: float | None
    rate_mismatch: bool
    flags: ComplianceFlags
    tier: str


def classify_venue(venue: Venue) -> ClassifiedVenue:
    m = venue.metrics
    rate = acceptance_rate(m.submitted, m.accepted)
    stated = venue.stated_acceptance_rate
    mismatch = (
        stated is not None
        and abs(rate - Decimal(str(stated))) > RATE_MATCH_TOLERANCE
    )
    return ClassifiedVenue(
        venue_key=venue.venue_key,
        acronym=venue.acronym,
        area_id=venue.area_id,
        sponsor=venue.sponsor,
        submitted=m.submitted,
        accepted=m.accepted,
        h5_index=m.h5_index,
        min_pages=venue.min_pages,
        rate=rate,
        stated_rate=stated,
        rate_mismatch=mismatch,
        flags=check_compliance(m),
        tier=classify_tier(venue),
    )


def classification_report(registry: Registry) -> list[ClassifiedVenue]:
    """Classify every venue, preserving the configuration order."""
    return [classify_venue(v) for v in registry.venues]


def exception_cells(rows: list[ClassifiedVenue]) -> set[tuple[str, str]]:
    """(acronym, check) pairs for every failed threshold check."""
    cells = set()
    for row in rows:
        for name in row.flags.failing():
            cells.add((row.acronym, name))
    return cells


__all__ = [
    "SUBMITTED_FLOOR", "RATE_CEILING", "H5_FLOOR",
    "TOP_SUBMITTED_FLOOR", "TOP_H5_FLOOR",
    "TIER_TOP", "TIER_NEAR_TOP", "TIER_STANDARD",
    "RATE_MATCH_TOLERANCE",
    "ClassificationError", "ComplianceFlags", "ClassifiedVenue",
    "exact_rate", "acceptance_rate", "check_compliance", "classify_tier",
    "classify_venue", "classification_report", "exception_cells",
]
