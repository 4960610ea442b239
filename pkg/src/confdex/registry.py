"""Configuration corpus: areas, tracked venues, departments, researchers.

Each entity kind lives in its own CSV file with a header row. Loading
cross-validates everything up front; a registry that loads is safe to use
without further checks, and it never changes afterwards.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path

from .ingest import normalize_name, split_author_name

AREAS_FILE = "areas.csv"
VENUES_FILE = "venues.csv"
DEPARTMENTS_FILE = "departments.csv"
RESEARCHERS_FILE = "researchers.csv"

INSTITUTION_KINDS = ("federal", "state", "private", "institute")
MANUAL_RANKS = ("none", "top", "near-the-top")

ALIAS_SEP = "|"


class RegistryError(Exception):
    """A config file violated a load rule; names the file, line and rule."""

    def __init__(self, file: str, line: int | None, rule: str, detail: str):
        self.file = file
        self.line = line
        self.rule = rule
        self.detail = detail
        where = f"{file}:{line}" if line is not None else file
        super().__init__(f"{where}: {rule}: {detail}")


@dataclass(frozen=True)
class Area:
    area_id: str
    name: str


@dataclass(frozen=True)
class VenueMetrics:
    submitted: int
    accepted: int
    h5_index: int


@dataclass(frozen=True)
class Venue:
    venue_key: str
    acronym: str
    area_id: str
    sponsor: str
    metrics: VenueMetrics
    min_pages: int
    manual_rank: str
    stated_acceptance_rate: float | None


@dataclass(frozen=True)
class Department:
    dept_id: str
    name: str
    institution_kind: str


@dataclass(frozen=True)
class Researcher:
    researcher_id: str
    canonical_name: str
    dblp_aliases: tuple[str, ...]
    dept_id: str


@dataclass(frozen=True)
class Registry:
    """Immutable, cross-validated configuration. Safe for concurrent reads."""

    areas: tuple[Area, ...]
    venues: tuple[Venue, ...]
    departments: tuple[Department, ...]
    researchers: tuple[Researcher, ...]
    digest: str

    def area(self, area_id: str) -> Area | None:
        return next((a for a in self.areas if a.area_id == area_id), None)

    def venue(self, venue_key: str) -> Venue | None:
        return next((v for v in self.venues if v.venue_key == venue_key), None)

    def department(self, dept_id: str) -> Department | None:
        return next((d for d in self.departments if d.dept_id == dept_id), None)

    def researcher(self, researcher_id: str) -> Researcher | None:
        return next((r for r in self.researchers if r.researcher_id == researcher_id), None)


def _read_rows(path: Path, expected_header: list[str]) -> list[tuple[int, dict]]:
    if not path.is_file():
        raise RegistryError(path.name, None, "missing-file", f"{path} does not exist")
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise RegistryError(path.name, 1, "missing-header", "file is empty") from None
        if header != expected_header:
            raise RegistryError(
                path.name, 1, "bad-header",
                f"expected {','.join(expected_header)!r}, got {','.join(header)!r}",
            )
        rows = []
        for values in reader:
            if not any(v.strip() for v in values):
                continue
            if len(values) != len(expected_header):
                raise RegistryError(
                    path.name, reader.line_num, "bad-row",
                    f"expected {len(expected_header)} fields, got {len(values)}",
                )
            rows.append((reader.line_num, dict(zip(expected_header, values))))
        return rows


def _require(cond: bool, file: str, line: int, rule: str, detail: str) -> None:
    if not cond:
        raise RegistryError(file, line, rule, detail)


def _int_field(row: dict, key: str, file: str, line: int) -> int:
    raw = row[key].strip()
    _require(raw != "", file, line, "missing-metric", f"{key} is empty")
    _require(raw.lstrip("-").isdigit(), file, line, "bad-number", f"{key}={raw!r}")
    value = int(raw)
    _require(value >= 0, file, line, "negative-number", f"{key}={value}")
    return value


def _load_areas(path: Path) -> tuple[Area, ...]:
    seen: set[str] = set()
    areas = []
    for line, row in _read_rows(path, ["area_id", "name"]):
        area_id = row["area_id"].strip()
        _require(bool(area_id), path.name, line, "empty-id", "area_id is empty")
        _require(area_id not in seen, path.name, line, "duplicate-id", f"area_id {area_id!r}")
        seen.add(area_id)
        areas.append(Area(area_id=area_id, name=row["name"].strip()))
    return tuple(areas)


def _load_venues(path: Path, area_ids: set[str]) -> tuple[Venue, ...]:
    header = [
        "venue_key", "acronym", "area_id", "sponsor", "submitted", "accepted",
        "h5_index", "min_pages", "manual_rank", "stated_acceptance_rate",
    ]
    seen: set[str] = set()
    venues = []
    for line, row in _read_rows(path, header):
        key = row["venue_key"].strip()
        _require(bool(key), path.name, line, "empty-id", "venue_key is empty")
        _require(key not in seen, path.name, line, "duplicate-id", f"venue_key {key!r}")
        seen.add(key)
        area_id = row["area_id"].strip()
        _require(area_id in area_ids, path.name, line, "dangling-reference",
                 f"area_id {area_id!r} not in {AREAS_FILE}")
        submitted = _int_field(row, "submitted", path.name, line)
        accepted = _int_field(row, "accepted", path.name, line)
        _require(accepted <= submitted, path.name, line, "accepted-exceeds-submitted",
                 f"accepted {accepted} > submitted {submitted}")
        h5 = _int_field(row, "h5_index", path.name, line)
        min_pages = _int_field(row, "min_pages", path.name, line)
        _require(min_pages >= 1, path.name, line, "bad-min-pages", f"min_pages={min_pages}")
        rank = row["manual_rank"].strip() or "none"
        _require(rank in MANUAL_RANKS, path.name, line, "bad-rank", f"manual_rank={rank!r}")
        stated_raw = row["stated_acceptance_rate"].strip()
        stated = None
        if stated_raw:
            try:
                stated = float(stated_raw)
            except ValueError:
                raise RegistryError(path.name, line, "bad-number",
                                    f"stated_acceptance_rate={stated_raw!r}") from None
        venues.append(
            Venue(
                venue_key=key,
                acronym=row["acronym"].strip(),
                area_id=area_id,
                sponsor=row["sponsor"].strip(),
                metrics=VenueMetrics(submitted=submitted, accepted=accepted, h5_index=h5),
                min_pages=min_pages,
                manual_rank=rank,
                stated_acceptance_rate=stated,
            )
        )
    return tuple(venues)


def _load_departments(path: Path) -> tuple[Department, ...]:
    seen: set[str] = set()
    departments = []
    for line, row in _read_rows(path, ["dept_id", "name", "institution_kind"]):
        dept_id = row["dept_id"].strip()
        _require(bool(dept_id), path.name, line, "empty-id", "dept_id is empty")
        _require(dept_id not in seen, path.name, line, "duplicate-id", f"dept_id {dept_id!r}")
        seen.add(dept_id)
        kind = row["institution_kind"].strip()
        _require(kind in INSTITUTION_KINDS, path.name, line, "bad-institution-kind", kind or "<empty>")
        departments.append(Department(dept_id=dept_id, name=row["name"].strip(), institution_kind=kind))
    return tuple(departments)


def _load_researchers(path: Path, dept_ids: set[str]) -> tuple[Researcher, ...]:
    header = ["researcher_id", "canonical_name", "dept_id", "aliases"]
    seen: set[str] = set()
    researchers = []
    for line, row in _read_rows(path, header):
        rid = row["researcher_id"].strip()
        _require(bool(rid), path.name, line, "empty-id", "researcher_id is empty")
        _require(rid not in seen, path.name, line, "duplicate-id", f"researcher_id {rid!r}")
        seen.add(rid)
        dept_id = row["dept_id"].strip()
        _require(dept_id in dept_ids, path.name, line, "dangling-reference",
                 f"dept_id {dept_id!r} not in {DEPARTMENTS_FILE}")
        aliases = tuple(dict.fromkeys(a.strip() for a in row["aliases"].split(ALIAS_SEP) if a.strip()))
        _require(bool(aliases), path.name, line, "no-aliases", f"researcher {rid!r} has no aliases")
        researchers.append(
            Researcher(rid, canonical_name=row["canonical_name"].strip(),
                       dblp_aliases=aliases, dept_id=dept_id)
        )
    return tuple(researchers)


def _digest(paths: list[Path]) -> str:
    h = hashlib.sha256()
    for path in paths:
        h.update(path.name.encode("utf-8") + b"\0")
        h.update(path.read_bytes())
        h.update(b"\0")
    return h.hexdigest()


def load_registry(config_dir: str | Path) -> Registry:
    """Load and cross-validate the whole configuration directory."""
    base = Path(config_dir)
    if not base.is_dir():
        raise RegistryError(str(config_dir), None, "missing-config-dir", f"{base} is not a directory")
    paths = [base / name for name in (AREAS_FILE, VENUES_FILE, DEPARTMENTS_FILE, RESEARCHERS_FILE)]
    areas = _load_areas(paths[0])
    venues = _load_venues(paths[1], {a.area_id for a in areas})
    departments = _load_departments(paths[2])
    researchers = _load_researchers(paths[3], {d.dept_id for d in departments})
    registry = Registry(
        areas=areas, venues=venues, departments=departments,
        researchers=researchers, digest=_digest(paths),
    )
    alias_index(registry)  # raises on cross-researcher alias collisions
    return registry


def alias_index(registry: Registry) -> dict[tuple[str, str | None], str]:
    """Map (normalized alias, homonym suffix) -> researcher_id.

    A suffixed alias only ever matches the same suffixed author; an alias
    without a suffix only matches unsuffixed authors.
    """
    index: dict[tuple[str, str | None], str] = {}
    for researcher in registry.researchers:
        for alias in researcher.dblp_aliases:
            parsed = split_author_name(alias)
            key = (parsed.normalized, parsed.suffix)
            other = index.get(key)
            if other is not None and other != researcher.researcher_id:
                raise RegistryError(
                    RESEARCHERS_FILE, None, "alias-collision",
                    f"alias {alias!r} maps to both {other!r} and {researcher.researcher_id!r}",
                )
            index[key] = researcher.researcher_id
    return index


def registry_to_dict(registry: Registry) -> dict:
    """Stable dict form of a registry (used for determinism checks)."""
    return {
        "digest": registry.digest,
        "areas": [{"area_id": a.area_id, "name": a.name} for a in registry.areas],
        "venues": [
            {
                "venue_key": v.venue_key,
                "acronym": v.acronym,
                "area_id": v.area_id,
                "sponsor": v.sponsor,
                "submitted": v.metrics.submitted,
                "accepted": v.metrics.accepted,
                "h5_index": v.metrics.h5_index,
                "min_pages": v.min_pages,
                "manual_rank": v.manual_rank,
                "stated_acceptance_rate": v.stated_acceptance_rate,
            }
            for v in registry.venues
        ],
        "departments": [
            {"dept_id": d.dept_id, "name": d.name, "institution_kind": d.institution_kind}
            for d in registry.departments
        ],
        "researchers": [
            {
                "researcher_id": r.researcher_id,
                "canonical_name": r.canonical_name,
                "dept_id": r.dept_id,
                "aliases": list(r.dblp_aliases),
            }
            for r in registry.researchers
        ],
    }


def normalized_alias_count(registry: Registry) -> int:
    """Total alias strings across all researchers (after per-researcher dedup)."""
    return sum(len(r.dblp_aliases) for r in registry.researchers)


__all__ = [
    "Area", "VenueMetrics", "Venue", "Department", "Researcher", "Registry",
    "RegistryError", "load_registry", "alias_index", "registry_to_dict",
    "normalized_alias_count", "normalize_name",
]
