"""One immutable build of every statistic the service publishes.

build_snapshot runs the whole pipeline (registry, classification,
selection, scoring) and freezes the results as plain JSON-ready rows.
The HTTP layer and the file exports both serve these rows untouched, so
whatever a client sees is byte-for-byte what the exports contain.

generated_at is the only field that differs between two builds from
identical inputs; the content tag is derived purely from the data.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Iterator

from .classify import classification_report
from .ingest import (
    IngestStats,
    PublicationRecord,
    open_dump,
    parse_records,
    read_records_jsonl,
)
from .registry import Registry, load_registry
from .scoring import area_standings, researcher_papers, standing_to_dict
from .selection import YearWindow, paper_to_dict, select_papers

AREAS_JSON = "areas.json"
CONFERENCES_CSV = "conferences.csv"
DEPARTMENTS_CSV = "departments.csv"
PAPERS_JSONL = "papers.jsonl"
EXPORT_FILES = (AREAS_JSON, CONFERENCES_CSV, DEPARTMENTS_CSV, PAPERS_JSONL)

CONFERENCE_COLUMNS = [
    "venue_key", "acronym", "area_id", "sponsor", "submitted", "accepted",
    "rate", "stated_rate", "rate_mismatch", "h5_index", "min_pages", "tier",
    "submitted_ok", "rate_ok", "h5_ok", "compliant",
]
DEPARTMENT_COLUMNS = [
    "area_id", "dept_id", "name", "institution_kind",
    "top", "near_top", "standard", "papers", "researchers", "score",
]


@dataclass(frozen=True)
class Snapshot:
    """Frozen output of one pipeline run. Never mutate the row dicts."""

    generated_at: str
    tag: str
    window: YearWindow
    registry_digest: str
    areas: tuple[dict, ...]
    conferences: dict[str, tuple[dict, ...]]
    departments: dict[str, tuple[dict, ...]]
    papers_by_area: dict[str, tuple[dict, ...]]
    all_papers: tuple[dict, ...]
    department_details: dict[str, dict]
    professors: dict[str, dict]
    dropped: dict[str, int]
    considered: int

    def area_ids(self) -> set[str]:
        return {a["area_id"] for a in self.areas}

    def meta(self) -> dict:
        return {
            "generated_at": self.generated_at,
            "snapshot_tag": self.tag,
            "registry_digest": self.registry_digest,
            "window": {"first": self.window.first, "last": self.window.last},
            "papers": len(self.all_papers),
            "considered": self.considered,
            "dropped": dict(self.dropped),
        }


def iter_records(path: str | Path, stats: IngestStats | None = None) -> Iterator[PublicationRecord]:
    """Records from an XML dump (plain or gzipped) or a JSONL file.

    The format is sniffed from the first non-blank byte, so file names
    carry no meaning here.
    """
    stream = open_dump(str(path))
    try:
        head = stream.peek(256).lstrip() if hasattr(stream, "peek") else b""
        if head.startswith(b"<"):
            yield from parse_records(stream, stats)
        else:
            yield from read_records_jsonl(io.TextIOWrapper(stream, encoding="utf-8"))
    finally:
        stream.close()


def _stated_rate_text(value: float | None) -> str | None:
    return None if value is None else f"{value:g}"


def conference_rows(registry: Registry) -> list[dict]:
    rows = []
    for item in classification_report(registry):
        rows.append({
            "venue_key": item.venue_key,
            "acronym": item.acronym,
            "area_id": item.area_id,
            "sponsor": item.sponsor,
            "submitted": item.submitted,
            "accepted": item.accepted,
            "rate": str(item.rate),
            "stated_rate": _stated_rate_text(item.stated_rate),
            "rate_mismatch": item.rate_mismatch,
            "h5_index": item.h5_index,
            "min_pages": item.min_pages,
            "tier": item.tier,
            "submitted_ok": item.flags.submitted_ok,
            "rate_ok": item.flags.rate_ok,
            "h5_ok": item.flags.h5_ok,
            "compliant": item.flags.compliant,
        })
    return rows


def build_snapshot(
    config_dir: str | Path,
    records_path: str | Path,
    window: YearWindow | None = None,
    generated_at: str | None = None,
) -> Snapshot:
    """Run the full pipeline and freeze the result.

    Deterministic: identical inputs give identical snapshots except for
    generated_at (pass one explicitly to pin it).
    """
    window = window or YearWindow()
    registry = load_registry(config_dir)
    outcome = select_papers(iter_records(records_path), registry, window)

    rows_all = conference_rows(registry)
    tiers = {row["venue_key"]: row["tier"] for row in rows_all}

    conferences: dict[str, tuple[dict, ...]] = {}
    for row in rows_all:
        conferences.setdefault(row["area_id"], ())
        conferences[row["area_id"]] += (row,)

    papers_by_area: dict[str, tuple[dict, ...]] = {}
    for paper in outcome.papers:
        papers_by_area.setdefault(paper.area_id, ())
        papers_by_area[paper.area_id] += (paper_to_dict(paper),)

    departments: dict[str, tuple[dict, ...]] = {}
    for area in registry.areas:
        rows = area_standings(outcome.papers, registry, tiers, area.area_id)
        if rows:
            departments[area.area_id] = tuple(standing_to_dict(r) for r in rows)

    areas = tuple(
        {
            "area_id": area.area_id,
            "name": area.name,
            "papers": len(papers_by_area.get(area.area_id, ())),
        }
        for area in registry.areas
    )

    department_details = {}
    for dept in registry.departments:
        per_area = []
        for area in registry.areas:
            for row in departments.get(area.area_id, ()):
                if row["dept_id"] == dept.dept_id:
                    slim = {k: v for k, v in row.items()
                            if k not in ("dept_id", "name", "institution_kind")}
                    per_area.append({"area_id": area.area_id, **slim})
        department_details[dept.dept_id] = {
            "dept_id": dept.dept_id,
            "name": dept.name,
            "institution_kind": dept.institution_kind,
            "areas": per_area,
        }

    professors = {}
    for researcher in registry.researchers:
        dept = registry.department(researcher.dept_id)
        professors[researcher.researcher_id] = {
            "researcher_id": researcher.researcher_id,
            "canonical_name": researcher.canonical_name,
            "dept_id": researcher.dept_id,
            "department": dept.name,
            "papers": [
                paper_to_dict(p)
                for p in researcher_papers(outcome.papers, researcher.researcher_id)
            ],
        }

    body = {
        "window": [window.first, window.last],
        "registry_digest": registry.digest,
        "areas": areas,
        "conferences": conferences,
        "departments": departments,
        "papers": papers_by_area,
        "department_details": department_details,
        "professors": professors,
        "dropped": dict(outcome.dropped),
        "considered": outcome.considered,
    }
    tag = hashlib.sha256(
        json.dumps(body, sort_keys=True, ensure_ascii=False, default=list).encode("utf-8")
    ).hexdigest()[:12]

    return Snapshot(
        generated_at=generated_at or _utc_now(),
        tag=tag,
        window=window,
        registry_digest=registry.digest,
        areas=areas,
        conferences=conferences,
        departments=departments,
        papers_by_area=papers_by_area,
        all_papers=tuple(paper_to_dict(p) for p in outcome.papers),
        department_details=department_details,
        professors=professors,
        dropped=dict(outcome.dropped),
        considered=outcome.considered,
    )


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _write_csv(out: IO[str], columns: list[str], rows) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_value(row[c]) for c in columns])


def export_snapshot(snapshot: Snapshot, out_dir: str | Path) -> list[Path]:
    """Write the four export files. Byte-stable: no timestamps inside."""
    base = Path(out_dir)
    base.mkdir(parents=True, exist_ok=True)

    areas_path = base / AREAS_JSON
    with open(areas_path, "w", encoding="utf-8", newline="") as f:
        json.dump({"areas": list(snapshot.areas)}, f, ensure_ascii=False, indent=2)
        f.write("\n")

    conferences_path = base / CONFERENCES_CSV
    with open(conferences_path, "w", encoding="utf-8", newline="") as f:
        _write_csv(
            f, CONFERENCE_COLUMNS,
            (row for a in snapshot.areas for row in snapshot.conferences.get(a["area_id"], ())),
        )

    departments_path = base / DEPARTMENTS_CSV
    with open(departments_path, "w", encoding="utf-8", newline="") as f:
        _write_csv(
            f, DEPARTMENT_COLUMNS,
            (
                {"area_id": a["area_id"], **row}
                for a in snapshot.areas
                for row in snapshot.departments.get(a["area_id"], ())
            ),
        )

    papers_path = base / PAPERS_JSONL
    with open(papers_path, "w", encoding="utf-8", newline="") as f:
        for paper in snapshot.all_papers:
            f.write(json.dumps(paper, ensure_ascii=False) + "\n")

    return [areas_path, conferences_path, departments_path, papers_path]


__all__ = [
    "AREAS_JSON", "CONFERENCES_CSV", "DEPARTMENTS_CSV", "PAPERS_JSONL",
    "EXPORT_FILES", "CONFERENCE_COLUMNS", "DEPARTMENT_COLUMNS",
    "Snapshot", "iter_records", "build_snapshot", "export_snapshot",
    "conference_rows",
]
