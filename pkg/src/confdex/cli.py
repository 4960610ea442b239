"""Command line front end.

Subcommands mirror the pipeline stages: ingest a dump, validate the
configuration, classify venues, select papers, score departments, serve
the HTTP API, and export the snapshot files. Each stage reads what the
previous one wrote, so they compose through files or pipes.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__
from .classify import ClassificationError
from .ingest import IngestStats, IngestStreamError, open_dump, parse_records, write_records_jsonl
from .registry import RegistryError, load_registry
from .scoring import area_standings, standing_to_dict
from .selection import (
    DEFAULT_FIRST_YEAR,
    DEFAULT_LAST_YEAR,
    YearWindow,
    paper_from_dict,
    paper_to_dict,
    select_papers,
)
from .snapshot import (
    CONFERENCE_COLUMNS,
    DEPARTMENT_COLUMNS,
    build_snapshot,
    conference_rows,
    export_snapshot,
    iter_records,
)


def _open_out(path: str):
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="")


def _window(args) -> YearWindow:
    return YearWindow(args.first, args.last)


def _add_window_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--from", dest="first", type=int, default=DEFAULT_FIRST_YEAR,
                        metavar="YEAR", help="first publication year kept (inclusive)")
    parser.add_argument("--to", dest="last", type=int, default=DEFAULT_LAST_YEAR,
                        metavar="YEAR", help="last publication year kept (inclusive)")


def cmd_ingest(args) -> int:
    stats = IngestStats()
    out = _open_out(args.output)
    try:
        with open_dump(args.input) as stream:
            write_records_jsonl(parse_records(stream, stats), out)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.stats:
        for line in stats.summary_lines():
            print(line, file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    registry = load_registry(args.config_dir)
    print(
        f"ok: {len(registry.areas)} areas, {len(registry.venues)} venues, "
        f"{len(registry.departments)} departments, {len(registry.researchers)} researchers"
    )
    return 0


def cmd_classify(args) -> int:
    rows = conference_rows(load_registry(args.config_dir))
    if args.format == "json":
        json.dump(rows, sys.stdout, ensure_ascii=False, indent=2)
        print()
    elif args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(CONFERENCE_COLUMNS)
        for row in rows:
            writer.writerow(["" if row[c] is None else
                             (str(row[c]).lower() if isinstance(row[c], bool) else row[c])
                             for c in CONFERENCE_COLUMNS])
    else:
        header = f"{'Conference':<12}{'Sponsor':<22}{'Submitted':>10}{'Accepted':>10}" \
                 f"{'Rate':>8}{'h5':>5}  {'Tier':<14}{'Pages':>6}  Checks failed"
        print(header)
        print("-" * len(header))
        for row in rows:
            failing = [c for c in ("submitted", "rate", "h5") if not row[f"{c}_ok"]]
            rate = row["rate"] + ("!" if row["rate_mismatch"] else "")
            print(
                f"{row['acronym']:<12}{row['sponsor']:<22}{row['submitted']:>10}"
                f"{row['accepted']:>10}{rate:>8}{row['h5_index']:>5}  "
                f"{row['tier']:<14}{row['min_pages']:>6}  {', '.join(failing) or '-'}"
            )
    return 0


def cmd_select(args) -> int:
    registry = load_registry(args.config_dir)
    outcome = select_papers(iter_records(args.records), registry, _window(args))
    out = _open_out(args.output)
    try:
        for paper in outcome.papers:
            out.write(json.dumps(paper_to_dict(paper), ensure_ascii=False) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if args.drop_report:
        report = {
            "considered": outcome.considered,
            "kept": outcome.kept,
            "dropped": dict(outcome.dropped),
        }
        with open(args.drop_report, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2)
            f.write("\n")
    return 0


def cmd_score(args) -> int:
    registry = load_registry(args.config_dir)
    tiers = {row["venue_key"]: row["tier"] for row in conference_rows(registry)}
    with open(args.papers, encoding="utf-8") as f:
        papers = [paper_from_dict(json.loads(line)) for line in f if line.strip()]
    area_ids = [a.area_id for a in registry.areas] if args.area == "all" else [args.area]
    unknown = [a for a in area_ids if registry.area(a) is None]
    if unknown:
        print(f"error: unknown area {unknown[0]!r}", file=sys.stderr)
        return 1
    tables = {
        area_id: [standing_to_dict(r)
                  for r in area_standings(papers, registry, tiers, area_id)]
        for area_id in area_ids
    }
    if args.format == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(DEPARTMENT_COLUMNS)
        for area_id, rows in tables.items():
            for row in rows:
                writer.writerow([{"area_id": area_id, **row}[c] for c in DEPARTMENT_COLUMNS])
    else:
        json.dump(tables, sys.stdout, ensure_ascii=False, indent=2)
        print()
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .webapi import SnapshotRef, create_app

    snapshot = build_snapshot(args.config_dir, args.records, _window(args))
    host, _, port = args.bind.rpartition(":")
    app = create_app(SnapshotRef(snapshot), ui_dir=args.ui_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
    return 0


def cmd_export(args) -> int:
    snapshot = build_snapshot(args.config_dir, args.records, _window(args))
    for path in export_snapshot(snapshot, args.out_dir):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confdex",
        description="Index conference publications: parse dumps, classify venues, "
                    "score departments, serve statistics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse an XML dump into record JSONL")
    p.add_argument("--input", default="-", help="dump path, .gz or '-' for stdin")
    p.add_argument("--output", default="-", help="record JSONL path or '-' for stdout")
    p.add_argument("--stats", action="store_true", help="print skip/error counts to stderr")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="check the configuration directory")
    p.add_argument("--config-dir", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="venue thresholds, rates and tiers")
    p.add_argument("--config-dir", required=True)
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("select", help="pick indexable full papers from records")
    p.add_argument("--records", required=True, help="record JSONL or XML dump")
    p.add_argument("--config-dir", required=True)
    _add_window_flags(p)
    p.add_argument("--output", default="-", help="paper JSONL path or '-' for stdout")
    p.add_argument("--drop-report", help="write drop tallies to this JSON file")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("score", help="department standings from selected papers")
    p.add_argument("--papers", required=True, help="paper JSONL from 'select'")
    p.add_argument("--config-dir", required=True)
    p.add_argument("--area", default="all", help="area id, or 'all'")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("serve", help="run the read-only HTTP API")
    p.add_argument("--config-dir", required=True)
    p.add_argument("--records", required=True)
    p.add_argument("--bind", default="127.0.0.1:8000", metavar="ADDR:PORT")
    _add_window_flags(p)
    p.add_argument("--ui-dir", help="static dashboard directory to mount under /ui")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="write snapshot files to a directory")
    p.add_argument("--config-dir", required=True)
    p.add_argument("--records", required=True)
    _add_window_flags(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RegistryError, ClassificationError, IngestStreamError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
