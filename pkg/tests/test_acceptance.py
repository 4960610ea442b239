"""End-to-end checks on the shipped fixture, one class per guarantee.

The terminal summary (see conftest) prints a PASS/FAIL line per class.
Expected values are transcribed from the reference venue table the
registry fixture mirrors, hand-computed, or cross-checked against the
independent reference implementation in oracle_selection.
"""

import gc
import io
import json
import threading
import time
import tracemalloc
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from random import Random

import pytest
from fastapi.testclient import TestClient
from jsonschema import Draft202012Validator

import oracle_selection
from confdex.classify import classification_report, exception_cells
from confdex.ingest import IngestStats, parse_records
from confdex.registry import load_registry
from confdex.scoring import TierCounts, score_centi
from confdex.selection import DROP_REASONS, select_papers
from confdex.snapshot import EXPORT_FILES, build_snapshot, export_snapshot
from confdex.webapi import SnapshotRef, create_app

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
CONFIG_DIR = DATA_DIR / "config"
SAMPLE_XML = DATA_DIR / "records" / "se_sample.xml"
GOLDEN_DIR = DATA_DIR / "golden"
SCHEMA_DIR = DATA_DIR / "schemas"


# -- venue table ------------------------------------------------------------

@pytest.fixture(scope="module")
def venue_report():
    started = time.perf_counter()
    registry = load_registry(CONFIG_DIR)
    rows = classification_report(registry)
    elapsed = time.perf_counter() - started
    return {"rows": rows, "elapsed": elapsed}


class TestVenueTableReproduction:
    """venue table reproduction (rates, exception flags, tiers)"""

    def test_all_sixteen_venues_classified(self, venue_report):
        rows = venue_report["rows"]
        assert len(rows) == 16
        assert [r.venue_key for r in rows[:3]] == ["icse", "sigsoft", "kbse"]

    def test_computed_rates_match_stated_for_15_of_16(self, venue_report):
        rows = venue_report["rows"]
        assert all(r.stated_rate is not None for r in rows)
        off_by_more = {
            r.venue_key
            for r in rows
            if abs(r.rate - Decimal(str(r.stated_rate))) > Decimal("0.05")
        }
        assert off_by_more == {"issre"}

    def test_issre_discrepancy_is_surfaced_not_resolved(self, venue_report, capsys):
        rows = venue_report["rows"]
        issre = next(r for r in rows if r.venue_key == "issre")
        assert str(issre.rate) == "31.2"
        assert issre.stated_rate == 31.5
        assert issre.rate_mismatch is True
        assert [r.venue_key for r in rows if r.rate_mismatch] == ["issre"]
        # The discrepancy also reaches the operator: the report table
        # prints the computed rate with a mismatch marker.
        from confdex.cli import main
        assert main(["classify", "--config-dir", str(CONFIG_DIR)]) == 0
        out = capsys.readouterr().out
        assert "31.2!" in out

    def test_exception_cells_match_published_list(self, venue_report):
        # Known red: the fixture's own numbers fail more strict checks
        # than the six cells its source calls out (see README). The six
        # are asserted literally here rather than patched around.
        expected = {
            ("MODELS", "submitted"), ("SPLC", "submitted"), ("ICPC", "submitted"),
            ("ISSRE", "rate"), ("ICPC", "rate"),
            ("ICSA", "h5"),
        }
        assert exception_cells(venue_report["rows"]) == expected

    def test_tier_assignment(self, venue_report):
        tiers = {r.acronym: r.tier for r in venue_report["rows"]}
        assert tiers.pop("ICSE") == "top"
        assert tiers.pop("FSE") == "top"
        assert tiers.pop("ASE") == "near-the-top"
        assert set(tiers.values()) == {"standard"}
        assert len(tiers) == 13

    def test_load_and_classify_under_one_second(self, venue_report):
        assert venue_report["elapsed"] < 1.0


# -- score formula ----------------------------------------------------------

GRID = [(a, b, c) for a in range(11) for b in range(11) for c in range(11)]


@pytest.fixture(scope="module")
def score_sweep():
    started = time.perf_counter()
    centi = {combo: score_centi(*combo) for combo in GRID}
    return {"centi": centi, "started": started}


class TestScoreFormulaProperties:
    """score formula: exact arithmetic, linearity, ordering, bounds"""

    def test_equals_exact_fraction_arithmetic_on_grid(self, score_sweep):
        for (a, b, c), centi in score_sweep["centi"].items():
            exact = a + Fraction(66, 100) * b + Fraction(33, 100) * c
            assert Fraction(centi, 100) == exact

    def test_rendered_with_two_decimals(self):
        assert str(TierCounts(0, 0, 0).score) == "0.00"
        assert str(TierCounts(1, 1, 1).score) == "1.99"
        assert str(TierCounts(2, 0, 1).score) == "2.33"

    def test_additive_in_paper_counts(self, score_sweep):
        centi = score_sweep["centi"]
        units = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for (a, b, c) in GRID:
            for da, db, dc in units:
                bumped = (a + da, b + db, c + dc)
                if bumped in centi:
                    assert centi[bumped] - centi[(a, b, c)] == centi[(da, db, dc)]
        rng = Random(11)
        for _ in range(2000):
            first = rng.choice(GRID)
            second = tuple(rng.randint(0, 10 - v) for v in first)
            total = tuple(x + y for x, y in zip(first, second))
            assert centi[total] == centi[first] + centi[second]

    def test_tier_weights_strictly_ordered(self, score_sweep):
        centi = score_sweep["centi"]
        assert centi[(1, 0, 0)] > centi[(0, 1, 0)] > centi[(0, 0, 1)] > centi[(0, 0, 0)]
        assert centi[(1, 0, 0)] == 100
        assert centi[(0, 1, 0)] == 66
        assert centi[(0, 0, 1)] == 33

    def test_bounds_over_grid(self, score_sweep):
        values = score_sweep["centi"]
        assert min(values.values()) == values[(0, 0, 0)] == 0
        assert max(values.values()) == values[(10, 10, 10)] == 1990
        assert all(0 <= v <= 1990 for v in values.values())

    def test_uniform_scaling_preserves_ranking(self, score_sweep):
        centi = score_sweep["centi"]
        rng = Random(12)
        for _ in range(1000):
            first, second = rng.choice(GRID), rng.choice(GRID)
            base = centi[first] - centi[second]
            for k in (2, 3, 5):
                scaled = score_centi(*(k * v for v in first)) - score_centi(
                    *(k * v for v in second)
                )
                assert (scaled > 0) == (base > 0)
                assert (scaled == 0) == (base == 0)

    def test_property_suite_under_five_seconds(self, score_sweep):
        assert time.perf_counter() - score_sweep["started"] < 5.0


# -- selection oracle -------------------------------------------------------

@pytest.fixture(scope="module")
def oracle_run():
    started = time.perf_counter()
    registry = load_registry(CONFIG_DIR)
    corpus = oracle_selection.build_corpus(n=1000, seed=7)
    venues, aliases = oracle_selection.load_tables()
    expected_kept, expected_drops = oracle_selection.oracle_select(
        corpus, venues, aliases)
    stats = IngestStats()
    xml = oracle_selection.corpus_to_xml(corpus)
    outcome = select_papers(parse_records(io.BytesIO(xml), stats), registry)
    elapsed = time.perf_counter() - started
    return {
        "stats": stats,
        "outcome": outcome,
        "expected_kept": expected_kept,
        "expected_drops": expected_drops,
        "elapsed": elapsed,
    }


class TestSelectionOracleEquivalence:
    """selection matches the independent brute-force oracle"""

    def test_every_corpus_record_considered(self, oracle_run):
        assert oracle_run["stats"].emitted == 1000
        assert oracle_run["outcome"].considered == 1000

    def test_kept_papers_record_for_record(self, oracle_run):
        got = [
            {
                "key": p.key,
                "venue_key": p.venue_key,
                "year": p.year,
                "page_count": p.page_count,
                "doi": p.doi,
                "researcher_ids": p.researcher_ids,
            }
            for p in oracle_run["outcome"].papers
        ]
        assert got == oracle_run["expected_kept"]

    def test_drop_tallies_agree(self, oracle_run):
        dropped = oracle_run["outcome"].dropped
        assert {r: dropped.get(r, 0) for r in DROP_REASONS} == oracle_run["expected_drops"]

    def test_corpus_mixes_every_outcome(self, oracle_run):
        assert len(oracle_run["expected_kept"]) > 100
        assert all(v > 10 for v in oracle_run["expected_drops"].values())

    def test_equivalence_run_under_five_seconds(self, oracle_run):
        assert oracle_run["elapsed"] < 5.0


# -- streaming memory bound -------------------------------------------------

_BULK_RECORD = (
    b'<inproceedings key="conf/icse/Bulk%07d">'
    b"<author>Ana Lima</author>"
    b"<title>Throughput Measurement Run %07d.</title>"
    b"<pages>1--12</pages><year>2016</year>"
    b"<ee>https://doi.org/10.1109/ICSE.2016.%07d</ee>"
    b"<crossref>conf/icse/2016</crossref>"
    b"</inproceedings>\n"
)


class RepeatingDump:
    """Byte stream of n generated records; never materializes the dump."""

    def __init__(self, n: int):
        self._chunks = self._emit(n)
        self._tail = b""

    @staticmethod
    def _emit(n: int):
        yield b'<?xml version="1.0" encoding="UTF-8"?>\n<dblp>\n'
        for i in range(n):
            yield _BULK_RECORD % (i, i, i)
        yield b"</dblp>\n"

    def read(self, size: int = -1) -> bytes:
        parts = [self._tail]
        have = len(self._tail)
        while size < 0 or have < size:
            chunk = next(self._chunks, None)
            if chunk is None:
                break
            parts.append(chunk)
            have += len(chunk)
        data = b"".join(parts)
        if size < 0:
            self._tail = b""
            return data
        self._tail = data[size:]
        return data[:size]


def _consume(n: int) -> int:
    count = 0
    for _ in parse_records(RepeatingDump(n)):
        count += 1
    return count


@pytest.fixture(scope="module")
def stream_run():
    gc.collect()
    tracemalloc.start()
    emitted_one = _consume(1)
    peak_one = tracemalloc.get_traced_memory()[1]
    tracemalloc.stop()

    gc.collect()
    tracemalloc.start()
    emitted_many = _consume(100_000)
    peak_many = tracemalloc.get_traced_memory()[1]
    tracemalloc.stop()

    gc.collect()
    started = time.perf_counter()
    emitted_timed = _consume(100_000)
    elapsed = time.perf_counter() - started
    return {
        "emitted_one": emitted_one,
        "emitted_many": emitted_many,
        "emitted_timed": emitted_timed,
        "peak_one": peak_one,
        "peak_many": peak_many,
        "elapsed": elapsed,
    }


class TestStreamingMemoryBound:
    """streaming ingest stays flat at 100,000 records"""

    def test_every_record_comes_through(self, stream_run):
        assert stream_run["emitted_one"] == 1
        assert stream_run["emitted_many"] == 100_000
        assert stream_run["emitted_timed"] == 100_000

    def test_peak_within_twice_single_record_budget(self, stream_run):
        budget = 2 * stream_run["peak_one"] + 8 * 1024 * 1024
        assert stream_run["peak_many"] <= budget, (
            f"peak at 100k records {stream_run['peak_many']} exceeds "
            f"2x single-record peak {stream_run['peak_one']} + 8 MiB"
        )

    def test_untraced_run_under_thirty_seconds(self, stream_run):
        assert stream_run["elapsed"] < 30.0


# -- golden exports ---------------------------------------------------------

@pytest.fixture(scope="module")
def export_runs(tmp_path_factory):
    first = build_snapshot(
        CONFIG_DIR, SAMPLE_XML, generated_at="2024-01-01T00:00:00Z")
    second = build_snapshot(
        CONFIG_DIR, SAMPLE_XML, generated_at="2025-06-15T12:34:56Z")
    first_dir = tmp_path_factory.mktemp("exports-first")
    second_dir = tmp_path_factory.mktemp("exports-second")
    export_snapshot(first, first_dir)
    export_snapshot(second, second_dir)
    return {"first": first, "second": second,
            "first_dir": first_dir, "second_dir": second_dir}


class TestGoldenExports:
    """exports are byte-stable and match the committed golden files"""

    def test_two_runs_byte_identical(self, export_runs):
        for name in EXPORT_FILES:
            first = (export_runs["first_dir"] / name).read_bytes()
            second = (export_runs["second_dir"] / name).read_bytes()
            assert first == second, f"{name} differs between runs"

    def test_matches_committed_goldens(self, export_runs):
        fresh_names = sorted(p.name for p in export_runs["first_dir"].iterdir())
        golden_names = sorted(p.name for p in GOLDEN_DIR.iterdir())
        assert fresh_names == golden_names == sorted(EXPORT_FILES)
        for name in EXPORT_FILES:
            fresh = (export_runs["first_dir"] / name).read_bytes()
            golden = (GOLDEN_DIR / name).read_bytes()
            assert fresh == golden, f"{name} differs from the committed golden"

    def test_content_tag_ignores_generated_at(self, export_runs):
        first, second = export_runs["first"], export_runs["second"]
        assert first.generated_at != second.generated_at
        assert first.tag == second.tag

    def test_hand_checked_rows(self, export_runs):
        conferences = (export_runs["first_dir"] / "conferences.csv").read_text(
            encoding="utf-8").splitlines()
        assert ("icse,ICSE,se,ACM SIGSOFT/IEEE CS,415,68,16.4,16.4,false,"
                "68,12,top,true,true,true,true") in conferences
        departments = (export_runs["first_dir"] / "departments.csv").read_text(
            encoding="utf-8").splitlines()
        assert ("se,ufmg,Federal University of Minas Gerais,federal,"
                "2,0,1,3,2,2.33") in departments


# -- HTTP API ---------------------------------------------------------------

ENDPOINT_SCHEMAS = [
    ("/areas", "areas.schema.json"),
    ("/areas/se/conferences", "conferences.schema.json"),
    ("/areas/se/departments", "departments.schema.json"),
    ("/areas/se/papers", "area_papers.schema.json"),
    ("/departments/ufmg", "department_detail.schema.json"),
    ("/professors/ana-lima/papers", "professor_papers.schema.json"),
    ("/meta", "meta.schema.json"),
]


def _validator(name: str) -> Draft202012Validator:
    schema = json.loads((SCHEMA_DIR / name).read_text(encoding="utf-8"))
    Draft202012Validator.check_schema(schema)
    return Draft202012Validator(schema)


@pytest.fixture(scope="module")
def api(tmp_path_factory):
    snapshot = build_snapshot(CONFIG_DIR, SAMPLE_XML)
    variant_xml = tmp_path_factory.mktemp("variant") / "variant.xml"
    variant_xml.write_bytes(
        SAMPLE_XML.read_bytes().replace(b".</title>", b" [rebuilt].</title>"))
    variant = build_snapshot(CONFIG_DIR, variant_xml)
    ref = SnapshotRef(snapshot)
    client = TestClient(create_app(ref))
    return {"snapshot": snapshot, "variant": variant, "ref": ref, "client": client}


class TestApiConformance:
    """HTTP API matches its shipped schemas; swaps stay atomic"""

    def test_every_endpoint_validates_against_its_schema(self, api):
        client = api["client"]
        for path, schema_name in ENDPOINT_SCHEMAS:
            response = client.get(path)
            assert response.status_code == 200, path
            assert response.headers["X-Snapshot-Tag"] == api["snapshot"].tag
            _validator(schema_name).validate(response.json())

    def test_error_responses_validate_too(self, api):
        response = api["client"].get("/areas/nope/conferences")
        assert response.status_code == 404
        assert response.headers["content-type"].startswith("application/problem+json")
        _validator("problem.schema.json").validate(response.json())

    def test_area_list_has_exactly_eighteen_entries(self, api):
        areas = api["client"].get("/areas").json()
        assert len(areas) == 18
        assert len({a["area_id"] for a in areas}) == 18

    def test_runs_without_any_dashboard_assets(self, api):
        # The app above was built with no UI directory at all; the API
        # stays fully functional and the UI mount point just 404s.
        response = api["client"].get("/ui/")
        assert response.status_code == 404
        _validator("problem.schema.json").validate(response.json())

    def test_swap_storm_never_mixes_snapshots(self, api):
        client, ref = api["client"], api["ref"]
        snapshots = (api["snapshot"], api["variant"])
        assert snapshots[0].tag != snapshots[1].tag
        paths = ["/areas/se/papers", "/professors/ana-lima/papers", "/meta"]

        expected = {}
        for snap in snapshots:
            ref.swap(snap)
            for path in paths:
                response = client.get(path)
                expected[(response.headers["X-Snapshot-Tag"], path)] = response.json()

        ref.swap(snapshots[0])
        stop = threading.Event()

        def flip():
            which = False
            while not stop.is_set():
                ref.swap(snapshots[1] if which else snapshots[0])
                which = not which
                time.sleep(0)

        mismatches = []

        def hammer():
            for i in range(120):
                path = paths[i % len(paths)]
                response = client.get(path)
                key = (response.headers["X-Snapshot-Tag"], path)
                if response.json() != expected[key]:
                    mismatches.append(key)

        flipper = threading.Thread(target=flip)
        workers = [threading.Thread(target=hammer) for _ in range(4)]
        flipper.start()
        for worker in workers:
            worker.start()
        for worker in workers:
            worker.join()
        stop.set()
        flipper.join()
        assert mismatches == []
