"""Streaming ingestion of DBLP-style XML dumps.

The dump is a single huge XML document whose top-level children are
publication records (<inproceedings>, <article>, <proceedings>, ...).
Parsing is single-pass and keeps at most one record in memory: a byte-level
filter rewrites named character entities into numeric references, and an
XMLPullParser assembles one record element at a time, which is converted to
an immutable PublicationRecord and then dropped.

Records that cannot be salvaged (unknown entity, missing or duplicate key)
are skipped and tallied; the stream keeps going. Only malformed XML aborts
the whole stream.
"""

from __future__ import annotations

import gzip
import html.entities
import io
import json
import re
import unicodedata
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

KIND_CONFERENCE = "conference-paper"
KIND_JOURNAL = "journal-article"
KIND_OTHER = "other"
RECORD_KINDS = (KIND_CONFERENCE, KIND_JOURNAL, KIND_OTHER)

# DBLP element tag -> record kind; anything else is counted and skipped.
_TAG_KINDS = {"inproceedings": KIND_CONFERENCE, "article": KIND_JOURNAL}

_CHUNK_SIZE = 64 * 1024
_GZIP_MAGIC = b"\x1f\x8b"

# How many recent record keys are remembered for duplicate detection.
_DUP_WINDOW = 1024

# Latin-1 named entities (agrave, szlig, ...) as used by DBLP dumps, mapped
# to numeric character references so the XML parser accepts them without a
# DTD. The five XML-predefined entities are left for the parser itself.
_LATIN_ENTITIES = {
    name: cp for cp, name in html.entities.codepoint2name.items() if 0xA0 <= cp <= 0xFF
}

# Unknown entities are rewritten to private-use sentinels so the record that
# contains them can be detected and skipped without killing the stream.
_SENT_OPEN = ""
_SENT_CLOSE = ""

_ENTITY_RE = re.compile(rb"&([A-Za-z][A-Za-z0-9]{0,31});")
_PARTIAL_REF_RE = re.compile(rb"&#?[A-Za-z0-9]{0,32}\Z")
_PREDEFINED = {b"amp", b"lt", b"gt", b"quot", b"apos"}

_SUFFIX_RE = re.compile(r"^(.*\S)\s+(\d{4})$")
_WS_RE = re.compile(r"\s+")

# Characters NFKD will not decompose to an ASCII letter plus marks.
_FOLD_MAP = str.maketrans(
    {
        "ß": "ss",
        "æ": "ae",
        "œ": "oe",
        "ø": "o",
        "đ": "d",
        "ð": "d",
        "þ": "th",
        "ł": "l",
        "ı": "i",
        "ŋ": "n",
    }
)

_PAGE_RANGE_RE = re.compile(r"^\s*(\d+)\s*-{1,2}\s*(\d+)\s*$")
_PAGE_ARTICLE_RE = re.compile(r"^\s*(\d+):(\d+)\s*-{1,2}\s*(\d+):(\d+)\s*$")
_PAGE_SINGLE_RE = re.compile(r"^\s*(\d+)\s*$")

_DOI_EE_RE = re.compile(r"^https?://(?:dx\.)?doi\.org/(10\..+)$")


class IngestStreamError(Exception):
    """Malformed XML made the whole stream unusable."""

    def __init__(self, message: str, byte_offset: int, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset
        self.line = line
        self.column = column

    def __str__(self) -> str:
        pos = f" near byte {self.byte_offset}"
        if self.line is not None:
            pos += f" (line {self.line}, column {self.column})"
        return super().__str__() + pos


@dataclass(frozen=True)
class AuthorName:
    """An author as printed in the dump, with the homonym suffix split off."""

    display: str
    suffix: str | None
    normalized: str


@dataclass(frozen=True)
class PageInfo:
    raw: str
    count: int | None


@dataclass(frozen=True)
class PublicationRecord:
    """One publication entry from the dump, normalized."""

    key: str
    kind: str
    title: str
    authors: tuple[AuthorName, ...]
    venue_key: str
    year: int | None
    pages: PageInfo
    ee_links: tuple[str, ...]


@dataclass
class IngestStats:
    """Tallies collected while streaming one dump."""

    emitted: int = 0
    skipped_kinds: Counter = field(default_factory=Counter)
    record_errors: Counter = field(default_factory=Counter)
    error_samples: list[str] = field(default_factory=list)

    _MAX_SAMPLES = 100

    def record_error(self, reason: str, detail: str) -> None:
        self.record_errors[reason] += 1
        if len(self.error_samples) < self._MAX_SAMPLES:
            self.error_samples.append(f"{reason}: {detail}")

    def summary_lines(self) -> list[str]:
        lines = [f"records emitted: {self.emitted}"]
        for tag, n in sorted(self.skipped_kinds.items()):
            lines.append(f"skipped <{tag}>: {n}")
        for reason, n in sorted(self.record_errors.items()):
            lines.append(f"record errors ({reason}): {n}")
        return lines


def normalize_name(raw: str) -> str:
    """Lowercase, strip accents, and collapse whitespace for matching."""
    folded = raw.casefold().translate(_FOLD_MAP)
    decomposed = unicodedata.normalize("NFKD", folded)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    # NFKD can mint fresh cased letters (math alphanumerics, Roman
    # numerals), so the fold has to happen again after decomposing.
    return _WS_RE.sub(" ", stripped.casefold()).strip()


def split_author_name(raw: str) -> AuthorName:
    """Split the trailing 4-digit homonym suffix off a DBLP author string."""
    text = raw.strip()
    suffix = None
    m = _SUFFIX_RE.match(text)
    if m:
        text, suffix = m.group(1), m.group(2)
    return AuthorName(display=text, suffix=suffix, normalized=normalize_name(text))


def parse_page_range(raw: str) -> PageInfo:
    """Derive a page count from a DBLP pages string; never raises.

    Recognizes "a--b" (and "a-b") ranges, article-number style "n:a--n:b",
    and a bare page number. Anything else keeps the raw string with no count.
    """
    m = _PAGE_RANGE_RE.match(raw)
    if m:
        a, b = int(m.group(1)), int(m.group(2))
        if a <= b:
            return PageInfo(raw=raw, count=b - a + 1)
        return PageInfo(raw=raw, count=None)
    m = _PAGE_ARTICLE_RE.match(raw)
    if m:
        n1, a, n2, b = (int(m.group(i)) for i in range(1, 5))
        if n1 == n2 and a <= b:
            return PageInfo(raw=raw, count=b - a + 1)
        return PageInfo(raw=raw, count=None)
    if _PAGE_SINGLE_RE.match(raw):
        return PageInfo(raw=raw, count=1)
    return PageInfo(raw=raw, count=None)


def extract_venue_key(crossref: str | None, booktitle: str | None, journal: str | None = None) -> str:
    """Venue key from a cross-reference ("conf/icse/2017" -> "icse"), else
    from the booktitle/journal acronym; empty when neither is usable."""
    if crossref:
        parts = crossref.split("/")
        if len(parts) >= 2 and parts[1]:
            return parts[1].lower()
    for name in (booktitle, journal):
        if name:
            token = name.strip().split()[0] if name.strip() else ""
            cleaned = re.sub(r"[^0-9a-z]", "", token.lower())
            if cleaned:
                return cleaned
    return ""


class _EntityFilter:
    """Rewrites named entities in a byte stream ahead of the XML parser.

    Known Latin-1 names become numeric character references; unknown names
    become sentinel-wrapped text; the XML-predefined five pass through.
    Handles references split across chunk boundaries.
    """

    def __init__(self) -> None:
        self._tail = b""

    def push(self, chunk: bytes) -> bytes:
        data = self._tail + chunk
        m = _PARTIAL_REF_RE.search(data)
        if m:
            self._tail = data[m.start():]
            data = data[: m.start()]
        else:
            self._tail = b""
        return _ENTITY_RE.sub(self._replace, data)

    def flush(self) -> bytes:
        data, self._tail = self._tail, b""
        return _ENTITY_RE.sub(self._replace, data)

    @staticmethod
    def _replace(m: re.Match) -> bytes:
        name = m.group(1)
        if name in _PREDEFINED:
            return m.group(0)
        cp = _LATIN_ENTITIES.get(name.decode("ascii"))
        if cp is not None:
            return b"&#%d;" % cp
        return b"&#%d;%s&#%d;" % (ord(_SENT_OPEN), name, ord(_SENT_CLOSE))


def _find_sentinel(elem: ET.Element) -> str | None:
    """Name of the first unknown entity recorded in the element, if any."""

    def scan(text: str | None) -> str | None:
        if text and _SENT_OPEN in text:
            start = text.index(_SENT_OPEN) + 1
            end = text.find(_SENT_CLOSE, start)
            return text[start:end] if end > start else "?"
        return None

    for node in elem.iter():
        for value in (node.text, node.tail, *node.attrib.values()):
            found = scan(value)
            if found:
                return found
    return None


def _flat_text(elem: ET.Element) -> str:
    return "".join(elem.itertext()).strip()


def _child_text(elem: ET.Element, tag: str) -> str | None:
    child = elem.find(tag)
    if child is None:
        return None
    text = _flat_text(child)
    return text or None


def _build_record(elem: ET.Element, kind: str) -> PublicationRecord:
    authors = tuple(
        split_author_name(_flat_text(a)) for a in elem.findall("author") if _flat_text(a)
    )
    year_text = _child_text(elem, "year")
    year: int | None = None
    if year_text and re.fullmatch(r"\d{4}", year_text):
        year = int(year_text)
    pages_text = _child_text(elem, "pages")
    ee_links = tuple(_flat_text(e) for e in elem.findall("ee") if _flat_text(e))
    return PublicationRecord(
        key=elem.get("key", ""),
        kind=kind,
        title=_child_text(elem, "title") or "",
        authors=authors,
        venue_key=extract_venue_key(
            _child_text(elem, "crossref"),
            _child_text(elem, "booktitle"),
            _child_text(elem, "journal"),
        ),
        year=year,
        pages=parse_page_range(pages_text) if pages_text is not None else PageInfo(raw="", count=None),
        ee_links=ee_links,
    )


def parse_records(source: IO[bytes], stats: IngestStats | None = None) -> Iterator[PublicationRecord]:
    """Stream PublicationRecords out of a DBLP-style XML byte stream.

    Yields one record per <inproceedings>/<article> element in document
    order. Other record kinds are counted and skipped. Memory stays bounded
    by the largest single record. Raises IngestStreamError on malformed XML.
    """
    if stats is None:
        stats = IngestStats()
    parser = ET.XMLPullParser(events=("start", "end"))
    entity_filter = _EntityFilter()
    # Duplicate keys are only checked against a sliding window of recent
    # records: catching a repeated block (the realistic failure) must not
    # cost memory linear in the size of a multi-gigabyte dump.
    recent_keys: dict[str, None] = {}
    depth = 0
    root: ET.Element | None = None
    consumed = 0
    chunk_start = 0
    saw_content = False

    def fail(exc: ET.ParseError) -> IngestStreamError:
        line, col = exc.position if exc.position else (None, None)
        return IngestStreamError(f"malformed XML: {exc.msg if hasattr(exc, 'msg') else exc}", byte_offset=chunk_start, line=line, column=col)

    def events_after(feed: bytes, closing: bool = False) -> Iterator[tuple[str, ET.Element]]:
        try:
            if feed:
                parser.feed(feed)
            if closing:
                parser.close()
            yield from parser.read_events()
        except ET.ParseError as exc:
            raise fail(exc) from None

    def handle(event_stream: Iterable[tuple[str, ET.Element]]) -> Iterator[PublicationRecord]:
        nonlocal depth, root
        for event, elem in event_stream:
            if event == "start":
                if root is None:
                    root = elem
                depth += 1
                continue
            depth -= 1
            if depth != 1:
                continue
            kind = _TAG_KINDS.get(elem.tag)
            if kind is None:
                stats.skipped_kinds[elem.tag] += 1
            else:
                bad_entity = _find_sentinel(elem)
                key = elem.get("key", "")
                if bad_entity is not None:
                    stats.record_error("unknown-entity", f"&{bad_entity}; in record {key or '<no key>'}")
                elif not key:
                    stats.record_error("missing-key", f"<{elem.tag}> without key attribute")
                elif key in recent_keys:
                    stats.record_error("duplicate-key", key)
                else:
                    recent_keys[key] = None
                    if len(recent_keys) > _DUP_WINDOW:
                        del recent_keys[next(iter(recent_keys))]
                    stats.emitted += 1
                    yield _build_record(elem, kind)
            if root is not None:
                root.clear()

    while True:
        raw = source.read(_CHUNK_SIZE)
        if not raw:
            break
        chunk_start = consumed
        consumed += len(raw)
        if not saw_content and raw.strip():
            saw_content = True
        yield from handle(events_after(entity_filter.push(raw)))
    if not saw_content:
        return
    yield from handle(events_after(entity_filter.flush(), closing=True))


def open_dump(path: str) -> IO[bytes]:
    """Open a dump file (or "-" for stdin), transparently ungzipping when the
    stream starts with the gzip magic bytes."""
    import sys

    if path == "-":
        raw: IO[bytes] = sys.stdin.buffer
    else:
        raw = open(path, "rb")
    buffered = raw if isinstance(raw, io.BufferedReader) else io.BufferedReader(raw)  # type: ignore[arg-type]
    if buffered.peek(2)[:2] == _GZIP_MAGIC:
        return gzip.GzipFile(fileobj=buffered)  # type: ignore[return-value]
    return buffered


def doi_from_ee(ee_links: Iterable[str]) -> str | None:
    """First DOI found among electronic-edition links, resolver prefix stripped."""
    for link in ee_links:
        m = _DOI_EE_RE.match(link.strip())
        if m:
            return m.group(1)
    return None


def record_to_dict(record: PublicationRecord) -> dict:
    return {
        "key": record.key,
        "kind": record.kind,
        "title": record.title,
        "authors": [{"display": a.display, "suffix": a.suffix} for a in record.authors],
        "venue_key": record.venue_key,
        "year": record.year,
        "pages": {"raw": record.pages.raw, "count": record.pages.count},
        "ee": list(record.ee_links),
    }


def record_from_dict(data: dict) -> PublicationRecord:
    authors = tuple(
        AuthorName(
            display=a["display"],
            suffix=a.get("suffix"),
            normalized=normalize_name(a["display"]),
        )
        for a in data["authors"]
    )
    return PublicationRecord(
        key=data["key"],
        kind=data["kind"],
        title=data["title"],
        authors=authors,
        venue_key=data["venue_key"],
        year=data["year"],
        pages=PageInfo(raw=data["pages"]["raw"], count=data["pages"]["count"]),
        ee_links=tuple(data["ee"]),
    )


def write_records_jsonl(records: Iterable[PublicationRecord], out: IO[str]) -> int:
    n = 0
    for record in records:
        out.write(json.dumps(record_to_dict(record), ensure_ascii=False) + "\n")
        n += 1
    return n


def read_records_jsonl(lines: Iterable[str]) -> Iterator[PublicationRecord]:
    for line in lines:
        line = line.strip()
        if line:
            yield record_from_dict(json.loads(line))
