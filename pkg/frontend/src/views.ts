/**
 * DOM builders for every view: data in, detached element out. Fetching
 * and navigation live in main.ts, so all of these can be driven from
 * tests with recorded API fixtures.
 *
 * Values from the API are inserted as-is. Nothing here reformats a
 * number; in particular the exception highlight is driven purely by the
 * server's compliance flags, never recomputed from the cell values.
 */
import type {
  ConferenceRow,
  DepartmentDetail,
  DepartmentRow,
  Paper,
  PaperPage,
  ProfessorPapers,
} from "./api.js";
import type { EntityKind } from "./state.js";
import { sortRows, type SortState } from "./tables.js";

/** Builds the href for a drill-down link; main.ts wires this to the hash scheme. */
export type EntityLinker = (kind: EntityKind, id: string) => string;

type Child = string | number | Node;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: Child[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    if (name === "class") node.className = value;
    else node.setAttribute(name, value);
  }
  for (const child of children) {
    node.append(child instanceof Node ? child : String(child));
  }
  return node;
}

function emptyState(message: string): HTMLElement {
  return el("p", { class: "empty" }, message);
}

export function renderLoading(): HTMLElement {
  return el("p", { class: "loading" }, "Loading…");
}

export function renderErrorBanner(message: string, onRetry: () => void): HTMLElement {
  const retry = el("button", { class: "retry", type: "button" }, "Retry");
  retry.addEventListener("click", onRetry);
  return el("div", { class: "banner", role: "alert" }, el("span", {}, message), retry);
}

// -- conference table -------------------------------------------------------

interface ConferenceColumn {
  key: string;
  header: string;
  value: (row: ConferenceRow) => string | number;
  /** Numeric stand-in for ordering columns whose display value is a string. */
  sortValue?: (row: ConferenceRow) => number;
  /** Compliance flag behind the exception highlight, when the column has one. */
  flag?: (row: ConferenceRow) => boolean;
}

const CONFERENCE_COLUMNS: ConferenceColumn[] = [
  { key: "acronym", header: "Conference", value: (r) => r.acronym },
  { key: "sponsor", header: "Sponsor", value: (r) => r.sponsor },
  {
    key: "submitted",
    header: "Submitted",
    value: (r) => r.submitted,
    flag: (r) => r.submitted_ok,
  },
  { key: "accepted", header: "Accepted", value: (r) => r.accepted },
  {
    key: "rate",
    header: "Accept. Rate",
    value: (r) => r.rate,
    sortValue: (r) => Number(r.rate),
    flag: (r) => r.rate_ok,
  },
  { key: "h5_index", header: "h5-index", value: (r) => r.h5_index, flag: (r) => r.h5_ok },
  { key: "tier", header: "Rank", value: (r) => r.tier },
  { key: "min_pages", header: "Pages", value: (r) => r.min_pages },
];

export function renderConferenceTable(
  rows: readonly ConferenceRow[],
  sort: SortState | null,
  onSort: (column: string) => void,
): HTMLElement {
  if (rows.length === 0) {
    return emptyState("No conferences tracked for this area.");
  }
  let ordered: readonly ConferenceRow[] = rows;
  if (sort) {
    const column = CONFERENCE_COLUMNS.find((c) => c.key === sort.column);
    if (column) {
      ordered = sortRows(rows, column.sortValue ?? column.value, sort.direction);
    }
  }
  const head = el(
    "tr",
    {},
    ...CONFERENCE_COLUMNS.map((column) => {
      const th = el("th", { "data-col": column.key, scope: "col" }, column.header);
      if (sort && sort.column === column.key) th.classList.add(`sorted-${sort.direction}`);
      th.addEventListener("click", () => onSort(column.key));
      return th;
    }),
  );
  const body = ordered.map((row) => {
    const cells = CONFERENCE_COLUMNS.map((column) => {
      const td = el("td", { "data-col": column.key }, column.value(row));
      if (column.flag && !column.flag(row)) td.classList.add("exception");
      if (column.key === "rate" && row.rate_mismatch && row.stated_rate !== null) {
        td.classList.add("mismatch");
        td.title = `venue states ${row.stated_rate}`;
      }
      return td;
    });
    return el("tr", { "data-venue": row.venue_key }, ...cells);
  });
  return el(
    "table",
    { class: "data conferences" },
    el("thead", {}, head),
    el("tbody", {}, ...body),
  );
}

// -- department ranking -----------------------------------------------------

interface DepartmentColumn {
  key: string;
  header: string;
  value: (row: DepartmentRow) => string | number;
  sortValue?: (row: DepartmentRow) => number;
}

const DEPARTMENT_COLUMNS: DepartmentColumn[] = [
  { key: "name", header: "Department", value: (r) => r.name },
  { key: "institution_kind", header: "Kind", value: (r) => r.institution_kind },
  { key: "top", header: "A (top)", value: (r) => r.top },
  { key: "near_top", header: "B (near-the-top)", value: (r) => r.near_top },
  { key: "standard", header: "C (standard)", value: (r) => r.standard },
  { key: "papers", header: "Papers", value: (r) => r.papers },
  { key: "researchers", header: "Researchers", value: (r) => r.researchers },
  { key: "score", header: "Score", value: (r) => r.score, sortValue: (r) => Number(r.score) },
];

export function renderDepartmentRanking(
  rows: readonly DepartmentRow[],
  sort: SortState | null,
  onSort: (column: string) => void,
  linkFor: EntityLinker,
): HTMLElement {
  if (rows.length === 0) {
    return emptyState("No department has counted papers in this area.");
  }
  // The API already serves rows ranked by score; sorting is opt-in.
  let ordered: readonly DepartmentRow[] = rows;
  if (sort) {
    const column = DEPARTMENT_COLUMNS.find((c) => c.key === sort.column);
    if (column) {
      ordered = sortRows(rows, column.sortValue ?? column.value, sort.direction);
    }
  }
  const head = el(
    "tr",
    {},
    ...DEPARTMENT_COLUMNS.map((column) => {
      const th = el("th", { "data-col": column.key, scope: "col" }, column.header);
      if (sort && sort.column === column.key) th.classList.add(`sorted-${sort.direction}`);
      th.addEventListener("click", () => onSort(column.key));
      return th;
    }),
  );
  const body = ordered.map((row) =>
    el(
      "tr",
      { "data-dept": row.dept_id },
      el(
        "td",
        { "data-col": "name" },
        el("a", { href: linkFor("department", row.dept_id) }, row.name),
      ),
      ...DEPARTMENT_COLUMNS.slice(1).map((column) =>
        el("td", { "data-col": column.key }, column.value(row)),
      ),
    ),
  );
  return el(
    "table",
    { class: "data departments" },
    el("thead", {}, head),
    el("tbody", {}, ...body),
  );
}

// -- papers -----------------------------------------------------------------

function paperRow(paper: Paper): HTMLTableRowElement {
  const doiCell = el("td", { "data-col": "doi" });
  if (paper.doi) {
    doiCell.append(
      el(
        "a",
        { href: `https://doi.org/${paper.doi}`, rel: "noopener", target: "_blank" },
        paper.doi,
      ),
    );
  }
  return el(
    "tr",
    { "data-paper": paper.key },
    el("td", { "data-col": "title" }, paper.title),
    el("td", { "data-col": "venue" }, paper.acronym),
    el("td", { "data-col": "year" }, paper.year),
    el("td", { "data-col": "pages" }, paper.pages_raw),
    el("td", { "data-col": "authors" }, paper.authors.join(", ")),
    doiCell,
  );
}

function papersTable(papers: readonly Paper[]): HTMLElement {
  const head = el(
    "tr",
    {},
    ...["Title", "Venue", "Year", "Pages", "Authors", "DOI"].map((header) =>
      el("th", { scope: "col" }, header),
    ),
  );
  return el(
    "table",
    { class: "data papers" },
    el("thead", {}, head),
    el("tbody", {}, ...papers.map(paperRow)),
  );
}

export function renderPaperPage(
  page: PaperPage,
  onPage: (offset: number) => void,
): HTMLElement {
  if (page.total === 0) {
    return emptyState("No papers selected for this area.");
  }
  const prev = el("button", { type: "button", class: "pager-prev" }, "Previous");
  const next = el("button", { type: "button", class: "pager-next" }, "Next");
  prev.disabled = page.offset === 0;
  next.disabled = page.offset + page.papers.length >= page.total;
  prev.addEventListener("click", () => onPage(Math.max(0, page.offset - page.limit)));
  next.addEventListener("click", () => onPage(page.offset + page.limit));
  const pager = el(
    "div",
    { class: "pager" },
    prev,
    el("span", { class: "pager-total" }, `${page.total} papers`),
    next,
  );
  return el("div", {}, papersTable(page.papers), pager);
}

// -- drill-downs ------------------------------------------------------------

export function renderProfessorView(doc: ProfessorPapers): HTMLElement {
  const header = el(
    "div",
    { class: "entity-header" },
    el("h2", {}, doc.canonical_name),
    el("p", { class: "sub" }, doc.department),
  );
  const body =
    doc.papers.length === 0
      ? emptyState("No papers in the selection window.")
      : papersTable(doc.papers);
  return el("section", { class: "professor" }, header, body);
}

export function renderDepartmentView(detail: DepartmentDetail): HTMLElement {
  const header = el(
    "div",
    { class: "entity-header" },
    el("h2", {}, detail.name),
    el("p", { class: "sub" }, detail.institution_kind),
  );
  if (detail.areas.length === 0) {
    return el(
      "section",
      { class: "department" },
      header,
      emptyState("No counted papers in any area."),
    );
  }
  const head = el(
    "tr",
    {},
    ...["Area", "A (top)", "B (near-the-top)", "C (standard)", "Papers", "Researchers", "Score"].map(
      (label) => el("th", { scope: "col" }, label),
    ),
  );
  const body = detail.areas.map((row) =>
    el(
      "tr",
      { "data-area": row.area_id },
      el("td", {}, row.area_id),
      el("td", {}, row.top),
      el("td", {}, row.near_top),
      el("td", {}, row.standard),
      el("td", {}, row.papers),
      el("td", {}, row.researchers),
      el("td", { "data-col": "score" }, row.score),
    ),
  );
  return el(
    "section",
    { class: "department" },
    header,
    el("table", { class: "data breakdown" }, el("thead", {}, head), el("tbody", {}, ...body)),
  );
}

export function renderFacultyList(
  researcherIds: readonly string[],
  linkFor: EntityLinker,
): HTMLElement {
  if (researcherIds.length === 0) {
    return emptyState("No registered researcher has papers in this area.");
  }
  const items = researcherIds.map((rid) =>
    el("li", {}, el("a", { href: linkFor("professor", rid) }, rid)),
  );
  return el("ul", { class: "faculty" }, ...items);
}

export function renderNotFound(detail: string): HTMLElement {
  return el(
    "section",
    { class: "not-found" },
    el("h2", {}, "Not found"),
    el("p", {}, detail),
  );
}
