/**
 * Shell wiring: reads the view state from the URL hash, fetches what the
 * view needs, renders it, and keeps the area/tab chrome in sync. A
 * monotonically growing token discards responses that arrive after the
 * user has already navigated away.
 */
import { api, ApiError } from "./api.js";
import {
  DEFAULT_STATE,
  parseViewState,
  serializeViewState,
  TABS,
  type EntityKind,
  type ViewState,
} from "./state.js";
import { toggleSort, type SortState } from "./tables.js";
import {
  renderConferenceTable,
  renderDepartmentRanking,
  renderDepartmentView,
  renderErrorBanner,
  renderFacultyList,
  renderLoading,
  renderNotFound,
  renderPaperPage,
  renderProfessorView,
} from "./views.js";

const chrome = document.getElementById("chrome")!;
const app = document.getElementById("app")!;
const metaBar = document.getElementById("meta")!;

let current: ViewState = { ...DEFAULT_STATE };
let sort: SortState | null = null;
let paperOffset = 0;
let requestToken = 0;

function linkFor(kind: EntityKind, id: string): string {
  return serializeViewState({ area: current.area, tab: current.tab, entity: { kind, id } });
}

function renderChrome(state: ViewState, areaIds: readonly string[]): void {
  const select = document.createElement("select");
  select.ariaLabel = "research area";
  for (const areaId of areaIds) {
    const option = document.createElement("option");
    option.value = areaId;
    option.textContent = areaId;
    option.selected = areaId === state.area;
    select.append(option);
  }
  select.addEventListener("change", () => {
    window.location.hash = serializeViewState({
      area: select.value,
      tab: current.tab,
      entity: null,
    });
  });
  const tabs = document.createElement("span");
  tabs.className = "tabs";
  for (const tab of TABS) {
    const link = document.createElement("a");
    link.href = serializeViewState({ area: state.area, tab, entity: null });
    link.textContent = tab;
    if (tab === state.tab && !state.entity) link.className = "active";
    tabs.append(link);
  }
  chrome.replaceChildren(select, tabs);
}

async function buildView(state: ViewState): Promise<HTMLElement> {
  if (state.entity) {
    if (state.entity.kind === "professor") {
      return renderProfessorView(await api.professorPapers(state.entity.id));
    }
    return renderDepartmentView(await api.department(state.entity.id));
  }
  switch (state.tab) {
    case "conferences": {
      const rows = await api.conferences(state.area);
      const rerender = (): HTMLElement =>
        renderConferenceTable(rows, sort, (column) => {
          sort = toggleSort(sort, column);
          app.replaceChildren(rerender());
        });
      return rerender();
    }
    case "departments": {
      const rows = await api.departments(state.area);
      const rerender = (): HTMLElement =>
        renderDepartmentRanking(
          rows,
          sort,
          (column) => {
            sort = toggleSort(sort, column);
            app.replaceChildren(rerender());
          },
          linkFor,
        );
      return rerender();
    }
    case "papers": {
      const page = await api.papers(state.area, paperOffset);
      return renderPaperPage(page, (offset) => {
        paperOffset = offset;
        void show();
      });
    }
    case "faculty": {
      // Walk the area's paper pages and keep each researcher id once,
      // in order of first appearance.
      const seen: string[] = [];
      let offset = 0;
      for (;;) {
        const page = await api.papers(state.area, offset);
        for (const paper of page.papers) {
          for (const rid of paper.researcher_ids) {
            if (!seen.includes(rid)) seen.push(rid);
          }
        }
        offset += page.limit;
        if (offset >= page.total || page.papers.length === 0) break;
      }
      return renderFacultyList(seen, linkFor);
    }
  }
}

async function show(): Promise<void> {
  const token = ++requestToken;
  const state = parseViewState(window.location.hash);
  const sameView = serializeViewState(state) === serializeViewState(current);
  if (!sameView) {
    sort = null;
    if (!(state.tab === current.tab && state.area === current.area)) paperOffset = 0;
  }
  current = state;
  app.replaceChildren(renderLoading());
  try {
    const view = await buildView(state);
    if (token !== requestToken) return; // a newer navigation won
    app.replaceChildren(view);
  } catch (err) {
    if (token !== requestToken) return;
    if (err instanceof ApiError && err.status === 404) {
      app.replaceChildren(renderNotFound(err.detail));
      return;
    }
    const message = err instanceof Error ? err.message : String(err);
    app.replaceChildren(renderErrorBanner(message, () => void show()));
  }
}

async function boot(): Promise<void> {
  let areaIds: string[] = [DEFAULT_STATE.area];
  try {
    const [areas, meta] = await Promise.all([api.areas(), api.meta()]);
    areaIds = areas.map((a) => a.area_id);
    metaBar.textContent =
      `snapshot ${meta.snapshot_tag} / generated ${meta.generated_at} / ` +
      `window ${meta.window.first}-${meta.window.last}`;
  } catch {
    metaBar.textContent = "service metadata unavailable";
  }
  const redraw = (): void => {
    renderChrome(parseViewState(window.location.hash), areaIds);
    void show();
  };
  window.addEventListener("hashchange", redraw);
  if (!window.location.hash) {
    window.location.hash = serializeViewState(DEFAULT_STATE);
  }
  redraw();
}

void boot();
