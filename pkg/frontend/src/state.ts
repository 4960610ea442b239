/**
 * View state lives entirely in the URL hash:
 *
 *   #/{area}/{tab}[/{entity-kind}/{entity-id}]
 *
 * Every view is a bookmarkable deep link, browser history is the only
 * navigation stack, and serialize/parse round-trip exactly.
 */

export const TABS = ["conferences", "departments", "faculty", "papers"] as const;
export type Tab = (typeof TABS)[number];

export const ENTITY_KINDS = ["professor", "department"] as const;
export type EntityKind = (typeof ENTITY_KINDS)[number];

export interface ViewState {
  area: string;
  tab: Tab;
  entity: { kind: EntityKind; id: string } | null;
}

export const DEFAULT_STATE: ViewState = {
  area: "se",
  tab: "conferences",
  entity: null,
};

function isTab(value: string | undefined): value is Tab {
  return (TABS as readonly string[]).includes(value ?? "");
}

function isEntityKind(value: string | undefined): value is EntityKind {
  return (ENTITY_KINDS as readonly string[]).includes(value ?? "");
}

export function serializeViewState(state: ViewState): string {
  const parts = [encodeURIComponent(state.area), state.tab];
  if (state.entity) {
    parts.push(state.entity.kind, encodeURIComponent(state.entity.id));
  }
  return "#/" + parts.join("/");
}

/** Anything unparseable falls back to the default view rather than erroring. */
export function parseViewState(hash: string): ViewState {
  const trimmed = hash.startsWith("#") ? hash.slice(1) : hash;
  const parts = trimmed
    .split("/")
    .filter((part) => part !== "")
    .map(decodeURIComponent);
  const [area, tab, kind, entityId] = parts;
  if (!area || !isTab(tab)) {
    return { ...DEFAULT_STATE };
  }
  const state: ViewState = { area, tab, entity: null };
  if (isEntityKind(kind) && entityId) {
    state.entity = { kind, id: entityId };
  }
  return state;
}
