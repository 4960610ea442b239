/**
 * Typed client for the conference index API.
 *
 * Rates and scores arrive as pre-formatted strings ("16.4", "2.33") and
 * are passed through untouched: the server owns all number formatting,
 * the dashboard only places values into cells.
 */
import { API_BASE } from "./config.js";

export interface AreaSummary {
  area_id: string;
  name: string;
  papers: number;
}

export interface ConferenceRow {
  venue_key: string;
  acronym: string;
  area_id: string;
  sponsor: string;
  submitted: number;
  accepted: number;
  rate: string;
  stated_rate: string | null;
  rate_mismatch: boolean;
  h5_index: number;
  min_pages: number;
  tier: "top" | "near-the-top" | "standard";
  submitted_ok: boolean;
  rate_ok: boolean;
  h5_ok: boolean;
  compliant: boolean;
}

export interface DepartmentRow {
  dept_id: string;
  name: string;
  institution_kind: string;
  top: number;
  near_top: number;
  standard: number;
  papers: number;
  researchers: number;
  score: string;
}

export interface Paper {
  key: string;
  title: string;
  venue_key: string;
  acronym: string;
  area_id: string;
  year: number;
  page_count: number;
  pages_raw: string;
  doi: string | null;
  authors: string[];
  researcher_ids: string[];
}

export interface PaperPage {
  area_id: string;
  total: number;
  offset: number;
  limit: number;
  papers: Paper[];
}

export interface AreaBreakdown {
  area_id: string;
  top: number;
  near_top: number;
  standard: number;
  papers: number;
  researchers: number;
  score: string;
}

export interface DepartmentDetail {
  dept_id: string;
  name: string;
  institution_kind: string;
  areas: AreaBreakdown[];
}

export interface ProfessorPapers {
  researcher_id: string;
  canonical_name: string;
  dept_id: string;
  department: string;
  papers: Paper[];
}

export interface Meta {
  generated_at: string;
  snapshot_tag: string;
  registry_digest: string;
  window: { first: number; last: number };
  papers: number;
  considered: number;
  dropped: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function get<T>(path: string): Promise<T> {
  const response = await fetch(API_BASE + path, {
    headers: { accept: "application/json" },
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const problem = await response.json();
      if (typeof problem.detail === "string") detail = problem.detail;
    } catch {
      // body was not a problem document; the status text will do
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

const seg = encodeURIComponent;

export const api = {
  areas: () => get<AreaSummary[]>("/areas"),
  conferences: (area: string) =>
    get<ConferenceRow[]>(`/areas/${seg(area)}/conferences`),
  departments: (area: string) =>
    get<DepartmentRow[]>(`/areas/${seg(area)}/departments`),
  papers: (area: string, offset = 0, limit = 100) =>
    get<PaperPage>(`/areas/${seg(area)}/papers?offset=${offset}&limit=${limit}`),
  department: (deptId: string) =>
    get<DepartmentDetail>(`/departments/${seg(deptId)}`),
  professorPapers: (researcherId: string) =>
    get<ProfessorPapers>(`/professors/${seg(researcherId)}/papers`),
  meta: () => get<Meta>("/meta"),
};
