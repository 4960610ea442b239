/**
 * Base path prepended to every API request. Empty means same origin,
 * which is what `confdex serve --ui-dir` sets up; deployments that host
 * the dashboard elsewhere change this before building.
 */
export const API_BASE = "";
