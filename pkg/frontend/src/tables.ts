/**
 * Column sorting helpers. The sort is stable (equal keys never move
 * relative to each other), which makes a direction toggle involutive:
 * two toggles restore the order you started from.
 */

export type SortDirection = "asc" | "desc";

export interface SortState {
  column: string;
  direction: SortDirection;
}

/** Same column flips direction; a new column starts ascending. */
export function toggleSort(current: SortState | null, column: string): SortState {
  if (current && current.column === column) {
    return {
      column,
      direction: current.direction === "asc" ? "desc" : "asc",
    };
  }
  return { column, direction: "asc" };
}

export function sortRows<T>(
  rows: readonly T[],
  key: (row: T) => string | number,
  direction: SortDirection,
): T[] {
  const sign = direction === "asc" ? 1 : -1;
  return rows
    .map((row, index) => ({ row, index }))
    .sort((a, b) => {
      const left = key(a.row);
      const right = key(b.row);
      if (left < right) return -sign;
      if (left > right) return sign;
      return a.index - b.index;
    })
    .map((entry) => entry.row);
}
