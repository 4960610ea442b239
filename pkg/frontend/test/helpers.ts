import { readFileSync } from "node:fs";
import { join } from "node:path";

/** Parse a recorded API response from test/fixtures.
 *
 * Resolved from the project root (where vitest runs) rather than via
 * import.meta.url, which the jsdom environment rebases off the fake
 * document origin.
 */
export function fixture<T>(name: string): T {
  const path = join(process.cwd(), "test", "fixtures", name);
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}
