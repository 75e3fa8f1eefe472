/** Load the checked-in flow documents exported from the backend. */

import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { FlowDocument } from "../../src/types.js";

export function loadFixture(name: "small" | "walkthrough" | "large"): FlowDocument {
  const path = join(process.cwd(), "tests", "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(path, "utf-8")) as FlowDocument;
}
