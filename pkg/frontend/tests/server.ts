/** Spawn the real wiki server on a temp store for end-to-end editor tests. */

import { ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export interface TestServer {
  base: string;
  stop(): void;
}

export async function startServer(): Promise<TestServer> {
  const dir = mkdtempSync(join(tmpdir(), "cnlwiki-editor-"));
  const port = 8800 + (process.pid % 150);
  const base = `http://127.0.0.1:${port}`;
  const child: ChildProcess = spawn(
    "cnlwiki-serve",
    ["--store", join(dir, "store.json"), "--bind", `127.0.0.1:${port}`],
    { stdio: "ignore" },
  );
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      const response = await fetch(`${base}/api/health`);
      if (response.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      child.kill();
      throw new Error("wiki server did not come up");
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  return {
    base,
    stop() {
      child.kill();
    },
  };
}

export const GEO_WORDS: [string, Record<string, string>][] = [
  ["ProperName", { base: "Zurich" }],
  ["ProperName", { base: "Switzerland" }],
  ["ProperName", { base: "Europe" }],
  ["ProperName", { base: "Germany" }],
  ["Noun", { singular: "city", plural: "cities" }],
  ["Noun", { singular: "country", plural: "countries" }],
  ["Noun", { singular: "area", plural: "areas" }],
  ["Noun", { singular: "continent", plural: "continents" }],
  ["TransitiveVerb", { third_sg: "borders", bare: "border" }],
  ["OfConstruct", { base: "part" }],
  ["TransitiveAdjective", { base: "located-in" }],
];
