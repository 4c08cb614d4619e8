/**
 * Editor conformance against the real server: the rendered menu equals the
 * API's completion set at every step of Every -> area -> is; a contradictory
 * sentence renders with red (rejected) styling; a rule sentence renders with
 * the triangle marker.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, CompletionItem, GROUP_ORDER } from "../src/api.js";
import { PredictiveEditor } from "../src/editor.js";
import { App, sentenceListItem } from "../src/app.js";
import { GEO_WORDS, startServer, TestServer } from "./server.js";

let server: TestServer;
let api: ApiClient;
const ids: Record<string, string> = {};

beforeAll(async () => {
  server = await startServer();
  api = new ApiClient(server.base);
  for (const [category, forms] of GEO_WORDS) {
    const entry = await api.addWord(category, forms);
    ids[entry.display] = entry.entity_id;
  }
});

afterAll(() => {
  server?.stop();
});

function newEditor(target: string | null): PredictiveEditor {
  const root = document.createElement("div");
  document.body.appendChild(root);
  return new PredictiveEditor(api, root, { getTarget: () => target });
}

function editorRoot(editor: PredictiveEditor): HTMLElement {
  return (editor as unknown as { root: HTMLElement }).root;
}

function renderedMenu(editor: PredictiveEditor): Record<string, string[]> {
  const menu: Record<string, string[]> = {};
  editorRoot(editor)
    .querySelectorAll(".menu-group")
    .forEach((group) => {
      const name = (group as HTMLElement).dataset.group ?? "";
      menu[name] = Array.from(group.querySelectorAll("button.menu-token")).map(
        (button) => button.textContent ?? "",
      );
    });
  return menu;
}

function menuItem(editor: PredictiveEditor, display: string): CompletionItem {
  for (const items of Object.values(editor.menu)) {
    const found = items.find((item) => item.display === display);
    if (found) return found;
  }
  throw new Error(`no menu item ${display}`);
}

async function compose(editor: PredictiveEditor, words: string[]): Promise<void> {
  for (const word of words) {
    await editor.appendToken(menuItem(editor, word));
  }
}

async function settle(): Promise<void> {
  for (let i = 0; i < 40; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

describe("predictive editor", () => {
  it("renders exactly the API's completion set along Every -> area -> is", async () => {
    const steps: string[][] = [[], ["Every"], ["Every", "area"], ["Every", "area", "is"]];
    for (const step of steps) {
      const probe = newEditor(ids["area"] ?? null);
      await probe.start();
      await compose(probe, step);
      const { groups } = await api.complete(probe.prefixTokens());
      const expected: Record<string, string[]> = {};
      for (const name of GROUP_ORDER) {
        const items = groups[name];
        if (items && items.length) expected[name] = items.map((item) => item.display);
      }
      expect(renderedMenu(probe)).toEqual(expected);
    }
    // the "Every area is" step offers articles, negation, adjectives
    const probe = newEditor(ids["area"] ?? null);
    await probe.start();
    await compose(probe, ["Every", "area", "is"]);
    const rendered = renderedMenu(probe);
    expect(rendered.FunctionWords).toEqual(["a", "an", "not"]);
    expect(rendered.Adjectives).toEqual(["located-in"]);
    expect(rendered.ProperNames).toBeUndefined();
  });

  it("appends via real DOM clicks and refreshes the menu from the server", async () => {
    const editor = newEditor(ids["area"] ?? null);
    await editor.start();
    const root = editorRoot(editor);
    const every = Array.from(root.querySelectorAll("button.menu-token")).find(
      (button) => button.textContent === "Every",
    ) as HTMLButtonElement;
    expect(every).toBeTruthy();
    every.click();
    await settle();
    expect(editor.displayText()).toBe("Every");
    // after "Every" only nouns can follow
    const menu = renderedMenu(editor);
    expect(Object.keys(menu)).toEqual(["Nouns"]);
    expect(menu.Nouns).toEqual(["area", "city", "continent", "country"]);
  });

  it("never sends a token outside the received menu", async () => {
    const editor = newEditor(ids["area"] ?? null);
    await editor.start();
    await expect(
      editor.appendToken({ token: { term: "." }, display: "." }),
    ).rejects.toThrow(/not in the current menu/);
  });

  it("delete-last then re-append reproduces the identical menu", async () => {
    const editor = newEditor(ids["area"] ?? null);
    await editor.start();
    await compose(editor, ["Every", "area", "is"]);
    const before = JSON.stringify(editor.menu);
    await editor.deleteLast();
    await compose(editor, ["is"]);
    expect(JSON.stringify(editor.menu)).toBe(before);
  });

  it("submits a contradictory sentence and renders it red", async () => {
    const zurich = ids["Zurich"] ?? "";
    const first = newEditor(zurich);
    await first.start();
    await compose(first, ["Zurich", "is", "a", "city", "."]);
    let submitted: string | undefined;
    (first as unknown as { callbacks: { onSubmitted?: (s: { status: string }) => void } })
      .callbacks.onSubmitted = (s) => {
      submitted = s.status;
    };
    await first.submit();
    expect(submitted).toBe("Accepted");

    const second = newEditor(zurich);
    await second.start();
    await compose(second, ["Zurich", "is", "not", "a", "city", "."]);
    expect(second.canSubmit()).toBe(true);
    let rejected: { status: string; text: string } | undefined;
    (second as unknown as {
      callbacks: { onSubmitted?: (s: { status: string; text: string }) => void };
    }).callbacks.onSubmitted = (s) => {
      rejected = s;
    };
    await second.submit();
    expect(rejected?.status).toBe("RejectedInconsistent");
    expect(rejected?.text).toBe("Zurich is not a city.");

    // the article view renders the stored red sentence with rejected styling
    const article = await api.article(zurich);
    const stored = article.asserted.find((s) => s.text === "Zurich is not a city.");
    expect(stored?.status).toBe("RejectedInconsistent");
    const item = sentenceListItem(document, stored!);
    expect(item.classList.contains("status-rejectedinconsistent")).toBe(true);
    expect(item.querySelector(".marker-rejected")).toBeTruthy();
    const css = readFileSync(
      join(dirname(fileURLToPath(import.meta.url)), "..", "styles.css"),
      "utf-8",
    );
    expect(css).toMatch(/--rejected:\s*#b00020/);
    expect(css).toMatch(/\.status-rejectedinconsistent\s*\{[^}]*color:\s*var\(--rejected\)/);
  });

  it("submits a rule sentence and renders the triangle marker", async () => {
    const borders = ids["borders"] ?? "";
    const editor = newEditor(borders);
    await editor.start();
    await compose(editor, ["If", "X", "borders", "Y", "then", "Y", "borders", "X", "."]);
    let outcome: { status: string } | undefined;
    (editor as unknown as { callbacks: { onSubmitted?: (s: { status: string }) => void } })
      .callbacks.onSubmitted = (s) => {
      outcome = s;
    };
    await editor.submit();
    expect(outcome?.status).toBe("BeyondFragment");

    const article = await api.article(borders);
    const stored = article.asserted.find((s) => s.status === "BeyondFragment");
    expect(stored).toBeTruthy();
    const item = sentenceListItem(document, stored!);
    const marker = item.querySelector(".marker-beyond");
    expect(marker?.textContent).toBe("▲");
  });

  it("keeps the prefix when submission fails", async () => {
    const editor = newEditor(null); // no target: submission must fail
    await editor.start();
    await compose(editor, ["Zurich", "is", "a", "country", "."]);
    await editor.submit();
    expect(editor.displayText()).toBe("Zurich is a country.");
  });
});

describe("article pages", () => {
  function newApp(): { app: App; root: HTMLElement } {
    const root = document.createElement("div");
    document.body.appendChild(root);
    return { app: new App(api, root), root };
  }

  it("renders an article with status styling and inferred sections", async () => {
    await api.submitSentence(ids["city"] ?? "", [
      { fw: "every" },
      { cw: ids["city"] ?? "", slot: "singular" },
      { fw: "is" },
      { fw: "an" },
      { cw: ids["area"] ?? "", slot: "singular" },
      { term: "." },
    ]);
    const { app, root } = newApp();
    await app.renderArticle(ids["Zurich"] ?? "");
    const texts = Array.from(root.querySelectorAll(".sentence-text")).map(
      (node) => node.textContent,
    );
    expect(texts).toContain("Zurich is a city.");
    expect(texts).toContain("Zurich is not a city.");
    const red = Array.from(root.querySelectorAll(".status-rejectedinconsistent"));
    expect(red.length).toBeGreaterThan(0);
    const inferred = Array.from(
      root.querySelectorAll(".inferred-memberships .inferred-sentence"),
    ).map((node) => node.textContent);
    expect(inferred).toContain("Zurich is an area.");
  });

  it("renders the missing-article page on 404", async () => {
    const { app, root } = newApp();
    window.location.hash = "#/article/99999";
    await app.route();
    expect(root.querySelector("h1.missing-article")?.textContent).toBe("No such article");
  });

  it("lists words grouped by category on the home page", async () => {
    const { app, root } = newApp();
    window.location.hash = "#/";
    await app.route();
    const links = Array.from(root.querySelectorAll(".word-list a")).map(
      (node) => node.textContent,
    );
    expect(links).toContain("Zurich");
    expect(links).toContain("city");
    expect(root.querySelector(".word-form")).toBeTruthy();
  });
});
