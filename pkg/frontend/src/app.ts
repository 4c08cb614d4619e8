/**
 * Application shell: hash routing between the word index, article pages
 * (asserted sentences with status styling plus inferred sections, with the
 * predictive editor mounted underneath), and the ask page.
 */

import {
  ApiClient,
  ApiError,
  ArticlePayload,
  RenderedPayload,
  SentencePayload,
  WordEntry,
} from "./api.js";
import { PredictiveEditor } from "./editor.js";

const FORM_SLOTS: Record<string, string[]> = {
  ProperName: ["base"],
  Noun: ["singular", "plural"],
  TransitiveVerb: ["third_sg", "bare"],
  OfConstruct: ["base"],
  TransitiveAdjective: ["base"],
};

const STATUS_LABELS: Record<string, string> = {
  Accepted: "accepted",
  RejectedInconsistent: "rejected: contradicts the wiki",
  BeyondFragment: "beyond the reasoned fragment",
  QuestionSentence: "question",
};

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function sentenceListItem(doc: Document, sentence: SentencePayload): HTMLElement {
  const item = el(doc, "li", `sentence status-${sentence.status.toLowerCase()}`);
  item.dataset.sentenceId = sentence.id;
  item.dataset.status = sentence.status;
  if (sentence.status === "BeyondFragment") {
    item.appendChild(el(doc, "span", "marker marker-beyond", "▲"));
  }
  if (sentence.status === "RejectedInconsistent") {
    item.appendChild(el(doc, "span", "marker marker-rejected", "✗"));
  }
  item.appendChild(el(doc, "span", "sentence-text", sentence.text));
  item.appendChild(el(doc, "span", "sentence-status", STATUS_LABELS[sentence.status] ?? ""));
  if (sentence.answers && sentence.answers.length) {
    const answers = el(doc, "ul", "question-answers");
    for (const answer of sentence.answers) {
      answers.appendChild(el(doc, "li", "answer", answer));
    }
    item.appendChild(answers);
  }
  return item;
}

export class App {
  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  start(): void {
    const win = this.root.ownerDocument.defaultView;
    win?.addEventListener("hashchange", () => void this.route());
    void this.route();
  }

  async route(): Promise<void> {
    const hash = this.root.ownerDocument.defaultView?.location.hash ?? "";
    const article = hash.match(/^#\/article\/(.+)$/);
    try {
      if (article && article[1]) {
        await this.renderArticle(decodeURIComponent(article[1]));
      } else if (hash === "#/ask") {
        await this.renderAsk();
      } else {
        await this.renderHome();
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.renderMissing();
      } else {
        this.renderError(error);
      }
    }
  }

  private header(active: string): HTMLElement {
    const doc = this.root.ownerDocument;
    const nav = el(doc, "nav", "topnav");
    const links: [string, string][] = [
      ["#/", "Words"],
      ["#/ask", "Ask"],
    ];
    for (const [href, label] of links) {
      const link = el(doc, "a", href === active ? "active" : "");
      link.setAttribute("href", href);
      link.textContent = label;
      nav.appendChild(link);
    }
    return nav;
  }

  async renderHome(): Promise<void> {
    const doc = this.root.ownerDocument;
    const { articles } = await this.api.articles();
    this.root.textContent = "";
    this.root.appendChild(this.header("#/"));
    this.root.appendChild(el(doc, "h1", "", "Words"));
    const byCategory = new Map<string, WordEntry[]>();
    for (const entry of articles) {
      const bucket = byCategory.get(entry.category) ?? [];
      bucket.push(entry);
      byCategory.set(entry.category, bucket);
    }
    for (const [category, entries] of byCategory) {
      this.root.appendChild(el(doc, "h3", "", category));
      const list = el(doc, "ul", "word-list");
      for (const entry of entries) {
        const item = el(doc, "li");
        const link = el(doc, "a");
        link.setAttribute("href", `#/article/${entry.entity_id}`);
        link.textContent = entry.display;
        item.appendChild(link);
        item.appendChild(
          el(doc, "span", "word-count", ` (${entry.sentence_count ?? 0} sentences)`),
        );
        list.appendChild(item);
      }
      this.root.appendChild(list);
    }
    this.root.appendChild(el(doc, "h3", "", "New word"));
    this.root.appendChild(this.wordForm());
  }

  /** Word creation: needed so the wiki is usable from a blank state. */
  wordForm(onCreated?: (entry: WordEntry) => void): HTMLElement {
    const doc = this.root.ownerDocument;
    const form = el(doc, "div", "word-form");
    const select = el(doc, "select", "word-category");
    for (const category of Object.keys(FORM_SLOTS)) {
      const option = el(doc, "option", "", category);
      option.setAttribute("value", category);
      select.appendChild(option);
    }
    const inputs = el(doc, "span", "word-inputs");
    const status = el(doc, "div", "word-form-status");
    const renderInputs = () => {
      inputs.textContent = "";
      for (const slot of FORM_SLOTS[select.value] ?? []) {
        const input = el(doc, "input", "word-input");
        input.setAttribute("placeholder", slot);
        input.dataset.slot = slot;
        inputs.appendChild(input);
      }
    };
    select.addEventListener("change", renderInputs);
    renderInputs();
    const button = el(doc, "button", "word-create", "Create word");
    button.addEventListener("click", () => {
      const forms: Record<string, string> = {};
      inputs.querySelectorAll("input").forEach((input) => {
        forms[(input as HTMLInputElement).dataset.slot ?? ""] = (
          input as HTMLInputElement
        ).value.trim();
      });
      this.api
        .addWord(select.value, forms)
        .then((entry) => {
          status.textContent = `Created ${entry.display}`;
          if (onCreated) onCreated(entry);
          else void this.route();
        })
        .catch((error) => {
          status.textContent = error instanceof Error ? error.message : String(error);
        });
    });
    form.appendChild(select);
    form.appendChild(inputs);
    form.appendChild(button);
    form.appendChild(status);
    return form;
  }

  private inferredSection(
    title: string,
    items: RenderedPayload[],
    className: string,
  ): HTMLElement | null {
    if (!items.length) return null;
    const doc = this.root.ownerDocument;
    const section = el(doc, "section", `inferred ${className}`);
    section.appendChild(el(doc, "h3", "", title));
    const list = el(doc, "ul");
    for (const item of items) {
      list.appendChild(el(doc, "li", "inferred-sentence", item.text));
    }
    section.appendChild(list);
    return section;
  }

  async renderArticle(entityId: string): Promise<void> {
    const doc = this.root.ownerDocument;
    const article: ArticlePayload = await this.api.article(entityId);
    this.root.textContent = "";
    this.root.appendChild(this.header(""));
    const heading = el(doc, "h1", "article-title", article.entity.display);
    heading.appendChild(el(doc, "span", "article-category", ` ${article.entity.category}`));
    this.root.appendChild(heading);

    const forms = Object.entries(article.entity.forms)
      .map(([slot, surface]) => `${slot}: ${surface}`)
      .join(", ");
    this.root.appendChild(el(doc, "p", "article-forms", forms));

    this.root.appendChild(el(doc, "h3", "", "Sentences"));
    const list = el(doc, "ul", "sentence-list");
    for (const sentence of article.asserted) {
      list.appendChild(sentenceListItem(doc, sentence));
    }
    this.root.appendChild(list);

    for (const section of [
      this.inferredSection(
        "Inferred memberships",
        article.inferred.memberships,
        "inferred-memberships",
      ),
      this.inferredSection(
        "Superclasses",
        article.inferred.superclasses,
        "inferred-superclasses",
      ),
      this.inferredSection("Subclasses", article.inferred.subclasses, "inferred-subclasses"),
      this.inferredSection("Instances", article.inferred.instances, "inferred-instances"),
    ]) {
      if (section) this.root.appendChild(section);
    }

    this.root.appendChild(el(doc, "h3", "", "Add a sentence"));
    const mount = el(doc, "div", "editor-mount");
    this.root.appendChild(mount);
    const editor = new PredictiveEditor(this.api, mount, {
      getTarget: () => entityId,
      onSubmitted: () => void this.renderArticle(entityId),
      onError: () => undefined,
    });
    await editor.start();
    this.root.appendChild(el(doc, "h3", "", "Need a new word?"));
    this.root.appendChild(this.wordForm(() => void editor.refreshMenu()));
  }

  async renderAsk(): Promise<void> {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    this.root.appendChild(this.header("#/ask"));
    this.root.appendChild(el(doc, "h1", "", "Ask a question"));
    const answersBox = el(doc, "div", "ask-answers");
    const mount = el(doc, "div", "editor-mount");
    this.root.appendChild(mount);
    this.root.appendChild(answersBox);
    const editor = new PredictiveEditor(
      this.api,
      mount,
      {
        getTarget: () => null,
        onAsked: (answers) => {
          answersBox.textContent = "";
          const list = el(doc, "ul", "answer-list");
          for (const answer of answers) {
            list.appendChild(el(doc, "li", "answer", answer.text));
          }
          answersBox.appendChild(
            answers.length ? list : el(doc, "p", "no-answers", "No answers."),
          );
        },
        onError: () => undefined,
      },
      true,
    );
    await editor.start();
  }

  renderMissing(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    this.root.appendChild(this.header(""));
    this.root.appendChild(el(doc, "h1", "missing-article", "No such article"));
    this.root.appendChild(
      el(doc, "p", "", "The entity does not exist (it may have been removed)."),
    );
  }

  renderError(error: unknown): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    this.root.appendChild(this.header(""));
    this.root.appendChild(el(doc, "h1", "", "Something went wrong"));
    this.root.appendChild(
      el(doc, "p", "error-detail", error instanceof Error ? error.message : String(error)),
    );
  }
}

export function mount(root: HTMLElement, base = ""): App {
  const app = new App(new ApiClient(base), root);
  app.start();
  return app;
}

declare global {
  interface Window {
    cnlwiki?: { mount: typeof mount };
  }
}

if (typeof window !== "undefined") {
  window.cnlwiki = { mount };
  const root = window.document.getElementById("app");
  if (root) mount(root);
}
