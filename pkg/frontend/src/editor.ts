/**
 * The predictive sentence editor: a prefix of chosen tokens plus a menu of
 * exactly the tokens the grammar allows next, fetched from the server after
 * every change.  The user can only append a token present in the menu,
 * delete the last token, or submit once a terminator ends the sentence.
 */

import {
  ApiClient,
  CompletionGroups,
  CompletionItem,
  GROUP_ORDER,
  SentencePayload,
  TokenRef,
  sameToken,
} from "./api.js";

export interface EditorCallbacks {
  /** Article the sentence is submitted to; null disables submission (ask mode). */
  getTarget(): string | null;
  onSubmitted?(sentence: SentencePayload): void;
  onAsked?(answers: { text: string }[]): void;
  onError?(error: unknown): void;
}

function isTerminator(token: TokenRef): boolean {
  return "term" in token;
}

export class PredictiveEditor {
  prefix: CompletionItem[] = [];
  menu: CompletionGroups = {};
  busy = false;
  private statusLine = "";

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
    private readonly callbacks: EditorCallbacks,
    private readonly askMode = false,
  ) {}

  prefixTokens(): TokenRef[] {
    return this.prefix.map((item) => item.token);
  }

  async start(): Promise<void> {
    await this.refreshMenu();
  }

  /** Menu must always mirror the server's completion set for the prefix. */
  async refreshMenu(): Promise<void> {
    const { groups } = await this.api.complete(this.prefixTokens());
    this.menu = groups;
    this.render();
  }

  private menuContains(token: TokenRef): boolean {
    return Object.values(this.menu).some((items) =>
      items.some((item) => sameToken(item.token, token)),
    );
  }

  async appendToken(item: CompletionItem): Promise<void> {
    if (!this.menuContains(item.token)) {
      throw new Error(`token ${JSON.stringify(item.token)} is not in the current menu`);
    }
    this.prefix.push(item);
    try {
      await this.refreshMenu();
    } catch (error) {
      this.prefix.pop(); // menu and prefix must not drift apart
      this.callbacks.onError?.(error);
      this.render();
    }
  }

  async deleteLast(): Promise<void> {
    if (!this.prefix.length) return;
    this.prefix.pop();
    await this.refreshMenu();
  }

  async clear(): Promise<void> {
    this.prefix = [];
    this.statusLine = "";
    await this.refreshMenu();
  }

  canSubmit(): boolean {
    const last = this.prefix[this.prefix.length - 1];
    return last !== undefined && isTerminator(last.token);
  }

  displayText(): string {
    const parts: string[] = [];
    for (const item of this.prefix) {
      if (isTerminator(item.token) && parts.length) {
        parts[parts.length - 1] += item.display;
      } else {
        parts.push(item.display);
      }
    }
    return parts.join(" ");
  }

  async submit(): Promise<void> {
    if (!this.canSubmit() || this.busy) return;
    this.busy = true;
    this.render();
    try {
      if (this.askMode) {
        const { answers } = await this.api.ask(this.prefixTokens());
        this.statusLine = answers.length ? "" : "No answers.";
        this.callbacks.onAsked?.(answers);
        this.prefix = [];
        await this.refreshMenu();
      } else {
        const target = this.callbacks.getTarget();
        if (!target) throw new Error("no target article");
        const sentence = await this.api.submitSentence(target, this.prefixTokens());
        this.statusLine = `Submitted: ${sentence.status}`;
        this.callbacks.onSubmitted?.(sentence);
        this.prefix = [];
        await this.refreshMenu();
      }
    } catch (error) {
      // network and domain errors keep the prefix so nothing typed is lost
      this.callbacks.onError?.(error);
      this.statusLine = error instanceof Error ? error.message : String(error);
    } finally {
      this.busy = false;
      this.render();
    }
  }

  render(): void {
    const doc = this.root.ownerDocument;
    this.root.textContent = "";
    this.root.classList.add("editor");

    const prefixBox = doc.createElement("div");
    prefixBox.className = "editor-prefix";
    if (this.prefix.length) {
      for (const item of this.prefix) {
        const chip = doc.createElement("span");
        chip.className = "token-chip";
        chip.textContent = item.display;
        prefixBox.appendChild(chip);
      }
    } else {
      const hint = doc.createElement("span");
      hint.className = "editor-hint";
      hint.textContent = this.askMode
        ? "Compose a question from the menu below"
        : "Compose a sentence from the menu below";
      prefixBox.appendChild(hint);
    }
    this.root.appendChild(prefixBox);

    const actions = doc.createElement("div");
    actions.className = "editor-actions";
    const deleteButton = doc.createElement("button");
    deleteButton.className = "editor-delete";
    deleteButton.textContent = "Delete last";
    deleteButton.disabled = !this.prefix.length || this.busy;
    deleteButton.addEventListener("click", () => void this.deleteLast());
    actions.appendChild(deleteButton);
    const clearButton = doc.createElement("button");
    clearButton.className = "editor-clear";
    clearButton.textContent = "Clear";
    clearButton.disabled = !this.prefix.length || this.busy;
    clearButton.addEventListener("click", () => void this.clear());
    actions.appendChild(clearButton);
    const submitButton = doc.createElement("button");
    submitButton.className = "editor-submit";
    submitButton.textContent = this.askMode ? "Ask" : "Save sentence";
    submitButton.disabled = !this.canSubmit() || this.busy;
    submitButton.addEventListener("click", () => void this.submit());
    actions.appendChild(submitButton);
    this.root.appendChild(actions);

    if (this.statusLine) {
      const status = doc.createElement("div");
      status.className = "editor-status";
      status.textContent = this.statusLine;
      this.root.appendChild(status);
    }

    const menuBox = doc.createElement("div");
    menuBox.className = "editor-menu";
    const names = GROUP_ORDER.filter((name) => (this.menu[name] ?? []).length > 0);
    if (!names.length && this.prefix.length) {
      const done = doc.createElement("div");
      done.className = "editor-hint";
      done.textContent = "Sentence complete; nothing can follow.";
      menuBox.appendChild(done);
    }
    for (const name of names) {
      const column = doc.createElement("div");
      column.className = "menu-group";
      column.dataset.group = name;
      const heading = doc.createElement("h4");
      heading.textContent = name;
      column.appendChild(heading);
      for (const item of this.menu[name] ?? []) {
        const button = doc.createElement("button");
        button.className = "menu-token";
        button.textContent = item.display;
        button.disabled = this.busy;
        button.addEventListener("click", () => void this.appendToken(item));
        column.appendChild(button);
      }
      menuBox.appendChild(column);
    }
    this.root.appendChild(menuBox);
  }
}
