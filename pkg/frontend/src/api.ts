/**
 * Typed client for the wiki's JSON API.
 *
 * Tokens travel as tagged references so the client never guesses at
 * surface strings: {fw}, {cw, slot}, {var}, {term}.
 */

export type TokenRef =
  | { fw: string }
  | { cw: string; slot: string }
  | { var: string }
  | { term: string };

export interface CompletionItem {
  token: TokenRef;
  display: string;
}

export type CompletionGroups = Record<string, CompletionItem[]>;

/** Fixed display order of completion groups (one column each). */
export const GROUP_ORDER = [
  "FunctionWords",
  "ProperNames",
  "Nouns",
  "Verbs",
  "OfConstructs",
  "Adjectives",
  "Variables",
  "Terminators",
] as const;

export interface WordEntry {
  entity_id: string;
  category: string;
  display: string;
  forms: Record<string, string>;
  sentence_count?: number;
}

export interface SentencePayload {
  id: string;
  home_entity: string;
  text: string;
  status: string;
  tokens: TokenRef[];
  created_at: number;
  answers?: string[];
}

export interface RenderedPayload {
  text: string;
  tokens: TokenRef[];
}

export interface ArticlePayload {
  entity: WordEntry;
  asserted: SentencePayload[];
  inferred: {
    memberships: RenderedPayload[];
    superclasses: RenderedPayload[];
    subclasses: RenderedPayload[];
    instances: RenderedPayload[];
  };
}

export interface HierarchyPayload {
  edges: { sub: string; sup: string; text: string }[];
  equivalences: string[][];
}

export interface HealthPayload {
  kb_version: number;
  counts: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly position?: number,
  ) {
    super(message);
  }
}

export function sameToken(a: TokenRef, b: TokenRef): boolean {
  const keys = ["fw", "cw", "slot", "var", "term"] as const;
  const ra = a as Record<string, string | undefined>;
  const rb = b as Record<string, string | undefined>;
  return keys.every((k) => ra[k] === rb[k]);
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: typeof fetch = (...args) => globalThis.fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(this.base + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const data = payload as { code?: string; message?: string; position?: number };
      throw new ApiError(
        response.status,
        data.code ?? "HttpError",
        data.message ?? `HTTP ${response.status}`,
        data.position,
      );
    }
    return payload as T;
  }

  health(): Promise<HealthPayload> {
    return this.request("GET", "/api/health");
  }

  articles(): Promise<{ articles: WordEntry[] }> {
    return this.request("GET", "/api/articles");
  }

  article(entityId: string): Promise<ArticlePayload> {
    return this.request("GET", `/api/articles/${entityId}`);
  }

  addWord(category: string, forms: Record<string, string>): Promise<WordEntry> {
    return this.request("POST", "/api/words", { category, forms });
  }

  removeWord(entityId: string): Promise<{ removed: string }> {
    return this.request("DELETE", `/api/words/${entityId}`);
  }

  complete(prefix: TokenRef[]): Promise<{ groups: CompletionGroups }> {
    return this.request("POST", "/api/complete", { prefix });
  }

  submitSentence(entityId: string, tokens: TokenRef[]): Promise<SentencePayload> {
    return this.request("POST", `/api/articles/${entityId}/sentences`, { tokens });
  }

  retractSentence(sentenceId: string): Promise<{ removed: string }> {
    return this.request("DELETE", `/api/sentences/${sentenceId}`);
  }

  recheckSentence(sentenceId: string): Promise<SentencePayload> {
    return this.request("POST", `/api/sentences/${sentenceId}/recheck`);
  }

  ask(tokens: TokenRef[]): Promise<{ answers: RenderedPayload[] }> {
    return this.request("POST", "/api/ask", { tokens });
  }

  hierarchy(): Promise<HierarchyPayload> {
    return this.request("GET", "/api/hierarchy");
  }
}
