// Typed client for the rule-studio service. All rule logic lives server-side;
// this module only moves JSON across the documented endpoints.

export interface LanguageEntry {
  language: string;
  paradigm: string;
  known: boolean;
  supported_concepts: string[];
}

export interface Pruning {
  mode: "none" | "depth" | "concept";
  depth?: number;
  concepts?: string[];
}

export interface PreviewResult {
  rendered_ast: string;
  token_count: number;
  node_count: number;
  unpruned_token_count: number;
  tagged_node_types: string[];
}

export interface CandidateRule {
  language: string;
  ast_node_type: string;
  ubsr_node_type: string;
  extractor: Array<Record<string, unknown>>;
}

export interface GenerateResult {
  prompt: string;
  response: string | null;
  candidate_rule: CandidateRule | null;
  parse_error?: string | null;
}

export interface CaseResult {
  snippet: string;
  expected: string;
  actual: string | null;
  error: string | null;
  matched: boolean;
}

export interface ValidateResult {
  verdict: "accept" | "reject";
  reasons: string[];
  cases: CaseResult[];
  accept_token: string | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class StudioApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      throw new ApiError(
        response.status,
        (body as { code?: string }).code ?? "error",
        (body as { message?: string }).message ?? response.statusText,
      );
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  languages(): Promise<LanguageEntry[]> {
    return this.request<LanguageEntry[]>("/languages");
  }

  rulesVersion(): Promise<number> {
    return this.request<{ version: number }>("/rules/version").then((r) => r.version);
  }

  parsePreview(code: string, language: string, pruning: Pruning): Promise<PreviewResult> {
    return this.post<PreviewResult>("/parse-preview", { code, language, pruning });
  }

  generate(args: {
    test_language: string;
    concept: string;
    exemplars: string[];
    pruning: Pruning;
    test_snippet?: string;
    cross_paradigm?: boolean;
  }): Promise<GenerateResult> {
    return this.post<GenerateResult>("/rule/generate", args);
  }

  validate(
    candidate: CandidateRule,
    cases: Array<{ snippet: string; expected: string }>,
  ): Promise<ValidateResult> {
    return this.post<ValidateResult>("/rule/validate", {
      candidate_rule: candidate,
      test_cases: cases,
    });
  }

  commit(candidate: CandidateRule, version: number, token: string): Promise<number> {
    return this.post<{ version: number }>("/rule/commit", {
      candidate_rule: candidate,
      version,
      token,
    }).then((r) => r.version);
  }
}
