/** Typed client for the polyrec HTTP JSON API. */

export type SuggestionKind = "author" | "controlled_term" | string;

export interface Suggestion {
  entity: string;
  kind: SuggestionKind;
  score: number;
}

export interface SearchResultRow {
  doc_id: string;
  score: number;
  title: string;
}

export interface SearchResponse {
  rendered_query: string;
  results: SearchResultRow[];
}

export interface HealthResponse {
  doc_count: number;
  fields: string[];
  suggest_n: number;
}

export type RunConfigTag = "b" | "b+te" | "b+ae" | "b+te+ae";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    if (body.error) code = body.error;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiError(response.status, code, message);
}

export interface SearchParams {
  q: string;
  config: RunConfigTag;
  te?: string[];
  ae?: string[];
  k?: number;
}

function appendAccepted(params: URLSearchParams, name: string, values?: string[]): void {
  if (values === undefined) return;
  if (values.length === 0) {
    params.append(name, "");
    return;
  }
  for (const value of values) params.append(name, value);
}

export class SearchClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async get<T>(path: string, params: URLSearchParams): Promise<T> {
    const query = params.toString();
    const url = `${this.baseUrl}${path}${query ? `?${query}` : ""}`;
    const response = await this.fetchFn(url);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  async health(): Promise<HealthResponse> {
    return this.get<HealthResponse>("/health", new URLSearchParams());
  }

  async suggest(q: string, kind: SuggestionKind, n?: number): Promise<Suggestion[]> {
    const params = new URLSearchParams({ q, kind });
    if (n !== undefined) params.set("n", String(n));
    const body = await this.get<{ suggestions: Suggestion[] }>("/suggest", params);
    return body.suggestions;
  }

  async search(options: SearchParams): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: options.q, config: options.config });
    if (options.k !== undefined) params.set("k", String(options.k));
    // omitted list: the service computes suggestions itself; provided list:
    // used verbatim, so an empty accepted subset travels as one empty value
    appendAccepted(params, "te", options.te);
    appendAccepted(params, "ae", options.ae);
    return this.get<SearchResponse>("/search", params);
  }
}
