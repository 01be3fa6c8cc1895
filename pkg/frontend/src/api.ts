/** Thin typed client for the search service's JSON interface. */

export interface ResultRow {
  id: string;
  score: number;
  text: string;
  metadata: Record<string, string>;
  snippet: string;
}

export interface SearchResponse {
  query: string;
  total_results: number;
  page: number;
  per_page: number;
  rows: ResultRow[];
}

export interface DocumentResponse {
  id: string;
  text: string;
  metadata: Record<string, string>;
}

/** Error carrying the service's detail string when one was returned. */
export class ServiceError extends Error {
  constructor(
    message: string,
    readonly status?: number,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let detail = `HTTP ${resp.status}`;
  try {
    const body = await resp.json();
    if (typeof body?.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ServiceError(detail, resp.status);
}

export class SearchClient {
  constructor(readonly baseUrl: string) {}

  async search(
    q: string,
    page: number,
    perPage: number,
    k = 100,
    signal?: AbortSignal,
  ): Promise<SearchResponse> {
    const params = new URLSearchParams({
      q,
      k: String(k),
      page: String(page),
      per_page: String(perPage),
    });
    let resp: Response;
    try {
      resp = await fetch(`${this.baseUrl}/search?${params}`, { signal });
    } catch (err) {
      if ((err as Error)?.name === "AbortError") throw err;
      throw new ServiceError(`search service unreachable: ${err}`);
    }
    await raiseForStatus(resp);
    return (await resp.json()) as SearchResponse;
  }

  async document(id: string, signal?: AbortSignal): Promise<DocumentResponse> {
    let resp: Response;
    try {
      resp = await fetch(
        `${this.baseUrl}/document/${encodeURIComponent(id)}`,
        { signal },
      );
    } catch (err) {
      if ((err as Error)?.name === "AbortError") throw err;
      throw new ServiceError(`search service unreachable: ${err}`);
    }
    await raiseForStatus(resp);
    return (await resp.json()) as DocumentResponse;
  }
}
