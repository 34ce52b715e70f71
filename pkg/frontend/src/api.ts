/**
 * Client for the retrieval service. At most one query is in flight; a new
 * submission cancels and replaces the previous one. Error bodies are kept
 * verbatim so the console can surface exactly what the service said.
 */
import type { CorpusStats, QueryRequestBody, QueryResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: string,
  ) {
    super(`HTTP ${status}: ${body}`);
  }
}

export class ApiClient {
  private controller: AbortController | null = null;

  constructor(readonly baseUrl: string) {}

  /** POST /query, cancelling any query already in flight. */
  async query(request: QueryRequestBody): Promise<QueryResponse> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const response = await fetch(`${this.baseUrl}/query`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
      signal: controller.signal,
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as QueryResponse;
  }

  async stats(): Promise<CorpusStats> {
    const response = await fetch(`${this.baseUrl}/stats`);
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as CorpusStats;
  }
}

export function isAbort(error: unknown): boolean {
  return error instanceof DOMException && error.name === "AbortError";
}
