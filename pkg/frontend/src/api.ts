/** Thin typed client for the four API endpoints. No caching, no retries. */

import type { ImageInfo, QueryRejection, QueryResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** A 422: the server understood the request but rejected the question. */
export class QueryRejectedError extends Error {
  constructor(readonly rejection: QueryRejection) {
    super(rejection.message);
    this.name = "QueryRejectedError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly fetchFn: FetchLike;

  constructor(
    private readonly base: string = "",
    fetchFn?: FetchLike,
  ) {
    this.fetchFn = fetchFn ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.base + path);
    if (!resp.ok) throw new ApiError(resp.status, `GET ${path} -> ${resp.status}`);
    return (await resp.json()) as T;
  }

  listImages(): Promise<ImageInfo[]> {
    return this.getJson<ImageInfo[]>("/api/images");
  }

  vocabulary(): Promise<string[]> {
    return this.getJson<string[]>("/api/vocabulary");
  }

  /** URL for the raw image bytes; handed straight to an <img> tag. */
  imageUrl(id: string): string {
    return `${this.base}/api/images/${encodeURIComponent(id)}`;
  }

  async query(imageId: string, question: string): Promise<QueryResponse> {
    const resp = await this.fetchFn(`${this.base}/api/query`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ image_id: imageId, question }),
    });
    if (resp.status === 422) {
      throw new QueryRejectedError((await resp.json()) as QueryRejection);
    }
    if (!resp.ok) {
      let detail = "";
      try {
        const body = (await resp.json()) as { detail?: string };
        detail = body.detail ?? "";
      } catch {
        // non-JSON error body, status alone will have to do
      }
      throw new ApiError(resp.status, detail || `POST /api/query -> ${resp.status}`);
    }
    return (await resp.json()) as QueryResponse;
  }
}
