/** Thin typed client over the store HTTP API.
 *
 * Every non-2xx response is surfaced as ApiRequestError carrying the
 * server's error code; network failures become code "unavailable" so the
 * UI can offer a retry.
 */

import type { ApiCluster, ApiErrorBody, TaxonomyPayload, VideoDetail } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: ApiErrorBody["code"],
    message: string,
  ) {
    super(message);
    this.name = "ApiRequestError";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async health(): Promise<{ status: string }> {
    return this.request("GET", "/api/health");
  }

  async taxonomy(): Promise<TaxonomyPayload> {
    return this.request("GET", "/api/taxonomy");
  }

  async clusters(status?: string): Promise<ApiCluster[]> {
    const query = status ? `?status=${encodeURIComponent(status)}` : "";
    const payload = await this.request<{ clusters: ApiCluster[] }>(
      "GET",
      `/api/clusters${query}`,
    );
    return payload.clusters;
  }

  async cluster(clusterId: string): Promise<ApiCluster> {
    return this.request("GET", `/api/clusters/${encodeURIComponent(clusterId)}`);
  }

  async videoDetail(videoId: string): Promise<VideoDetail> {
    return this.request("GET", `/api/videos/${encodeURIComponent(videoId)}`);
  }

  async merge(sourceIds: string[], targetId: string, actor: string): Promise<ApiCluster> {
    return this.request("POST", "/api/clusters/merge", {
      source_ids: sourceIds,
      target_id: targetId,
      actor,
    });
  }

  async rename(clusterId: string, name: string, actor: string): Promise<ApiCluster> {
    return this.request(
      "POST",
      `/api/clusters/${encodeURIComponent(clusterId)}/rename`,
      { name, actor },
    );
  }

  async approve(clusterId: string, actor: string): Promise<ApiCluster> {
    return this.request(
      "POST",
      `/api/clusters/${encodeURIComponent(clusterId)}/approve`,
      { actor },
    );
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (error) {
      throw new ApiRequestError(0, "unavailable", `cannot reach the API: ${error}`);
    }
    if (response.ok) {
      return (await response.json()) as T;
    }
    let parsed: Partial<ApiErrorBody> = {};
    try {
      parsed = (await response.json()) as ApiErrorBody;
    } catch {
      // fall through with a generic body
    }
    throw new ApiRequestError(
      response.status,
      parsed.code ?? "unavailable",
      parsed.message ?? `request failed with status ${response.status}`,
    );
  }
}
