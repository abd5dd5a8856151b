/** Thin fetch client for the repository service; the console never
 * computes anonymization results itself, it only renders these responses. */

import type {
  ArtifactDetail,
  ArtifactEntry,
  DfgJson,
  JobRecord,
  TechniqueDescriptor,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${status} ${code}: ${detail}`);
  }
}

async function toError(response: Response): Promise<ApiError> {
  let code = "Error";
  let detail = response.statusText;
  try {
    const body = (await response.json()) as { error?: string; detail?: string };
    if (body.error) code = body.error;
    if (body.detail) detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, detail);
}

export class Api {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) throw await toError(response);
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  techniques(): Promise<TechniqueDescriptor[]> {
    return this.request("/api/techniques");
  }

  list(): Promise<ArtifactEntry[]> {
    return this.request("/api/logs");
  }

  detail(id: string): Promise<ArtifactDetail> {
    return this.request(`/api/logs/${id}`);
  }

  dfg(id: string): Promise<DfgJson> {
    return this.request(`/api/logs/${id}/dfg`);
  }

  upload(data: Blob, filename: string): Promise<ArtifactEntry> {
    const form = new FormData();
    form.append("file", data, filename);
    return this.request("/api/logs", { method: "POST", body: form });
  }

  apply(id: string, technique: string, parameters: Record<string, unknown>): Promise<JobRecord> {
    return this.request(`/api/logs/${id}/apply`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ technique, parameters }),
    });
  }

  async download(id: string): Promise<{ data: ArrayBuffer; filename: string }> {
    const response = await fetch(`${this.baseUrl}/api/logs/${id}/download`);
    if (!response.ok) throw await toError(response);
    const disposition = response.headers.get("content-disposition") ?? "";
    const match = /filename="([^"]+)"/.exec(disposition);
    return { data: await response.arrayBuffer(), filename: match ? match[1] : id };
  }

  async remove(id: string): Promise<void> {
    const response = await fetch(`${this.baseUrl}/api/logs/${id}`, { method: "DELETE" });
    if (!response.ok) throw await toError(response);
  }
}
