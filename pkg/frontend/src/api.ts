/** Typed client for the review API. Fetch is injectable for tests. */

import type { Meta, Stats, TaskFilters, TaskPage, TaskView } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export class ReviewApi {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  listTasks(filters: TaskFilters = {}): Promise<TaskPage> {
    const params = new URLSearchParams();
    if (filters.backend) params.set("backend", filters.backend);
    if (filters.context !== undefined) params.set("context", String(filters.context));
    params.set("page", String(filters.page ?? 1));
    params.set("page_size", String(filters.pageSize ?? 20));
    return this.get<TaskPage>(`/tasks?${params.toString()}`);
  }

  getTask(taskId: string): Promise<TaskView> {
    return this.get<TaskView>(`/tasks/${encodeURIComponent(taskId)}`);
  }

  getStats(): Promise<Stats> {
    return this.get<Stats>("/stats");
  }

  getMeta(): Promise<Meta> {
    return this.get<Meta>("/meta");
  }

  async submitLabel(
    taskId: string,
    identification: "yes" | "no",
    disease: string,
    annotatorId: string,
  ): Promise<TaskView> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/tasks/${encodeURIComponent(taskId)}/label`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          identification,
          disease,
          annotator_id: annotatorId,
        }),
      },
    );
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as TaskView;
  }
}
