/** Queue state machine behind the review UI.
 *
 * All durable state lives server-side; this controller only tracks the
 * visible page, the task being labeled, and the staged form. Conflicts
 * and transport errors surface as non-destructive notices, never as
 * thrown exceptions into the view layer.
 */

import { ApiError, ReviewApi } from "./api.js";
import type { Meta, Stats, TaskFilters, TaskPage, TaskView } from "./types.js";

export interface StagedLabel {
  identification: "yes" | "no" | null;
  disease: string | null;
}

export interface ControllerState {
  phase: "loading" | "ready" | "error";
  errorMessage: string | null;
  meta: Meta | null;
  stats: Stats | null;
  page: TaskPage | null;
  pageNumber: number;
  filters: { backend?: string; context?: number };
  current: TaskView | null;
  staged: StagedLabel;
  notice: string | null;
}

export class ReviewController {
  private state: ControllerState = {
    phase: "loading",
    errorMessage: null,
    meta: null,
    stats: null,
    page: null,
    pageNumber: 1,
    filters: {},
    current: null,
    staged: { identification: null, disease: null },
    notice: null,
  };

  private listeners: ((state: ControllerState) => void)[] = [];

  constructor(
    private readonly api: ReviewApi,
    readonly annotatorId: string,
    readonly pageSize: number = 10,
  ) {}

  getState(): ControllerState {
    return this.state;
  }

  subscribe(listener: (state: ControllerState) => void): void {
    this.listeners.push(listener);
  }

  private update(patch: Partial<ControllerState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  labelSpace(): string[] {
    return this.state.meta?.label_space ?? [];
  }

  async init(): Promise<void> {
    this.update({ phase: "loading", errorMessage: null });
    try {
      const meta = await this.api.getMeta();
      this.update({ meta });
      await this.refresh();
    } catch (error) {
      this.update({ phase: "error", errorMessage: describe(error) });
    }
  }

  /** Reload stats and the current page; selects the first pending task. */
  async refresh(): Promise<void> {
    try {
      const [stats, page] = await Promise.all([
        this.api.getStats(),
        this.api.listTasks({
          ...this.state.filters,
          page: this.state.pageNumber,
          pageSize: this.pageSize,
        } as TaskFilters),
      ]);
      const current = this.pickCurrent(page);
      this.update({ phase: "ready", errorMessage: null, stats, page, current });
    } catch (error) {
      this.update({ phase: "error", errorMessage: describe(error) });
    }
  }

  private pickCurrent(page: TaskPage): TaskView | null {
    const currentId = this.state.current?.task_id;
    const stillThere = page.tasks.find((t) => t.task_id === currentId);
    return stillThere ?? page.tasks.find((t) => t.status === "pending") ?? null;
  }

  async setFilters(filters: { backend?: string; context?: number }): Promise<void> {
    this.update({ filters, pageNumber: 1, current: null });
    await this.refresh();
  }

  async goToPage(pageNumber: number): Promise<void> {
    this.update({ pageNumber: Math.max(1, pageNumber), current: null });
    await this.refresh();
  }

  selectTask(task: TaskView): void {
    this.update({
      current: task,
      staged: { identification: null, disease: null },
      notice: null,
    });
  }

  stageIdentification(value: "yes" | "no"): void {
    this.update({ staged: { ...this.state.staged, identification: value } });
  }

  stageDisease(disease: string): void {
    if (!this.labelSpace().includes(disease)) return; // closed picker
    this.update({ staged: { ...this.state.staged, disease } });
  }

  stageDiseaseByIndex(index: number): void {
    const space = this.labelSpace();
    const disease = space[index];
    if (disease !== undefined) this.stageDisease(disease);
  }

  canSubmit(): boolean {
    return (
      this.state.current !== null &&
      this.state.current.status === "pending" &&
      this.state.staged.identification !== null &&
      this.state.staged.disease !== null
    );
  }

  /** Submit the staged label; advances to the next pending task on success. */
  async submitStaged(): Promise<"ok" | "conflict" | "incomplete" | "error"> {
    const { current, staged } = this.state;
    if (!current || staged.identification === null || staged.disease === null) {
      this.update({ notice: "choose both an identification and a disease" });
      return "incomplete";
    }
    try {
      await this.api.submitLabel(
        current.task_id,
        staged.identification,
        staged.disease,
        this.annotatorId,
      );
      this.update({
        notice: `labeled ${current.task_id.slice(0, 8)}`,
        current: null,
        staged: { identification: null, disease: null },
      });
      await this.refresh();
      return "ok";
    } catch (error) {
      if (error instanceof ApiError && error.isConflict) {
        this.update({ notice: "already labeled by another annotator" });
        await this.refresh();
        const reloaded = await this.safeGetTask(current.task_id);
        if (reloaded) this.update({ current: reloaded });
        return "conflict";
      }
      this.update({ notice: `submit failed: ${describe(error)}` });
      return "error";
    }
  }

  private async safeGetTask(taskId: string): Promise<TaskView | null> {
    try {
      return await this.api.getTask(taskId);
    } catch {
      return null;
    }
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) return error.detail;
  if (error instanceof Error) return error.message;
  return String(error);
}
