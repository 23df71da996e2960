/** DOM wiring for the review queue (keyboard-first).
 *
 * Hotkeys: y / n stage identification, 1..9 stage a disease from the
 * picker, Enter submits. Model output is always rendered through
 * textContent, never as HTML.
 */

import { ReviewApi } from "./api.js";
import { ReviewController, type ControllerState } from "./controller.js";
import { findMentionRanges, segmentText } from "./highlight.js";
import { pageCount, progressPercent } from "./paging.js";
import type { TaskView } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export function startApp(): void {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get("api") ?? "http://127.0.0.1:8400";
  const annotator = params.get("annotator") ?? "anonymous";
  const guidelines =
    params.get("guidelines") ??
    "Label the identification as yes only when the patient currently has " +
      "the disease; family history or a resolved past disease is no. Pick " +
      "the disease actually mentioned in the excerpt, or Other.";

  const api = new ReviewApi(apiBase);
  const controller = new ReviewController(api, annotator, 10);

  byId("guidelines-text").textContent = guidelines;

  const backendFilter = byId("filter-backend") as HTMLSelectElement;
  const contextFilter = byId("filter-context") as HTMLSelectElement;
  backendFilter.addEventListener("change", () => applyFilters());
  contextFilter.addEventListener("change", () => applyFilters());

  function applyFilters(): void {
    void controller.setFilters({
      backend: backendFilter.value || undefined,
      context: contextFilter.value ? Number(contextFilter.value) : undefined,
    });
  }

  byId("prev-page").addEventListener("click", () => {
    void controller.goToPage(controller.getState().pageNumber - 1);
  });
  byId("next-page").addEventListener("click", () => {
    void controller.goToPage(controller.getState().pageNumber + 1);
  });
  byId("retry").addEventListener("click", () => void controller.init());

  document.addEventListener("keydown", (event) => {
    if (event.target instanceof HTMLInputElement) return;
    if (event.key === "y") controller.stageIdentification("yes");
    else if (event.key === "n") controller.stageIdentification("no");
    else if (/^[1-9]$/.test(event.key)) {
      controller.stageDiseaseByIndex(Number(event.key) - 1);
    } else if (event.key === "Enter") void controller.submitStaged();
  });

  controller.subscribe(render);
  void controller.init();

  function render(state: ControllerState): void {
    byId("phase").textContent = state.phase;
    byId("error").textContent = state.errorMessage ?? "";
    byId("retry").style.display = state.phase === "error" ? "inline" : "none";
    byId("notice").textContent = state.notice ?? "";

    if (state.stats) {
      const { pending, labeled } = state.stats.queue;
      const percent = progressPercent(pending, labeled);
      byId("progress-text").textContent =
        `${labeled} labeled / ${pending} pending (${percent}%)`;
      (byId("progress-bar") as HTMLProgressElement).value = percent;
      byId("run-id").textContent = state.stats.run_id;
    }

    if (state.meta) {
      const backends = new Set(
        state.stats?.compliance.map((row) => row.backend_id) ?? [],
      );
      syncOptions(backendFilter, ["", ...backends]);
      const contexts = new Set(
        Object.keys(state.stats?.coverage ?? {})
          .map((key) => key.split("@")[1])
          .filter((value): value is string => value !== undefined),
      );
      syncOptions(contextFilter, ["", ...contexts]);
    }

    renderList(state);
    renderDetail(state);
  }

  function syncOptions(select: HTMLSelectElement, values: string[]): void {
    const existing = Array.from(select.options).map((option) => option.value);
    if (JSON.stringify(existing) === JSON.stringify(values)) return;
    const keep = select.value;
    select.replaceChildren(
      ...values.map((value) => {
        const option = el("option", undefined, value === "" ? "(all)" : value);
        option.value = value;
        return option;
      }),
    );
    select.value = values.includes(keep) ? keep : "";
  }

  function renderList(state: ControllerState): void {
    const list = byId("task-list");
    list.replaceChildren();
    if (!state.page) return;
    byId("page-info").textContent =
      `page ${state.page.page} of ${pageCount(state.page.total, state.page.page_size)}` +
      `, ${state.page.total} task(s)`;
    if (state.page.total === 0) {
      list.append(el("li", "empty", "queue is empty; nothing needs annotation"));
      return;
    }
    for (const task of state.page.tasks) {
      const item = el("li", task.status);
      const button = el(
        "button",
        "task-button",
        `${task.backend_id} · ${task.window.doc_id} · ${task.context_size}w` +
          (task.status === "labeled" ? " ✓" : ""),
      );
      if (state.current?.task_id === task.task_id) button.classList.add("selected");
      button.addEventListener("click", () => controller.selectTask(task));
      item.append(button);
      list.append(item);
    }
  }

  function renderDetail(state: ControllerState): void {
    const detail = byId("detail");
    detail.replaceChildren();
    const task = state.current;
    if (!task) {
      detail.append(el("p", "empty", "select a task from the queue"));
      return;
    }
    detail.append(
      el("h3", undefined, `${task.backend_id} on ${task.window.doc_id} ` +
        `(${task.context_size} words, ${task.window.disease_id})`),
    );

    const windowBlock = el("blockquote", "window-text");
    windowBlock.append(...highlightedWindow(state, task));
    detail.append(el("h4", undefined, "context window"), windowBlock);

    const generation = el("pre", "generation");
    generation.textContent = task.raw_text; // inert: model output is never HTML
    detail.append(el("h4", undefined, "model output (no JSON found)"), generation);

    if (task.status === "labeled" && task.label) {
      detail.append(
        el(
          "p",
          "labeled-note",
          `labeled ${task.label.identification} / ${task.label.disease} ` +
            `by ${task.label.annotator_id}`,
        ),
      );
      return;
    }
    detail.append(renderForm(state));
  }

  function highlightedWindow(state: ControllerState, task: TaskView): Node[] {
    const text = task.window_text ?? "(window text unavailable)";
    const cls = state.meta?.classes.find(
      (c) => c.disease_id === task.window.disease_id,
    );
    const synonyms = cls ? [cls.label, ...cls.synonyms] : [];
    const ranges = findMentionRanges(text, synonyms);
    return segmentText(text, ranges).map((segment) => {
      if (!segment.highlighted) return document.createTextNode(segment.text);
      const mark = el("mark");
      mark.textContent = segment.text;
      return mark;
    });
  }

  function renderForm(state: ControllerState): HTMLElement {
    const form = el("div", "label-form");

    const identRow = el("div", "row");
    identRow.append(el("span", "hint", "identification:"));
    for (const value of ["yes", "no"] as const) {
      const button = el(
        "button",
        "choice",
        `${value} (${value === "yes" ? "y" : "n"})`,
      );
      if (state.staged.identification === value) button.classList.add("staged");
      button.addEventListener("click", () => controller.stageIdentification(value));
      identRow.append(button);
    }
    form.append(identRow);

    const diseaseRow = el("div", "row");
    diseaseRow.append(el("span", "hint", "disease:"));
    controller.labelSpace().forEach((disease, index) => {
      const button = el("button", "choice", `${disease} (${index + 1})`);
      if (state.staged.disease === disease) button.classList.add("staged");
      button.addEventListener("click", () => controller.stageDisease(disease));
      diseaseRow.append(button);
    });
    form.append(diseaseRow);

    const submit = el("button", "submit", "submit (Enter)");
    submit.disabled = !controller.canSubmit();
    submit.addEventListener("click", () => void controller.submitStaged());
    form.append(submit);
    return form;
  }
}

startApp();
