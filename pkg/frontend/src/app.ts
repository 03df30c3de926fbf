/** Application shell: controls, URL sync, latest-wins fetching, views.
 *
 * All filtering and ranking happens server-side; this module only composes
 * query strings, keeps the URL in sync with the view state, and renders
 * whatever the API returned. A failed fetch shows a banner and marks the
 * previously rendered data as stale instead of clearing it.
 */

import {
  ApiError,
  EMPTY_FILTER,
  fetchBenchmarks,
  fetchTable,
  type BenchmarkInfo,
  type Filter,
  type TableData,
} from "./api.js";
import { renderScatter } from "./scatter.js";
import { leaderboardColumns, perTaskColumns, renderDataTable } from "./table.js";
import {
  DEFAULT_STATE,
  parseViewState,
  serializeViewState,
  TABS,
  type SortSpec,
  type Tab,
  type ViewState,
} from "./state.js";

export const TASK_TYPE_CHOICES = ["classification", "clustering", "retrieval", "sts"] as const;

const TAB_LABELS: Record<Tab, string> = {
  table: "Leaderboard",
  per_task_type: "Per task",
  performance_vs_size: "Score vs size",
  performance_vs_zero_shot: "Score vs zero-shot",
};

function splitInput(value: string): string[] | null {
  const parts = value
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part !== "");
  return parts.length > 0 ? parts : null;
}

export class App {
  state: ViewState = DEFAULT_STATE;
  data: TableData | null = null;
  benchmarks: BenchmarkInfo[] = [];

  private controller: AbortController | null = null;
  private epoch = 0;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    readonly root: HTMLElement,
    readonly apiBase: string,
  ) {}

  /** Resolves once the most recently requested refresh has settled. */
  idle(): Promise<void> {
    return this.pending;
  }

  async start(): Promise<void> {
    this.buildSkeleton();
    this.state = parseViewState(window.location.search);
    try {
      this.benchmarks = await fetchBenchmarks(this.apiBase);
    } catch (error) {
      this.showError(error);
      return;
    }
    if (this.state.benchmark === null && this.benchmarks.length > 0) {
      this.state = { ...this.state, benchmark: this.benchmarks[0]!.name };
    }
    this.fillBenchmarkPicker();
    window.addEventListener("popstate", () => {
      this.state = parseViewState(window.location.search);
      this.syncControls();
      this.pending = this.refresh();
    });
    this.setState(this.state);
    await this.idle();
  }

  /** Central state transition: sync URL + controls, then refetch. */
  setState(next: ViewState): void {
    this.state = next;
    const query = serializeViewState(next);
    window.history.replaceState(null, "", query === "" ? window.location.pathname : `?${query}`);
    this.syncControls();
    this.pending = this.refresh();
  }

  private patchFilter(patch: Partial<Filter>): void {
    this.setState({ ...this.state, filter: { ...this.state.filter, ...patch } });
  }

  private async refresh(): Promise<void> {
    if (this.state.benchmark === null) {
      this.showError(new Error("no benchmark selected"));
      return;
    }
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const epoch = ++this.epoch;
    try {
      const data = await fetchTable(this.apiBase, this.state.benchmark, this.state.filter, controller.signal);
      if (epoch !== this.epoch) return; // superseded: latest wins
      this.data = data;
      this.clearError();
      this.renderView();
    } catch (error) {
      if (controller.signal.aborted || epoch !== this.epoch) return;
      this.showError(error);
    }
  }

  private element<T extends HTMLElement>(role: string): T {
    const found = this.root.querySelector(`[data-role="${role}"]`);
    if (found === null) throw new Error(`missing element ${role}`);
    return found as T;
  }

  private buildSkeleton(): void {
    const doc = this.root.ownerDocument;
    this.root.innerHTML = `
      <header><h1>embedding leaderboard</h1></header>
      <section class="controls">
        <label>benchmark <select data-role="benchmark"></select></label>
        <fieldset data-role="task-types"><legend>task types</legend></fieldset>
        <label>languages <input data-role="languages" placeholder="eng-Latn,fra-Latn"></label>
        <label>domains <input data-role="domains" placeholder="news,web"></label>
        <label>min zero-shot <input data-role="min-zero-shot" type="number" min="0" max="1" step="0.05"></label>
        <label><input data-role="include-unknown" type="checkbox" checked> include unknown zero-shot</label>
      </section>
      <nav data-role="tabs"></nav>
      <div data-role="error" class="error" hidden></div>
      <div data-role="view"></div>
    `;

    const taskTypes = this.element<HTMLFieldSetElement>("task-types");
    for (const taskType of TASK_TYPE_CHOICES) {
      const label = doc.createElement("label");
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.value = taskType;
      box.dataset.taskType = taskType;
      box.addEventListener("change", () => {
        const checked = [...taskTypes.querySelectorAll<HTMLInputElement>("input:checked")].map((el) => el.value);
        this.patchFilter({ taskTypes: checked.length > 0 ? checked : null });
      });
      label.appendChild(box);
      label.appendChild(doc.createTextNode(taskType));
      taskTypes.appendChild(label);
    }

    const tabs = this.element<HTMLElement>("tabs");
    for (const tab of TABS) {
      const button = doc.createElement("button");
      button.textContent = TAB_LABELS[tab];
      button.dataset.tab = tab;
      button.addEventListener("click", () => this.setState({ ...this.state, tab }));
      tabs.appendChild(button);
    }

    this.element<HTMLSelectElement>("benchmark").addEventListener("change", (event) => {
      const select = event.target as HTMLSelectElement;
      this.setState({ ...this.state, benchmark: select.value });
    });
    this.element<HTMLInputElement>("languages").addEventListener("change", (event) => {
      this.patchFilter({ languages: splitInput((event.target as HTMLInputElement).value) });
    });
    this.element<HTMLInputElement>("domains").addEventListener("change", (event) => {
      this.patchFilter({ domains: splitInput((event.target as HTMLInputElement).value) });
    });
    this.element<HTMLInputElement>("min-zero-shot").addEventListener("change", (event) => {
      const raw = (event.target as HTMLInputElement).value;
      const parsed = raw === "" ? null : Number(raw);
      this.patchFilter({ minZeroShot: parsed !== null && Number.isFinite(parsed) ? parsed : null });
    });
    this.element<HTMLInputElement>("include-unknown").addEventListener("change", (event) => {
      this.patchFilter({ includeUnknown: (event.target as HTMLInputElement).checked });
    });
  }

  private fillBenchmarkPicker(): void {
    const select = this.element<HTMLSelectElement>("benchmark");
    const doc = this.root.ownerDocument;
    select.replaceChildren();
    for (const benchmark of this.benchmarks) {
      const option = doc.createElement("option");
      option.value = benchmark.name;
      option.textContent = `${benchmark.display_name} (${benchmark.version}, ${benchmark.task_count} tasks)`;
      select.appendChild(option);
    }
  }

  private syncControls(): void {
    const filter = this.state.filter;
    const select = this.element<HTMLSelectElement>("benchmark");
    if (this.state.benchmark !== null) select.value = this.state.benchmark;
    for (const box of this.element<HTMLFieldSetElement>("task-types").querySelectorAll<HTMLInputElement>("input")) {
      box.checked = filter.taskTypes !== null && filter.taskTypes.includes(box.value);
    }
    this.element<HTMLInputElement>("languages").value = filter.languages?.join(",") ?? "";
    this.element<HTMLInputElement>("domains").value = filter.domains?.join(",") ?? "";
    this.element<HTMLInputElement>("min-zero-shot").value = filter.minZeroShot === null ? "" : String(filter.minZeroShot);
    this.element<HTMLInputElement>("include-unknown").checked = filter.includeUnknown;
    for (const button of this.element<HTMLElement>("tabs").querySelectorAll<HTMLButtonElement>("button")) {
      button.classList.toggle("active", button.dataset.tab === this.state.tab);
    }
  }

  private toggleSort(columnId: string): void {
    const current = this.state.sort;
    let next: SortSpec | null;
    if (current === null || current.column !== columnId) {
      next = { column: columnId, descending: true };
    } else if (current.descending) {
      next = { column: columnId, descending: false };
    } else {
      next = null; // third click restores API order
    }
    this.setState({ ...this.state, sort: next });
  }

  private renderView(): void {
    const view = this.element<HTMLElement>("view");
    view.classList.remove("stale");
    if (this.data === null) return;
    const onSort = (columnId: string) => this.toggleSort(columnId);
    switch (this.state.tab) {
      case "table":
        renderDataTable(view, this.data, leaderboardColumns(this.data), this.state.sort, onSort);
        break;
      case "per_task_type":
        renderDataTable(view, this.data, perTaskColumns(this.data), this.state.sort, onSort);
        break;
      case "performance_vs_size":
        renderScatter(view, this.data, "size");
        break;
      case "performance_vs_zero_shot":
        renderScatter(view, this.data, "zero_shot");
        break;
    }
  }

  private showError(error: unknown): void {
    const banner = this.element<HTMLElement>("error");
    banner.hidden = false;
    banner.textContent =
      error instanceof ApiError
        ? `request failed (${error.status}): ${error.message}`
        : `request failed: ${error instanceof Error ? error.message : String(error)}`;
    this.element<HTMLElement>("view").classList.add("stale"); // keep old data, marked
  }

  private clearError(): void {
    this.element<HTMLElement>("error").hidden = true;
  }
}

export function boot(): void {
  const root = document.getElementById("app");
  if (root === null) return;
  const apiBase = (window as { EMBENCH_API?: string }).EMBENCH_API ?? "http://127.0.0.1:8076";
  const app = new App(root, apiBase);
  void app.start();
}
