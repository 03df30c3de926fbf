// @vitest-environment jsdom
/** End-to-end fidelity: a real API server on a real fixture tree, the real
 * app in a DOM. Every rendered rank/score must equal the corresponding API
 * field, and the URL must round-trip the view state.
 */
import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { fetchTable, tableUrl, EMPTY_FILTER, type Filter, type TableData } from "../src/api.js";
import { App } from "../src/app.js";
import { parseViewState, serializeViewState } from "../src/state.js";

const run = promisify(execFile);
// vitest runs with cwd = frontend/, one level below the repository root
const SCRIPT = resolve(process.cwd(), "..", "scripts", "build_demo_tree.py");
const BENCHMARK = "mock-suite";

let tree: string;
let server: ChildProcess;
let base: string;
let app: App;

function cleanEnv(): NodeJS.ProcessEnv {
  const env = { ...process.env };
  delete env["EMBENCH_REGISTRY"];
  delete env["EMBENCH_RESULTS"];
  return env;
}

async function startServer(): Promise<void> {
  server = spawn(
    "python3",
    ["-u", "-m", "embench", "serve", "--registry", join(tree, "registry"), "--results", join(tree, "results"), "--port", "0"],
    { env: cleanEnv(), stdio: ["ignore", "pipe", "pipe"] },
  );
  base = await new Promise<string>((resolve, reject) => {
    let seen = "";
    const timer = setTimeout(() => reject(new Error(`server never announced a port: ${seen}`)), 30_000);
    server.stdout!.on("data", (chunk: Buffer) => {
      seen += chunk.toString();
      const match = seen.match(/serving registry API on (http:\/\/[\d.]+:\d+)/);
      if (match !== null) {
        clearTimeout(timer);
        resolve(match[1]!);
      }
    });
    server.on("exit", (code) => reject(new Error(`server exited early (${code}): ${seen}`)));
  });
}

/** Every rendered cell must equal the API field it claims to show. */
function expectTableMatches(root: HTMLElement, payload: TableData): void {
  const rows = [...root.querySelectorAll<HTMLTableRowElement>("tbody tr")];
  expect(rows.length).toBe(payload.rows.length);
  for (const apiRow of payload.rows) {
    const tr = root.querySelector(`tr[data-model="${apiRow.model_name}"]`);
    expect(tr, apiRow.model_name).not.toBeNull();
    const byCol: Record<string, string> = {};
    for (const td of tr!.querySelectorAll<HTMLTableCellElement>("td")) {
      byCol[td.dataset.col!] = td.textContent ?? "";
    }
    expect(byCol["rank"]).toBe(String(apiRow.borda_rank));
    expect(byCol["model"]).toBe(apiRow.model_name);
    expect(byCol["mean"]).toBe(String(apiRow.mean_score));
    for (const taskType of payload.task_types) {
      const value = apiRow.per_task_type[taskType];
      expect(byCol[`type:${taskType}`], `${apiRow.model_name}/${taskType}`).toBe(
        value === undefined ? "?" : String(value),
      );
    }
    expect(byCol["zero_shot"]).toBe(apiRow.zero_shot.z === null ? "?" : String(apiRow.zero_shot.z));
    expect(byCol["parameters"]).toBe(apiRow.n_parameters === null ? "?" : String(apiRow.n_parameters));
  }
}

function roundTrips(search: string): void {
  expect(serializeViewState(parseViewState(search))).toBe(search.replace(/^\?/, ""));
}

beforeAll(async () => {
  tree = mkdtempSync(join(tmpdir(), "embench-ui-"));
  await run("python3", [SCRIPT, "--out", tree], { env: cleanEnv() });
  await startServer();

  window.history.replaceState(null, "", `?benchmark=${BENCHMARK}`);
  app = new App(document.getElementById("app") ?? document.body.appendChild(document.createElement("div")), base);
  app.root.id = "app";
  await app.start();
});

afterAll(() => {
  server?.kill();
  rmSync(tree, { recursive: true, force: true });
});

describe("leaderboard UI against a live API", () => {
  it("renders the unfiltered table bit-equal to the API response", async () => {
    const payload = await fetchTable(base, BENCHMARK, EMPTY_FILTER);
    expect(payload.rows.length).toBeGreaterThanOrEqual(2);
    expectTableMatches(app.root, payload);
    roundTrips(window.location.search);
  });

  it("applying a task-type filter in the UI refetches and matches the API", async () => {
    const box = app.root.querySelector<HTMLInputElement>('input[data-task-type="retrieval"]');
    expect(box).not.toBeNull();
    box!.checked = true;
    box!.dispatchEvent(new Event("change", { bubbles: true }));
    await app.idle();

    expect(window.location.search).toBe(`?benchmark=${BENCHMARK}&task_types=retrieval`);
    roundTrips(window.location.search);

    const filter: Filter = { ...EMPTY_FILTER, taskTypes: ["retrieval"] };
    const payload = await fetchTable(base, BENCHMARK, filter);
    expect(payload.task_types).toEqual(["retrieval"]);
    expectTableMatches(app.root, payload);

    // ranks under the filter come from the server, not from the old table
    const direct = await fetch(tableUrl(base, BENCHMARK, filter));
    expect(direct.status).toBe(200);
  });

  it("client-side sorting keeps server ranks verbatim", async () => {
    const header = app.root.querySelector<HTMLElement>('th[data-col="mean"]');
    header!.click();
    await app.idle();
    expect(app.state.sort).toEqual({ column: "mean", descending: true });
    expect(window.location.search).toContain("sort=-mean");
    roundTrips(window.location.search);

    const payload = await fetchTable(base, BENCHMARK, { ...EMPTY_FILTER, taskTypes: ["retrieval"] });
    expectTableMatches(app.root, payload); // same cells, any row order
    app.setState({ ...app.state, sort: null });
    await app.idle();
  });

  it("scatter tab plots known x-values and lists unknown ones", async () => {
    app.root.querySelector<HTMLElement>('button[data-tab="performance_vs_zero_shot"]')!.click();
    await app.idle();
    roundTrips(window.location.search);

    const payload = await fetchTable(base, BENCHMARK, { ...EMPTY_FILTER, taskTypes: ["retrieval"] });
    const known = payload.rows.filter((r) => r.zero_shot.z !== null);
    const unknown = payload.rows.filter((r) => r.zero_shot.z === null);
    expect(app.root.querySelectorAll("circle").length).toBe(known.length);
    const listed = [...app.root.querySelectorAll('ul[data-role="unplottable"] li')].map(
      (li) => (li as HTMLElement).dataset.model,
    );
    expect(listed.sort()).toEqual(unknown.map((r) => r.model_name).sort());

    app.root.querySelector<HTMLElement>('button[data-tab="table"]')!.click();
    await app.idle();
  });

  it("a failing fetch shows a banner and marks the old table stale", async () => {
    const before = app.root.querySelectorAll("tbody tr").length;
    expect(before).toBeGreaterThan(0);

    app.setState({ ...app.state, benchmark: "no-such-benchmark" });
    await app.idle();
    const banner = app.root.querySelector<HTMLElement>('[data-role="error"]');
    expect(banner!.hidden).toBe(false);
    expect(banner!.textContent).toContain("unknown_benchmark");
    const view = app.root.querySelector<HTMLElement>('[data-role="view"]');
    expect(view!.classList.contains("stale")).toBe(true);
    expect(app.root.querySelectorAll("tbody tr").length).toBe(before); // old data kept

    app.setState({ ...app.state, benchmark: BENCHMARK });
    await app.idle();
    expect(banner!.hidden).toBe(true);
    expect(view!.classList.contains("stale")).toBe(false);
  });

  it("filters that eliminate every row surface the API defect", async () => {
    // over the full suite no demo model reaches z=1.0 and the undisclosed
    // one is excluded, so the table empties; a task-type filter would shrink
    // the task set and lift the disclosed model back to z=1.0
    app.setState({
      ...app.state,
      filter: { ...app.state.filter, taskTypes: null, minZeroShot: 1, includeUnknown: false },
    });
    await app.idle();
    const banner = app.root.querySelector<HTMLElement>('[data-role="error"]');
    expect(banner!.hidden).toBe(false);
    expect(banner!.textContent).toContain("empty_after_filter");

    app.setState({ ...app.state, filter: { ...app.state.filter, minZeroShot: null, includeUnknown: true } });
    await app.idle();
    expect(banner!.hidden).toBe(true);
  });
});
