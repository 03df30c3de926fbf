/** Typed client for the leaderboard HTTP API.
 *
 * The UI performs no score math: these types mirror the JSON payloads
 * one-to-one and every displayed value is passed through verbatim.
 */

export interface ZeroShot {
  n_total: number;
  n_train: number | null;
  z: number | null;
}

export interface TableRow {
  model_name: string;
  mean_score: number;
  per_task_type: Record<string, number>;
  per_task: Record<string, number>;
  borda_points: number;
  borda_rank: number;
  zero_shot: ZeroShot;
  n_parameters: number | null;
  missing_tasks: string[];
}

export interface TableData {
  benchmark_name: string;
  task_names: string[];
  task_types: string[];
  rows: TableRow[];
}

export interface BenchmarkInfo {
  name: string;
  display_name: string;
  version: string;
  task_count: number;
}

export interface Defect {
  path: string;
  code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly defects: Defect[],
  ) {
    super(defects.map((d) => `${d.code}: ${d.message}`).join("; ") || `HTTP ${status}`);
  }
}

export interface Filter {
  taskTypes: string[] | null;
  languages: string[] | null;
  domains: string[] | null;
  minZeroShot: number | null;
  includeUnknown: boolean;
}

export const EMPTY_FILTER: Filter = {
  taskTypes: null,
  languages: null,
  domains: null,
  minZeroShot: null,
  includeUnknown: true,
};

/** Query-string encoding that keeps ',' and ':' readable in shared URLs. */
export function encodeValue(value: string): string {
  return encodeURIComponent(value).replace(/%2C/g, ",").replace(/%3A/g, ":");
}

/** Filter serialized in canonical parameter order; defaults are omitted. */
export function filterParams(filter: Filter): string[] {
  const params: string[] = [];
  if (filter.taskTypes !== null && filter.taskTypes.length > 0) {
    params.push(`task_types=${encodeValue(filter.taskTypes.join(","))}`);
  }
  if (filter.languages !== null && filter.languages.length > 0) {
    params.push(`languages=${encodeValue(filter.languages.join(","))}`);
  }
  if (filter.domains !== null && filter.domains.length > 0) {
    params.push(`domains=${encodeValue(filter.domains.join(","))}`);
  }
  if (filter.minZeroShot !== null) {
    params.push(`min_zero_shot=${encodeValue(String(filter.minZeroShot))}`);
  }
  if (!filter.includeUnknown) {
    params.push("include_unknown=false");
  }
  return params;
}

export function tableUrl(apiBase: string, benchmark: string, filter: Filter): string {
  const params = filterParams(filter);
  const query = params.length > 0 ? `?${params.join("&")}` : "";
  return `${apiBase}/api/benchmarks/${encodeURIComponent(benchmark)}/table${query}`;
}

async function fetchJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal });
  const body = await response.json();
  if (!response.ok) {
    const defects = Array.isArray(body?.defects) ? (body.defects as Defect[]) : [];
    throw new ApiError(response.status, defects);
  }
  return body as T;
}

export function fetchBenchmarks(apiBase: string, signal?: AbortSignal): Promise<BenchmarkInfo[]> {
  return fetchJson(`${apiBase}/api/benchmarks`, signal);
}

export function fetchTable(
  apiBase: string,
  benchmark: string,
  filter: Filter,
  signal?: AbortSignal,
): Promise<TableData> {
  return fetchJson(tableUrl(apiBase, benchmark, filter), signal);
}

export function fetchModel(apiBase: string, org: string, name: string, signal?: AbortSignal): Promise<unknown> {
  return fetchJson(`${apiBase}/api/models/${encodeURIComponent(org)}__${encodeURIComponent(name)}`, signal);
}

export function fetchCoverage(apiBase: string, signal?: AbortSignal): Promise<unknown> {
  return fetchJson(`${apiBase}/api/coverage`, signal);
}
