/** View state serialized to and from the URL query string.
 *
 * Invariant: serialize(parse(q)) === q for every canonical query string,
 * and parse(serialize(s)) deep-equals s for every valid state. Canonical
 * form is the fixed parameter order below with defaults omitted.
 */

import { EMPTY_FILTER, encodeValue, type Filter } from "./api.js";

export const TABS = ["table", "per_task_type", "performance_vs_size", "performance_vs_zero_shot"] as const;
export type Tab = (typeof TABS)[number];

export interface SortSpec {
  column: string;
  descending: boolean;
}

export interface ViewState {
  benchmark: string | null;
  filter: Filter;
  tab: Tab;
  sort: SortSpec | null;
}

export const DEFAULT_STATE: ViewState = {
  benchmark: null,
  filter: EMPTY_FILTER,
  tab: "table",
  sort: null,
};

function splitList(value: string | null): string[] | null {
  if (value === null || value === "") return null;
  const parts = value.split(",").filter((part) => part !== "");
  return parts.length > 0 ? parts : null;
}

export function parseViewState(query: string): ViewState {
  const params = new URLSearchParams(query.startsWith("?") ? query.slice(1) : query);
  const minRaw = params.get("min_zero_shot");
  const minParsed = minRaw === null || minRaw === "" ? null : Number(minRaw);
  const tabRaw = params.get("tab");
  const sortRaw = params.get("sort");
  let sort: SortSpec | null = null;
  if (sortRaw !== null && sortRaw !== "") {
    sort = sortRaw.startsWith("-")
      ? { column: sortRaw.slice(1), descending: true }
      : { column: sortRaw, descending: false };
  }
  return {
    benchmark: params.get("benchmark"),
    filter: {
      taskTypes: splitList(params.get("task_types")),
      languages: splitList(params.get("languages")),
      domains: splitList(params.get("domains")),
      minZeroShot: minParsed !== null && Number.isFinite(minParsed) ? minParsed : null,
      includeUnknown: params.get("include_unknown") !== "false",
    },
    tab: (TABS as readonly string[]).includes(tabRaw ?? "") ? (tabRaw as Tab) : "table",
    sort,
  };
}

export function serializeViewState(state: ViewState): string {
  const params: string[] = [];
  if (state.benchmark !== null && state.benchmark !== "") {
    params.push(`benchmark=${encodeValue(state.benchmark)}`);
  }
  const filter = state.filter;
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
  if (state.tab !== "table") {
    params.push(`tab=${state.tab}`);
  }
  if (state.sort !== null) {
    const prefix = state.sort.descending ? "-" : "";
    params.push(`sort=${encodeValue(prefix + state.sort.column)}`);
  }
  return params.join("&");
}
