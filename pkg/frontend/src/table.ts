/** Leaderboard table rendering: verbatim API values, client-side sort.
 *
 * Sorting only reorders rows; rank cells always show the server-computed
 * Borda rank. Missing and unknown values sort last in either direction.
 */

import type { TableData, TableRow } from "./api.js";
import type { SortSpec } from "./state.js";

export interface ColumnSpec {
  id: string;
  label: string;
  value: (row: TableRow) => number | string | null;
}

export function leaderboardColumns(data: TableData): ColumnSpec[] {
  const columns: ColumnSpec[] = [
    { id: "rank", label: "rank", value: (row) => row.borda_rank },
    { id: "model", label: "model", value: (row) => row.model_name },
    { id: "mean", label: "mean", value: (row) => row.mean_score },
  ];
  for (const taskType of data.task_types) {
    columns.push({
      id: `type:${taskType}`,
      label: taskType,
      value: (row) => row.per_task_type[taskType] ?? null,
    });
  }
  columns.push({ id: "zero_shot", label: "zero-shot", value: (row) => row.zero_shot.z });
  columns.push({ id: "parameters", label: "parameters", value: (row) => row.n_parameters });
  return columns;
}

export function perTaskColumns(data: TableData): ColumnSpec[] {
  const columns: ColumnSpec[] = [
    { id: "rank", label: "rank", value: (row) => row.borda_rank },
    { id: "model", label: "model", value: (row) => row.model_name },
  ];
  for (const task of data.task_names) {
    columns.push({
      id: `task:${task}`,
      label: task,
      value: (row) => row.per_task[task] ?? null,
    });
  }
  return columns;
}

export function sortRows(rows: readonly TableRow[], columns: ColumnSpec[], sort: SortSpec | null): TableRow[] {
  const ordered = [...rows];
  if (sort === null) return ordered;
  const column = columns.find((c) => c.id === sort.column);
  if (column === undefined) return ordered;
  const direction = sort.descending ? -1 : 1;
  ordered.sort((a, b) => {
    const va = column.value(a);
    const vb = column.value(b);
    if (va === null && vb === null) return 0;
    if (va === null) return 1; // unknowns last either way
    if (vb === null) return -1;
    if (va < vb) return -direction;
    if (va > vb) return direction;
    return 0;
  });
  return ordered;
}

function cellText(value: number | string | null): string {
  return value === null ? "?" : String(value);
}

export function renderDataTable(
  container: HTMLElement,
  data: TableData,
  columns: ColumnSpec[],
  sort: SortSpec | null,
  onSortToggle: (columnId: string) => void,
): void {
  const doc = container.ownerDocument;
  const table = doc.createElement("table");
  table.dataset.role = "leaderboard";

  const thead = doc.createElement("thead");
  const headRow = doc.createElement("tr");
  for (const column of columns) {
    const th = doc.createElement("th");
    th.textContent = column.label;
    th.dataset.col = column.id;
    if (sort !== null && sort.column === column.id) {
      th.dataset.sorted = sort.descending ? "desc" : "asc";
    }
    th.addEventListener("click", () => onSortToggle(column.id));
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = doc.createElement("tbody");
  for (const row of sortRows(data.rows, columns, sort)) {
    const tr = doc.createElement("tr");
    tr.dataset.model = row.model_name;
    for (const column of columns) {
      const td = doc.createElement("td");
      td.dataset.col = column.id;
      const value = column.value(row);
      td.textContent = cellText(value);
      if (value === null) td.classList.add("unknown");
      tr.appendChild(td);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);

  container.replaceChildren(table);
}
