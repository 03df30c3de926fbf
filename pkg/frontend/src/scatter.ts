/** SVG scatter of mean score against model size or zero-shot score.
 *
 * Models lacking the x-value are listed next to the chart, never dropped.
 * Axis end labels and hover titles show API values verbatim; positions are
 * the only derived quantities.
 */

import type { TableData, TableRow } from "./api.js";

const WIDTH = 640;
const HEIGHT = 400;
const PAD = 60;
const SVG_NS = "http://www.w3.org/2000/svg";

export type ScatterAxis = "size" | "zero_shot";

interface Point {
  row: TableRow;
  xRaw: number;
  xPos: number; // size axis is log-scaled
}

function xValue(row: TableRow, axis: ScatterAxis): number | null {
  if (axis === "size") {
    return row.n_parameters !== null && row.n_parameters > 0 ? row.n_parameters : null;
  }
  return row.zero_shot.z;
}

function axisLabel(axis: ScatterAxis): string {
  return axis === "size" ? "n_parameters" : "zero_shot";
}

function scale(value: number, lo: number, hi: number, outLo: number, outHi: number): number {
  if (hi === lo) return (outLo + outHi) / 2;
  return outLo + ((value - lo) / (hi - lo)) * (outHi - outLo);
}

export function renderScatter(container: HTMLElement, data: TableData, axis: ScatterAxis): void {
  const doc = container.ownerDocument;
  const wrapper = doc.createElement("div");
  wrapper.className = "scatter";

  const points: Point[] = [];
  const unplottable: { row: TableRow; reason: string }[] = [];
  for (const row of data.rows) {
    const raw = xValue(row, axis);
    if (raw === null) {
      unplottable.push({ row, reason: `${axisLabel(axis)} unknown` });
    } else {
      points.push({ row, xRaw: raw, xPos: axis === "size" ? Math.log10(raw) : raw });
    }
  }

  const svg = doc.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT));
  svg.dataset.axis = axis;

  if (points.length > 0) {
    const xs = points.map((p) => p.xPos);
    const ys = points.map((p) => p.row.mean_score);
    const [xLo, xHi] = [Math.min(...xs), Math.max(...xs)];
    const [yLo, yHi] = [Math.min(...ys), Math.max(...ys)];

    for (const point of points) {
      const circle = doc.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(scale(point.xPos, xLo, xHi, PAD, WIDTH - PAD)));
      circle.setAttribute("cy", String(scale(point.row.mean_score, yLo, yHi, HEIGHT - PAD, PAD)));
      circle.setAttribute("r", "6");
      circle.dataset.model = point.row.model_name;
      const title = doc.createElementNS(SVG_NS, "title");
      title.textContent =
        `${point.row.model_name}\n` +
        `mean_score=${point.row.mean_score}\n` +
        `${axisLabel(axis)}=${point.xRaw}`;
      circle.appendChild(title);
      svg.appendChild(circle);
    }

    // axis end labels carry the exact extreme data values
    const xRaws = points.map((p) => p.xRaw);
    const labels: [string, number, number][] = [
      [String(Math.min(...xRaws)), PAD, HEIGHT - PAD / 2],
      [String(Math.max(...xRaws)), WIDTH - PAD, HEIGHT - PAD / 2],
      [String(yLo), PAD / 2, HEIGHT - PAD],
      [String(yHi), PAD / 2, PAD],
    ];
    for (const [text, x, y] of labels) {
      const label = doc.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(x));
      label.setAttribute("y", String(y));
      label.textContent = text;
      svg.appendChild(label);
    }
  } else {
    const empty = doc.createElementNS(SVG_NS, "text");
    empty.setAttribute("x", String(WIDTH / 2));
    empty.setAttribute("y", String(HEIGHT / 2));
    empty.textContent = "no plottable models";
    svg.appendChild(empty);
  }
  wrapper.appendChild(svg);

  const aside = doc.createElement("ul");
  aside.dataset.role = "unplottable";
  for (const { row, reason } of unplottable) {
    const item = doc.createElement("li");
    item.dataset.model = row.model_name;
    item.textContent = `${row.model_name} (${reason}, mean_score=${row.mean_score})`;
    aside.appendChild(item);
  }
  wrapper.appendChild(aside);

  container.replaceChildren(wrapper);
}
