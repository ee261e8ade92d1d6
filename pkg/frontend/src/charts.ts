import type { GalleryData, MatrixData, StackedData, SunburstNode } from "./types.js";
import { rampColor } from "./color.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function emptyState(message: string): HTMLElement {
  const el = document.createElement("div");
  el.dataset.role = "empty";
  el.textContent = message;
  return el;
}

export function formatShare(share: number): string {
  // 0.5 -> "50%", 0.41667 -> "41.7%"
  return `${parseFloat((share * 100).toFixed(1))}%`;
}

function polar(cx: number, cy: number, r: number, angle: number): [number, number] {
  return [cx + r * Math.cos(angle), cy + r * Math.sin(angle)];
}

function arcPath(
  cx: number,
  cy: number,
  r0: number,
  r1: number,
  a0: number,
  a1: number,
): string {
  const large = a1 - a0 > Math.PI ? 1 : 0;
  const [x0, y0] = polar(cx, cy, r1, a0);
  const [x1, y1] = polar(cx, cy, r1, a1);
  const [x2, y2] = polar(cx, cy, r0, a1);
  const [x3, y3] = polar(cx, cy, r0, a0);
  return (
    `M ${x0} ${y0} A ${r1} ${r1} 0 ${large} 1 ${x1} ${y1} ` +
    `L ${x2} ${y2} A ${r0} ${r0} 0 ${large} 0 ${x3} ${y3} Z`
  );
}

/** Nested-ring proportions chart. Ring depth follows the tag hierarchy;
 * every slice is labeled with the share the service reported. */
export function sunburstView(container: HTMLElement, root: SunburstNode): HTMLElement {
  const host = document.createElement("div");
  host.className = "sunburst";
  container.appendChild(host);
  if (!root.children.length || root.count === 0) {
    host.appendChild(emptyState("no annotations in scope"));
    return host;
  }
  const size = 360;
  const cx = size / 2;
  const cy = size / 2;
  const ringWidth = 52;
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(size));
  svg.setAttribute("height", String(size));

  const drawRing = (nodes: SunburstNode[], depth: number, a0: number, a1: number) => {
    let cursor = a0;
    for (const node of nodes) {
      const sweep = (a1 - a0) * node.share;
      const r0 = 30 + depth * ringWidth;
      const r1 = r0 + ringWidth - 4;
      const path = document.createElementNS(SVG_NS, "path");
      path.setAttribute("d", arcPath(cx, cy, r0, r1, cursor, cursor + sweep));
      path.setAttribute("fill", node.color ?? "#cccccc");
      path.dataset.role = "slice";
      path.dataset.tag = node.tag ?? "";
      path.dataset.share = formatShare(node.share);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${node.name}: ${node.count} (${formatShare(node.share)})`;
      path.appendChild(title);
      svg.appendChild(path);

      const [lx, ly] = polar(cx, cy, (r0 + r1) / 2, cursor + sweep / 2);
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(lx));
      label.setAttribute("y", String(ly));
      label.setAttribute("text-anchor", "middle");
      label.dataset.role = "slice-label";
      label.textContent = `${node.name} ${formatShare(node.share)}`;
      svg.appendChild(label);

      if (node.children.length) {
        drawRing(node.children, depth + 1, cursor, cursor + sweep);
      }
      cursor += sweep;
    }
  };
  drawRing(root.children, 0, -Math.PI / 2, 1.5 * Math.PI);
  host.appendChild(svg);
  return host;
}

/** Stacked area chart of per-bin covered-character counts. */
export function stackedView(container: HTMLElement, data: StackedData): HTMLElement {
  const host = document.createElement("div");
  host.className = "stacked";
  container.appendChild(host);
  if (!data.series.length) {
    host.appendChild(emptyState("no annotations in this text"));
    return host;
  }
  const width = 720;
  const height = 160;
  const bins = data.series[0].counts.length;
  const maxStack = Math.max(
    1,
    ...Array.from({ length: bins }, (_, b) =>
      data.series.reduce((sum, s) => sum + s.counts[b], 0),
    ),
  );
  const x = (b: number) => (bins > 1 ? (b / (bins - 1)) * width : width / 2);
  const y = (v: number) => height - (v / maxStack) * height;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  const baseline = new Array<number>(bins).fill(0);
  for (const series of data.series) {
    const top = baseline.map((base, b) => base + series.counts[b]);
    const upper = top.map((v, b) => `${x(b)},${y(v)}`);
    const lower = [...baseline.keys()]
      .reverse()
      .map((b) => `${x(b)},${y(baseline[b])}`);
    const polygon = document.createElementNS(SVG_NS, "polygon");
    polygon.setAttribute("points", [...upper, ...lower].join(" "));
    polygon.setAttribute("fill", series.color);
    polygon.setAttribute("fill-opacity", "0.85");
    polygon.dataset.role = "area";
    polygon.dataset.tag = series.tag;
    svg.appendChild(polygon);
    top.forEach((v, b) => (baseline[b] = v));
  }
  host.appendChild(svg);
  return host;
}

/** Pairwise similarity heatmap; a cell click hands both text ids to the
 * caller (the app opens the side-by-side comparison). */
export function heatmapView(
  container: HTMLElement,
  matrix: MatrixData,
  onPair?: (a: string, b: string) => void,
): HTMLElement {
  const host = document.createElement("div");
  host.className = "heatmap";
  container.appendChild(host);
  if (!matrix.texts.length) {
    host.appendChild(emptyState("no texts to compare"));
    return host;
  }
  const table = document.createElement("table");
  const header = document.createElement("tr");
  header.appendChild(document.createElement("th"));
  for (const id of matrix.texts) {
    const th = document.createElement("th");
    th.textContent = id;
    header.appendChild(th);
  }
  table.appendChild(header);
  matrix.texts.forEach((a, i) => {
    const row = document.createElement("tr");
    const label = document.createElement("th");
    label.textContent = a;
    row.appendChild(label);
    matrix.texts.forEach((b, j) => {
      const cell = document.createElement("td");
      const score = matrix.scores[i][j];
      cell.style.backgroundColor = rampColor(score);
      cell.title = `${a} / ${b}: ${score.toFixed(4)}`;
      cell.dataset.role = "cell";
      cell.dataset.a = a;
      cell.dataset.b = b;
      if (onPair && a !== b) {
        cell.addEventListener("click", () => onPair(a, b));
      }
      row.appendChild(cell);
    });
    table.appendChild(row);
  });
  host.appendChild(table);
  return host;
}

/** Side-by-side minimized gantt cards; the zoom control changes how many
 * cards share a row. */
export function galleryView(
  container: HTMLElement,
  gallery: GalleryData,
  onOpen?: (text: string) => void,
): HTMLElement {
  const host = document.createElement("div");
  host.className = "gallery";
  container.appendChild(host);
  if (!gallery.entries.length) {
    host.appendChild(emptyState("empty project"));
    return host;
  }
  const zoom = document.createElement("input");
  zoom.type = "range";
  zoom.min = "2";
  zoom.max = "8";
  zoom.value = "4";
  zoom.dataset.role = "zoom";
  host.appendChild(zoom);

  const grid = document.createElement("div");
  grid.dataset.role = "grid";
  grid.style.display = "grid";
  const applyZoom = () =>
    (grid.style.gridTemplateColumns = `repeat(${zoom.value}, 1fr)`);
  zoom.addEventListener("input", applyZoom);
  applyZoom();

  for (const entry of gallery.entries) {
    const card = document.createElement("div");
    card.className = "gallery-card";
    card.dataset.role = "gallery-card";
    card.dataset.text = entry.text;
    const title = document.createElement("div");
    title.textContent = entry.title;
    title.setAttribute("dir", "auto");
    card.appendChild(title);

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", "0 0 100 20");
    const laneHeight = 20 / Math.max(entry.lanes.length, 1);
    entry.lanes.forEach((lane, row) => {
      for (const [start, end] of lane.intervals) {
        const rect = document.createElementNS(SVG_NS, "rect");
        rect.setAttribute("x", String((start / entry.length) * 100));
        rect.setAttribute("y", String(row * laneHeight));
        rect.setAttribute("width", String(Math.max(((end - start) / entry.length) * 100, 0.5)));
        rect.setAttribute("height", String(Math.max(laneHeight - 0.5, 0.5)));
        rect.setAttribute("fill", lane.color);
        svg.appendChild(rect);
      }
    });
    card.appendChild(svg);
    if (onOpen) card.addEventListener("click", () => onOpen(entry.text));
    grid.appendChild(card);
  }
  host.appendChild(grid);
  return host;
}
