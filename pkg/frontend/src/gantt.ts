import type { ApiClient } from "./api.js";
import type { GanttData } from "./types.js";
import { TextPane } from "./textpane.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const LANE_HEIGHT = 22;
const LANE_GAP = 6;
const CHART_WIDTH = 720;
const LABEL_WIDTH = 90;

/** Linked gantt chart and text pane.
 *
 * Hovering an interval scrolls the pane to that range and highlights it in
 * the tag's color; the bounds slider re-windows both the chart's x-scale
 * and the visible text. Data and interaction state both come from the API;
 * failures surface in a dismissable error strip instead of breaking the view.
 */
export class GanttView {
  readonly el: HTMLElement;
  readonly pane: TextPane;
  private chart: HTMLElement;
  private errorEl: HTMLElement;
  private boundsInputs: { start: HTMLInputElement; end: HTMLInputElement };
  private data: GanttData | null = null;
  private project = "";
  private loading: Promise<void> | null = null;

  constructor(
    container: HTMLElement,
    private api: ApiClient,
  ) {
    this.el = document.createElement("div");
    this.el.className = "gantt-view";
    container.appendChild(this.el);

    this.errorEl = document.createElement("div");
    this.errorEl.dataset.role = "error";
    this.errorEl.hidden = true;
    this.el.appendChild(this.errorEl);

    const bounds = document.createElement("div");
    bounds.className = "bounds-control";
    const start = document.createElement("input");
    const end = document.createElement("input");
    for (const input of [start, end]) {
      input.type = "range";
      input.min = "0";
      input.value = "0";
      bounds.appendChild(input);
    }
    this.boundsInputs = { start, end };
    start.dataset.role = "bounds-start";
    end.dataset.role = "bounds-end";
    start.addEventListener("input", () => this.applyBounds());
    end.addEventListener("input", () => this.applyBounds());
    this.el.appendChild(bounds);

    const split = document.createElement("div");
    split.className = "gantt-split";
    this.chart = document.createElement("div");
    this.chart.dataset.role = "chart";
    split.appendChild(this.chart);
    this.pane = new TextPane(split);
    this.el.appendChild(split);
  }

  async load(project: string, textId: string): Promise<void> {
    this.project = project;
    this.loading = (async () => {
      try {
        const [data, text] = await Promise.all([
          this.api.gantt(project, textId),
          this.api.getText(project, textId),
        ]);
        this.data = data;
        this.pane.setBody(text.body);
        this.boundsInputs.start.max = String(data.length);
        this.boundsInputs.end.max = String(data.length);
        this.boundsInputs.start.value = "0";
        this.boundsInputs.end.value = String(data.length);
        this.errorEl.hidden = true;
        this.renderChart();
      } catch (exc) {
        this.showError(`could not load chart: ${(exc as Error).message}`);
      }
    })();
    return this.loading;
  }

  private showError(message: string): void {
    this.errorEl.textContent = message;
    this.errorEl.hidden = false;
  }

  private bounds(): [number, number] {
    const start = Number(this.boundsInputs.start.value);
    const end = Number(this.boundsInputs.end.value);
    return start < end ? [start, end] : [end, start];
  }

  private applyBounds(): void {
    const [start, end] = this.bounds();
    this.pane.setBounds(start, end);
    this.renderChart();
  }

  private renderChart(): void {
    const data = this.data;
    this.chart.textContent = "";
    if (!data) return;
    if (!data.lanes.length) {
      const empty = document.createElement("div");
      empty.dataset.role = "empty";
      empty.textContent = "no annotations in this text";
      this.chart.appendChild(empty);
      return;
    }
    const [viewStart, viewEnd] = this.bounds();
    const span = Math.max(viewEnd - viewStart, 1);
    const height = data.lanes.length * (LANE_HEIGHT + LANE_GAP);
    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("width", String(LABEL_WIDTH + CHART_WIDTH));
    svg.setAttribute("height", String(height));

    data.lanes.forEach((lane, row) => {
      const y = row * (LANE_HEIGHT + LANE_GAP);
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", "0");
      label.setAttribute("y", String(y + LANE_HEIGHT - 6));
      label.textContent = lane.tag;
      svg.appendChild(label);

      for (const [start, end] of lane.intervals) {
        if (end <= viewStart || start >= viewEnd) continue;
        const clampedStart = Math.max(start, viewStart);
        const clampedEnd = Math.min(end, viewEnd);
        const rect = document.createElementNS(SVG_NS, "rect");
        rect.setAttribute(
          "x",
          String(LABEL_WIDTH + ((clampedStart - viewStart) / span) * CHART_WIDTH),
        );
        rect.setAttribute("y", String(y));
        rect.setAttribute(
          "width",
          String(Math.max(((clampedEnd - clampedStart) / span) * CHART_WIDTH, 1)),
        );
        rect.setAttribute("height", String(LANE_HEIGHT));
        rect.setAttribute("fill", lane.color);
        rect.dataset.role = "interval";
        rect.dataset.tag = lane.tag;
        rect.dataset.start = String(start);
        rect.dataset.end = String(end);
        rect.addEventListener("mouseenter", () => this.hover(start, end, lane.color));
        rect.addEventListener("mouseleave", () => this.pane.clearHighlight());
        svg.appendChild(rect);
      }
    });
    this.chart.appendChild(svg);
  }

  private hover(start: number, end: number, color: string): void {
    const data = this.data;
    if (!data) return;
    if (end > this.pane.length) {
      // stale chart against a newer text: refetch, then retry the highlight
      void this.load(this.project, data.text).then(() => {
        if (end <= this.pane.length) this.pane.highlight(start, end, color);
      });
      return;
    }
    this.pane.highlight(start, end, color);
  }
}
