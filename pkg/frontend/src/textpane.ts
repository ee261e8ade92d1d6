import { hexToRgba } from "./color.js";
import { toCodePoints } from "./codepoints.js";

const HIGHLIGHT_ALPHA = 0.4;

/** The text half of the linked gantt/text view.
 *
 * Renders a window of the text (bounds in code points), and highlights one
 * absolute code-point range at a time in a tag's color. `dir="auto"` keeps
 * right-to-left bodies readable. Everything is split via code points, so
 * the highlighted span always covers exactly the range the chart reports.
 */
export class TextPane {
  readonly el: HTMLElement;
  private points: string[] = [];
  private boundsStart = 0;
  private boundsEnd = 0;
  private current: { start: number; end: number; color: string } | null = null;

  constructor(container: HTMLElement) {
    this.el = document.createElement("div");
    this.el.className = "text-pane";
    this.el.setAttribute("dir", "auto");
    this.el.dataset.role = "text-pane";
    container.appendChild(this.el);
  }

  setBody(body: string): void {
    this.points = toCodePoints(body);
    this.boundsStart = 0;
    this.boundsEnd = this.points.length;
    this.current = null;
    this.render();
  }

  get length(): number {
    return this.points.length;
  }

  /** Restrict the visible window to [start, end) code points. */
  setBounds(start: number, end: number): void {
    this.boundsStart = Math.max(0, Math.min(start, this.points.length));
    this.boundsEnd = Math.max(this.boundsStart, Math.min(end, this.points.length));
    this.render();
  }

  /** Highlight absolute code points [start, end) and scroll them into view. */
  highlight(start: number, end: number, color: string): void {
    this.current = { start, end, color };
    this.render();
    const mark = this.el.querySelector<HTMLElement>('[data-role="highlight"]');
    if (mark && typeof mark.scrollIntoView === "function") {
      mark.scrollIntoView({ block: "center" });
    }
  }

  clearHighlight(): void {
    this.current = null;
    this.render();
  }

  private render(): void {
    this.el.textContent = "";
    const window = this.points.slice(this.boundsStart, this.boundsEnd);
    if (!this.current) {
      this.el.appendChild(this.span(window.join(""), "body"));
      return;
    }
    // clamp the highlight to the visible window, in absolute coordinates
    const start = Math.max(this.current.start, this.boundsStart);
    const end = Math.min(this.current.end, this.boundsEnd);
    if (start >= end) {
      this.el.appendChild(this.span(window.join(""), "body"));
      return;
    }
    const before = this.points.slice(this.boundsStart, start).join("");
    const marked = this.points.slice(start, end).join("");
    const after = this.points.slice(end, this.boundsEnd).join("");
    if (before) this.el.appendChild(this.span(before, "before"));
    const mark = this.span(marked, "highlight");
    mark.style.backgroundColor = hexToRgba(this.current.color, HIGHLIGHT_ALPHA);
    this.el.appendChild(mark);
    if (after) this.el.appendChild(this.span(after, "after"));
  }

  private span(text: string, role: string): HTMLElement {
    const el = document.createElement("span");
    el.textContent = text;
    el.dataset.role = role;
    return el;
  }
}
