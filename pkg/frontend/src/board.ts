import type { ApiClient } from "./api.js";
import type { BoardData, GalleryData, GalleryEntry } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const CARD_CHART_WIDTH = 160;
const CARD_CHART_HEIGHT = 34;

function miniGantt(entry: GalleryEntry): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(CARD_CHART_WIDTH));
  svg.setAttribute("height", String(CARD_CHART_HEIGHT));
  const laneHeight = CARD_CHART_HEIGHT / Math.max(entry.lanes.length, 1);
  entry.lanes.forEach((lane, row) => {
    for (const [start, end] of lane.intervals) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String((start / entry.length) * CARD_CHART_WIDTH));
      rect.setAttribute("y", String(row * laneHeight));
      rect.setAttribute(
        "width",
        String(Math.max(((end - start) / entry.length) * CARD_CHART_WIDTH, 1)),
      );
      rect.setAttribute("height", String(Math.max(laneHeight - 1, 1)));
      rect.setAttribute("fill", lane.color);
      svg.appendChild(rect);
    }
  });
  return svg;
}

/** Drag-and-drop grouping board.
 *
 * Cards are minimized gantt charts; dropping one on a category column
 * updates the view immediately and posts the move, rolling back visually
 * if the service rejects it. Drops outside any column do nothing, so the
 * card stays where it came from.
 */
export class BoardView {
  readonly el: HTMLElement;
  private board: BoardData | null = null;
  private gallery: GalleryData | null = null;
  private errorEl: HTMLElement;

  constructor(
    container: HTMLElement,
    private api: ApiClient,
  ) {
    this.el = document.createElement("div");
    this.el.className = "board-view";
    container.appendChild(this.el);
    this.errorEl = document.createElement("div");
    this.errorEl.dataset.role = "error";
    this.errorEl.hidden = true;
  }

  async load(project: string): Promise<void> {
    const [boards, gallery] = await Promise.all([
      this.api.boards(project),
      this.api.gallery(project),
    ]);
    this.board = boards.length ? boards[0] : await this.api.createBoard(project);
    this.gallery = gallery;
    this.render();
  }

  async addCategory(name: string): Promise<void> {
    if (!this.board) return;
    this.board = await this.api.createCategory(this.board.id, name);
    this.render();
  }

  /** Optimistic move with rollback on API failure. */
  async move(text: string, category: string | null): Promise<void> {
    const board = this.board;
    if (!board) return;
    const snapshot: BoardData = JSON.parse(JSON.stringify(board));
    this.applyLocalMove(text, category);
    this.render();
    try {
      this.board = await this.api.moveCard(board.id, text, category);
      this.errorEl.hidden = true;
    } catch (exc) {
      this.board = snapshot;
      this.errorEl.textContent = `move failed: ${(exc as Error).message}`;
      this.errorEl.hidden = false;
    }
    this.render();
  }

  private applyLocalMove(text: string, category: string | null): void {
    const board = this.board;
    if (!board) return;
    board.uncategorized = board.uncategorized.filter((t) => t !== text);
    for (const name of Object.keys(board.categories)) {
      board.categories[name] = board.categories[name].filter((t) => t !== text);
    }
    if (category === null) {
      board.uncategorized.push(text);
    } else {
      board.categories[category].push(text);
    }
  }

  private card(textId: string): HTMLElement {
    const card = document.createElement("div");
    card.className = "board-card";
    card.dataset.role = "card";
    card.dataset.text = textId;
    card.draggable = true;
    const entry = this.gallery?.entries.find((e) => e.text === textId);
    const title = document.createElement("div");
    title.textContent = entry?.title ?? textId;
    title.setAttribute("dir", "auto");
    card.appendChild(title);
    if (entry) card.appendChild(miniGantt(entry));
    card.addEventListener("dragstart", (event: DragEvent) => {
      event.dataTransfer?.setData("text/plain", textId);
    });
    return card;
  }

  private column(name: string | null, members: string[]): HTMLElement {
    const column = document.createElement("div");
    column.className = "board-column";
    column.dataset.role = "column";
    column.dataset.category = name ?? "";
    const heading = document.createElement("h3");
    heading.textContent = name ?? "uncategorized";
    column.appendChild(heading);
    for (const text of members) column.appendChild(this.card(text));
    column.addEventListener("dragover", (event) => event.preventDefault());
    column.addEventListener("drop", (event: DragEvent) => {
      event.preventDefault();
      const text = event.dataTransfer?.getData("text/plain");
      if (text) void this.move(text, name);
    });
    return column;
  }

  private render(): void {
    const board = this.board;
    this.el.textContent = "";
    this.el.appendChild(this.errorEl);
    if (!board) return;

    const form = document.createElement("form");
    const nameInput = document.createElement("input");
    nameInput.placeholder = "new category";
    nameInput.dataset.role = "category-name";
    const button = document.createElement("button");
    button.type = "submit";
    button.textContent = "add category";
    form.append(nameInput, button);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const name = nameInput.value.trim();
      if (name && !(name in board.categories)) void this.addCategory(name);
      nameInput.value = "";
    });
    this.el.appendChild(form);

    const columns = document.createElement("div");
    columns.className = "board-columns";
    columns.appendChild(this.column(null, board.uncategorized));
    for (const [name, members] of Object.entries(board.categories)) {
      columns.appendChild(this.column(name, members));
    }
    this.el.appendChild(columns);
  }
}
