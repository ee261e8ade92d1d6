import { ApiClient } from "./api.js";
import { BoardView } from "./board.js";
import { GanttView } from "./gantt.js";
import { RatingView } from "./rating.js";
import { galleryView, heatmapView, stackedView, sunburstView } from "./charts.js";

/** Hash routes:
 *   #/                                project list
 *   #/p/{project}                     gallery + corpus sunburst
 *   #/p/{project}/t/{text}            linked gantt/text + stacked + sunburst
 *   #/p/{project}/board               grouping board
 *   #/p/{project}/heat/{tag}          similarity heatmap
 *   #/p/{project}/pair/{tag}/{a}/{b}  side-by-side comparison
 *   #/trial/{trial}                   rating workflow
 */
export class App {
  constructor(
    private root: HTMLElement,
    private api: ApiClient = new ApiClient(),
  ) {}

  start(): void {
    window.addEventListener("hashchange", () => void this.route());
    void this.route();
  }

  private clear(): HTMLElement {
    this.root.textContent = "";
    const page = document.createElement("div");
    this.root.appendChild(page);
    return page;
  }

  private fail(page: HTMLElement, exc: unknown): void {
    const el = document.createElement("div");
    el.dataset.role = "error";
    el.textContent = `request failed: ${(exc as Error).message}`;
    page.appendChild(el);
  }

  async route(): Promise<void> {
    const parts = window.location.hash.replace(/^#\/?/, "").split("/").filter(Boolean);
    const page = this.clear();
    try {
      if (!parts.length) return await this.projectList(page);
      if (parts[0] === "trial" && parts[1]) {
        const rating = new RatingView(page, this.api);
        return await rating.load(parts[1]);
      }
      if (parts[0] !== "p" || !parts[1]) return await this.projectList(page);
      const project = decodeURIComponent(parts[1]);
      switch (parts[2]) {
        case undefined:
          return await this.projectHome(page, project);
        case "t":
          return await this.textPage(page, project, decodeURIComponent(parts[3]));
        case "board": {
          const board = new BoardView(page, this.api);
          return await board.load(project);
        }
        case "heat":
          return await this.heatPage(page, project, decodeURIComponent(parts[3]));
        case "pair":
          return await this.pairPage(
            page,
            project,
            decodeURIComponent(parts[4]),
            decodeURIComponent(parts[5]),
          );
      }
    } catch (exc) {
      this.fail(page, exc);
    }
  }

  private link(href: string, label: string): HTMLAnchorElement {
    const a = document.createElement("a");
    a.href = href;
    a.textContent = label;
    return a;
  }

  private async projectList(page: HTMLElement): Promise<void> {
    const projects = await this.api.listProjects();
    const heading = document.createElement("h1");
    heading.textContent = "projects";
    page.appendChild(heading);
    if (!projects.length) {
      const empty = document.createElement("div");
      empty.dataset.role = "empty";
      empty.textContent = "no projects imported yet";
      page.appendChild(empty);
      return;
    }
    const list = document.createElement("ul");
    for (const p of projects) {
      const item = document.createElement("li");
      item.appendChild(this.link(`#/p/${encodeURIComponent(p.id)}`, p.name));
      item.append(` — ${p.texts} texts, ${p.annotations} annotations`);
      list.appendChild(item);
    }
    page.appendChild(list);
  }

  private tagBar(page: HTMLElement, project: string, tags: { id: string }[]): void {
    const bar = document.createElement("nav");
    bar.append("similarity: ");
    for (const tag of tags) {
      bar.appendChild(
        this.link(
          `#/p/${encodeURIComponent(project)}/heat/${encodeURIComponent(tag.id)}`,
          tag.id,
        ),
      );
      bar.append(" ");
    }
    bar.appendChild(this.link(`#/p/${encodeURIComponent(project)}/board`, "board"));
    page.appendChild(bar);
  }

  private async projectHome(page: HTMLElement, project: string): Promise<void> {
    const [doc, gallery, burst] = await Promise.all([
      this.api.getProject(project),
      this.api.gallery(project),
      this.api.sunburst(project),
    ]);
    const heading = document.createElement("h1");
    heading.textContent = doc.name;
    page.appendChild(heading);
    this.tagBar(page, project, doc.tagsets.flatMap((ts) => ts.tags));
    galleryView(page, gallery, (text) => {
      window.location.hash = `#/p/${encodeURIComponent(project)}/t/${encodeURIComponent(text)}`;
    });
    sunburstView(page, burst);
  }

  private async textPage(page: HTMLElement, project: string, text: string): Promise<void> {
    const gantt = new GanttView(page, this.api);
    await gantt.load(project, text);
    const [stacked, burst] = await Promise.all([
      this.api.stacked(project, text),
      this.api.sunburst(project, text),
    ]);
    stackedView(page, stacked);
    sunburstView(page, burst);
  }

  private async heatPage(page: HTMLElement, project: string, tag: string): Promise<void> {
    const matrix = await this.api.matrix(project, tag);
    heatmapView(page, matrix, (a, b) => {
      window.location.hash =
        `#/p/${encodeURIComponent(project)}/pair/${encodeURIComponent(tag)}` +
        `/${encodeURIComponent(a)}/${encodeURIComponent(b)}`;
    });
  }

  private async pairPage(
    page: HTMLElement,
    project: string,
    a: string,
    b: string,
  ): Promise<void> {
    const wrap = document.createElement("div");
    wrap.className = "pair-view";
    page.appendChild(wrap);
    const left = new GanttView(wrap, this.api);
    const right = new GanttView(wrap, this.api);
    await Promise.all([left.load(project, a), right.load(project, b)]);
  }
}

const mount = document.getElementById("app");
if (mount) new App(mount).start();
