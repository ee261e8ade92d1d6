import type {
  BoardData,
  GalleryData,
  GanttData,
  MatrixData,
  ProjectDoc,
  ProjectSummary,
  RankEntry,
  StackedData,
  SunburstNode,
  TextData,
  TrialData,
  TrialSessionData,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

/** Thin typed wrapper over the REST endpoints. The fetch function is
 * injectable so component tests can run against a scripted backend. */
export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) {
      let message = response.statusText;
      try {
        const body = (await response.json()) as { message?: string };
        if (body.message) message = body.message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, message);
    }
    return (await response.json()) as T;
  }

  private get<T>(path: string): Promise<T> {
    return this.request<T>(path);
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listProjects(): Promise<ProjectSummary[]> {
    return this.get("/projects");
  }

  getProject(id: string): Promise<ProjectDoc> {
    return this.get(`/projects/${encodeURIComponent(id)}`);
  }

  getText(project: string, text: string): Promise<TextData> {
    return this.get(
      `/projects/${encodeURIComponent(project)}/texts/${encodeURIComponent(text)}`,
    );
  }

  gantt(project: string, text: string, tags?: string[]): Promise<GanttData> {
    const filter = tags?.length ? `&tags=${encodeURIComponent(tags.join(","))}` : "";
    return this.get(
      `/charts/gantt?project=${encodeURIComponent(project)}&text=${encodeURIComponent(text)}${filter}`,
    );
  }

  stacked(project: string, text: string, bin?: number): Promise<StackedData> {
    const width = bin ? `&bin=${bin}` : "";
    return this.get(
      `/charts/stacked?project=${encodeURIComponent(project)}&text=${encodeURIComponent(text)}${width}`,
    );
  }

  sunburst(project: string, scope?: string): Promise<SunburstNode> {
    const scoped = scope ? `&scope=${encodeURIComponent(scope)}` : "";
    return this.get(`/charts/sunburst?project=${encodeURIComponent(project)}${scoped}`);
  }

  gallery(project: string, tags?: string[]): Promise<GalleryData> {
    const filter = tags?.length ? `&tags=${encodeURIComponent(tags.join(","))}` : "";
    return this.get(`/charts/gallery?project=${encodeURIComponent(project)}${filter}`);
  }

  matrix(project: string, tag: string, radius = 1): Promise<MatrixData> {
    return this.get(
      `/similarity/matrix?project=${encodeURIComponent(project)}&tag=${encodeURIComponent(tag)}&radius=${radius}`,
    );
  }

  rank(project: string, tag: string, target: string, radius = 1): Promise<RankEntry[]> {
    return this.get(
      `/similarity/rank?project=${encodeURIComponent(project)}&tag=${encodeURIComponent(tag)}&target=${encodeURIComponent(target)}&radius=${radius}`,
    );
  }

  boards(project: string): Promise<BoardData[]> {
    return this.get(`/boards?project=${encodeURIComponent(project)}`);
  }

  createBoard(project: string, id?: string): Promise<BoardData> {
    return this.post("/boards", { project, id });
  }

  createCategory(board: string, name: string): Promise<BoardData> {
    return this.post(`/boards/${encodeURIComponent(board)}/categories`, { name });
  }

  moveCard(board: string, text: string, category: string | null): Promise<BoardData> {
    return this.post(`/boards/${encodeURIComponent(board)}/move`, { text, category });
  }

  createTrials(project: string, tag: string, seed: number): Promise<TrialSessionData> {
    return this.post("/evaluation/trials", { project, tag, seed });
  }

  getTrial(id: string): Promise<TrialData> {
    return this.get(`/evaluation/trials/${encodeURIComponent(id)}`);
  }

  submitResponse(trial: string, rater: string, ranking: string[]): Promise<unknown> {
    return this.post("/evaluation/responses", { trial, rater, ranking });
  }
}
