// In-memory scripted backend. Tests construct a real ApiClient around
// `backend.fetch`, so views exercise genuine URL construction and
// response handling while the "server" stays a deterministic object.

import type { FetchLike } from "../src/api.js";
import type { BoardData, GalleryData, GanttData, TextData, TrialData } from "../src/types.js";

function jsonResponse(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    json: async () => body,
  } as unknown as Response;
}

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

export class FakeBackend {
  texts = new Map<string, TextData>();
  gantts = new Map<string, GanttData>();
  gallery: GalleryData = { project: "p", entries: [] };
  boards = new Map<string, BoardData>();
  trials = new Map<string, TrialData>();
  responses: { trial: string; rater: string; ranking: string[] }[] = [];
  requests: RecordedRequest[] = [];
  failNextMove = false;

  readonly fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const parsed = new URL(url, "http://fake");
    const path = parsed.pathname;
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    this.requests.push({ method, path, body });

    if (method === "GET") {
      const textMatch = /^\/projects\/([^/]+)\/texts\/([^/]+)$/.exec(path);
      if (textMatch) {
        const text = this.texts.get(decodeURIComponent(textMatch[2]));
        return text
          ? jsonResponse(200, text)
          : jsonResponse(404, { code: 404, message: "unknown text" });
      }
      if (path === "/charts/gantt") {
        const data = this.gantts.get(parsed.searchParams.get("text") ?? "");
        return data
          ? jsonResponse(200, data)
          : jsonResponse(404, { code: 404, message: "unknown text" });
      }
      if (path === "/charts/gallery") return jsonResponse(200, this.gallery);
      if (path === "/boards") {
        return jsonResponse(200, [...this.boards.values()]);
      }
      const trialMatch = /^\/evaluation\/trials\/([^/]+)$/.exec(path);
      if (trialMatch) {
        const trial = this.trials.get(decodeURIComponent(trialMatch[1]));
        return trial
          ? jsonResponse(200, trial)
          : jsonResponse(404, { code: 404, message: "unknown trial" });
      }
    }

    if (method === "POST") {
      if (path === "/boards") {
        const board: BoardData = {
          id: body.id ?? "board-1",
          project: body.project,
          categories: {},
          uncategorized: this.gallery.entries.map((e) => e.text),
        };
        this.boards.set(board.id, board);
        return jsonResponse(200, board);
      }
      const categoryMatch = /^\/boards\/([^/]+)\/categories$/.exec(path);
      if (categoryMatch) {
        const board = this.boards.get(decodeURIComponent(categoryMatch[1]));
        if (!board) return jsonResponse(404, { code: 404, message: "unknown board" });
        board.categories[body.name] = [];
        return jsonResponse(200, board);
      }
      const moveMatch = /^\/boards\/([^/]+)\/move$/.exec(path);
      if (moveMatch) {
        if (this.failNextMove) {
          this.failNextMove = false;
          return jsonResponse(500, { code: 500, message: "scripted failure" });
        }
        const board = this.boards.get(decodeURIComponent(moveMatch[1]));
        if (!board) return jsonResponse(404, { code: 404, message: "unknown board" });
        const { text, category } = body as { text: string; category: string | null };
        board.uncategorized = board.uncategorized.filter((t) => t !== text);
        for (const name of Object.keys(board.categories)) {
          board.categories[name] = board.categories[name].filter((t) => t !== text);
        }
        if (category === null) board.uncategorized.push(text);
        else if (category in board.categories) board.categories[category].push(text);
        else return jsonResponse(404, { code: 404, message: "unknown category" });
        return jsonResponse(200, board);
      }
      if (path === "/evaluation/responses") {
        const trial = this.trials.get(body.trial);
        if (!trial) return jsonResponse(404, { code: 404, message: "unknown trial" });
        const sorted = [...body.ranking].sort();
        const expected = [...trial.candidates].sort();
        if (JSON.stringify(sorted) !== JSON.stringify(expected)) {
          return jsonResponse(400, { code: 400, message: "not a permutation" });
        }
        this.responses.push(body);
        return jsonResponse(200, { trial: body.trial, rater: body.rater });
      }
    }
    return jsonResponse(404, { code: 404, message: `no route: ${method} ${path}` });
  };
}

export function dragEvent(type: string, payload?: string): Event {
  const event = new Event(type, { bubbles: true, cancelable: true });
  let stored = payload ?? "";
  Object.defineProperty(event, "dataTransfer", {
    value: {
      setData: (_format: string, value: string) => {
        stored = value;
      },
      getData: () => stored,
    },
  });
  return event;
}
