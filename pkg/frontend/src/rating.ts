import type { ApiClient } from "./api.js";
import type { TrialData } from "./types.js";

const DRAFT_PREFIX = "tagscape-trial-draft:";

/** Ranking workflow for one evaluation trial.
 *
 * The five candidates arrive in the trial's own (already shuffled) order
 * with no hint of where they came from. The rater moves them one by one
 * into a ranked list (most similar first); submission stays disabled until
 * all five are placed, and posts the complete permutation. A draft of the
 * partial ranking lives in localStorage so a reload resumes mid-trial.
 */
export class RatingView {
  readonly el: HTMLElement;
  private trial: TrialData | null = null;
  private ranked: string[] = [];
  private statusEl: HTMLElement;

  constructor(
    container: HTMLElement,
    private api: ApiClient,
    private rater: string = "scholar",
  ) {
    this.el = document.createElement("div");
    this.el.className = "rating-view";
    container.appendChild(this.el);
    this.statusEl = document.createElement("div");
    this.statusEl.dataset.role = "status";
  }

  async load(trialId: string): Promise<void> {
    this.trial = await this.api.getTrial(trialId);
    const draft = this.restoreDraft();
    this.ranked = draft.filter((c) => this.trial!.candidates.includes(c));
    this.render();
  }

  private draftKey(): string {
    return DRAFT_PREFIX + (this.trial?.id ?? "");
  }

  private restoreDraft(): string[] {
    try {
      const raw = window.localStorage.getItem(this.draftKey());
      return raw ? (JSON.parse(raw) as string[]) : [];
    } catch {
      return [];
    }
  }

  private saveDraft(): void {
    try {
      window.localStorage.setItem(this.draftKey(), JSON.stringify(this.ranked));
    } catch {
      // storage may be unavailable; drafts are a convenience only
    }
  }

  private place(candidate: string): void {
    if (!this.ranked.includes(candidate)) {
      this.ranked.push(candidate);
      this.saveDraft();
      this.render();
    }
  }

  private unplace(candidate: string): void {
    this.ranked = this.ranked.filter((c) => c !== candidate);
    this.saveDraft();
    this.render();
  }

  private swap(index: number, delta: number): void {
    const other = index + delta;
    if (other < 0 || other >= this.ranked.length) return;
    [this.ranked[index], this.ranked[other]] = [this.ranked[other], this.ranked[index]];
    this.saveDraft();
    this.render();
  }

  private async submit(): Promise<void> {
    const trial = this.trial;
    if (!trial || this.ranked.length !== trial.candidates.length) return;
    try {
      await this.api.submitResponse(trial.id, this.rater, [...this.ranked]);
      window.localStorage.removeItem(this.draftKey());
      this.statusEl.textContent = "ranking submitted";
      this.statusEl.dataset.state = "done";
    } catch (exc) {
      this.statusEl.textContent = `submission failed: ${(exc as Error).message}`;
      this.statusEl.dataset.state = "error";
    }
    this.render();
  }

  private render(): void {
    const trial = this.trial;
    this.el.textContent = "";
    if (!trial) return;

    const heading = document.createElement("h2");
    heading.textContent = `rank by similarity to ${trial.target}`;
    this.el.appendChild(heading);

    const pool = document.createElement("div");
    pool.dataset.role = "pool";
    for (const candidate of trial.candidates) {
      if (this.ranked.includes(candidate)) continue;
      const item = document.createElement("button");
      item.type = "button";
      item.dataset.role = "candidate";
      item.dataset.text = candidate;
      item.textContent = candidate;
      item.addEventListener("click", () => this.place(candidate));
      pool.appendChild(item);
    }
    this.el.appendChild(pool);

    const list = document.createElement("ol");
    list.dataset.role = "ranking";
    this.ranked.forEach((candidate, index) => {
      const item = document.createElement("li");
      item.dataset.text = candidate;
      const label = document.createElement("span");
      label.textContent = candidate;
      item.appendChild(label);
      for (const [symbol, action] of [
        ["↑", () => this.swap(index, -1)],
        ["↓", () => this.swap(index, +1)],
        ["×", () => this.unplace(candidate)],
      ] as const) {
        const btn = document.createElement("button");
        btn.type = "button";
        btn.textContent = symbol;
        btn.addEventListener("click", action);
        item.appendChild(btn);
      }
      list.appendChild(item);
    });
    this.el.appendChild(list);

    const submit = document.createElement("button");
    submit.type = "button";
    submit.dataset.role = "submit";
    submit.textContent = "submit ranking";
    submit.disabled = this.ranked.length !== trial.candidates.length;
    submit.addEventListener("click", () => void this.submit());
    this.el.appendChild(submit);

    if (submit.disabled) {
      this.statusEl.textContent = `${this.ranked.length} of ${trial.candidates.length} ranked`;
      this.statusEl.dataset.state = "incomplete";
    }
    this.el.appendChild(this.statusEl);
  }
}
