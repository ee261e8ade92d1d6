// DTOs mirroring the service's JSON exactly. The UI never derives numbers
// of its own; everything rendered traces back to one of these shapes.

export interface GanttLane {
  tag: string;
  color: string;
  intervals: [number, number][];
}

export interface GanttData {
  text: string;
  title: string;
  length: number;
  lanes: GanttLane[];
}

export interface StackedSeries {
  tag: string;
  color: string;
  counts: number[];
}

export interface StackedData {
  text: string;
  length: number;
  bin_width: number;
  series: StackedSeries[];
}

export interface SunburstNode {
  tag: string | null;
  name: string;
  color: string | null;
  count: number;
  share: number;
  children: SunburstNode[];
}

export interface GalleryEntry {
  text: string;
  title: string;
  length: number;
  lanes: GanttLane[];
}

export interface GalleryData {
  project: string;
  entries: GalleryEntry[];
}

export interface MatrixData {
  tag: string;
  radius: number;
  texts: string[];
  scores: number[][];
}

export interface RankEntry {
  text: string;
  score: number;
}

export interface BoardData {
  id: string;
  project: string;
  categories: Record<string, string[]>;
  uncategorized: string[];
}

export interface TrialData {
  id: string;
  target: string;
  candidates: string[];
}

export interface TrialSessionData {
  session: string;
  trials: TrialData[];
}

export interface ProjectSummary {
  id: string;
  name: string;
  texts: number;
  annotations: number;
}

export interface TextData {
  id: string;
  title: string;
  body: string;
  length: number;
}

export interface TagInfo {
  id: string;
  name: string;
  color: string;
  parent: string | null;
}

export interface ProjectDoc {
  id: string;
  name: string;
  texts: { id: string; title: string; body: string }[];
  tagsets: { id: string; name: string; tags: TagInfo[] }[];
  annotations: { id: string; text: string; tag: string; ranges: [number, number][] }[];
}
