// The service measures every offset in Unicode code points; JS strings
// index UTF-16 units. All slicing goes through here so astral characters
// can never shear a highlight boundary.

export function toCodePoints(s: string): string[] {
  return Array.from(s);
}

export function codePointLength(s: string): number {
  return toCodePoints(s).length;
}

export function sliceCodePoints(s: string, start: number, end?: number): string {
  return toCodePoints(s).slice(start, end).join("");
}
