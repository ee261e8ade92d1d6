/** Tag color at reduced opacity, for text highlights over the body. */
export function hexToRgba(hex: string, alpha: number): string {
  const match = /^#?([0-9a-f]{6})$/i.exec(hex.trim());
  if (!match) return `rgba(128, 128, 128, ${alpha})`;
  const value = parseInt(match[1], 16);
  const r = (value >> 16) & 0xff;
  const g = (value >> 8) & 0xff;
  const b = value & 0xff;
  return `rgba(${r}, ${g}, ${b}, ${alpha})`;
}

/** White-to-red ramp matching the backend heatmap: redder = more similar. */
export function rampColor(score: number): string {
  const s = Math.min(Math.max(score, 0), 1);
  const channel = Math.round(255 * (1 - s));
  return `rgb(255, ${channel}, ${channel})`;
}
