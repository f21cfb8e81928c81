// Dependency-free SVG bar charts for count histograms and frequency
// (count / bin width) overlays, mirroring how the study presents utility.

import { escapeHtml } from "./format";
import type { Histogram } from "./types";

const WIDTH = 420;
const HEIGHT = 140;
const GAP = 2;

interface Bar {
  label: string;
  count: number;
  frequency: number; // count / bin width for numeric bins
}

function bars(histogram: Histogram): Bar[] {
  if (histogram.kind === "categorical") {
    return histogram.categories.map((c) => ({
      label: c.value,
      count: c.count,
      frequency: c.count,
    }));
  }
  return histogram.bins.map((b) => {
    const lo = Number(b.lo);
    const hi = Number(b.hi);
    const width = Number.isFinite(lo) && Number.isFinite(hi) && hi > lo ? hi - lo : 1;
    return {
      label: `[${b.lo}, ${b.hi})`,
      count: b.count,
      frequency: b.count / width,
    };
  });
}

export function histogramSvg(
  histogram: Histogram,
  mode: "count" | "frequency" = "count",
): string {
  const data = bars(histogram);
  if (data.length === 0) {
    return `<p class="muted">no non-missing values</p>`;
  }
  const values = data.map((b) => (mode === "count" ? b.count : b.frequency));
  const max = Math.max(...values, 1e-9);
  const barWidth = (WIDTH - GAP * (data.length - 1)) / data.length;
  const rects = data
    .map((bar, i) => {
      const value = mode === "count" ? bar.count : bar.frequency;
      const h = (value / max) * (HEIGHT - 18);
      const x = i * (barWidth + GAP);
      const y = HEIGHT - h;
      const title = `${escapeHtml(bar.label)}: ${bar.count}`;
      return `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${barWidth.toFixed(1)}" height="${h.toFixed(1)}"><title>${title}</title></rect>`;
    })
    .join("");
  return (
    `<svg class="hist" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" ` +
    `aria-label="histogram (${mode})">${rects}</svg>` +
    `<p class="muted">missing: ${histogram.missing}</p>`
  );
}

export function kHistogramSvg(kHistogram: Record<string, number>): string {
  const entries = Object.entries(kHistogram)
    .map(([k, v]) => [Number(k), v] as const)
    .sort((a, b) => a[0] - b[0])
    .slice(0, 24);
  if (entries.length === 0) return "";
  const max = Math.max(...entries.map(([, v]) => v));
  const barWidth = (WIDTH - GAP * (entries.length - 1)) / entries.length;
  const rects = entries
    .map(([k, v], i) => {
      const h = (v / max) * (HEIGHT - 18);
      const x = i * (barWidth + GAP);
      return (
        `<rect x="${x.toFixed(1)}" y="${(HEIGHT - h).toFixed(1)}" ` +
        `width="${barWidth.toFixed(1)}" height="${h.toFixed(1)}">` +
        `<title>k=${k}: ${v} classes</title></rect>`
      );
    })
    .join("");
  return `<svg class="hist" viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img" aria-label="class sizes">${rects}</svg>`;
}
