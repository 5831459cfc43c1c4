/**
 * Minimal deterministic SVG plotting.
 *
 * Everything is emitted from pure functions of the input data with fixed
 * styles, fixed number formatting, and no timestamps, so identical inputs
 * produce byte-identical files.
 */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 28, right: 20, bottom: 44, left: 64 };

export const PALETTE = ["#1f4e8c", "#c2452d", "#2d7a3a", "#8040a0", "#b0802a", "#3a8f8f"];

/** Fixed-precision coordinate/label formatting (trailing zeros trimmed). */
export function fmt(x: number, digits = 3): string {
  if (!Number.isFinite(x)) {
    throw new Error(`cannot format non-finite value ${x}`);
  }
  if (Object.is(x, -0)) {
    x = 0;
  }
  const fixed = x.toFixed(digits);
  return fixed.includes(".") ? fixed.replace(/0+$/, "").replace(/\.$/, "") : fixed;
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
  ticks: number[];
  log: boolean;
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const step0 = span / count;
  const mag = 10 ** Math.floor(Math.log10(step0));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * mag);
  const step = candidates.find((s) => span / s <= count) ?? candidates[candidates.length - 1];
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); 10 ** e <= hi * (1 + 1e-9); e++) {
    ticks.push(10 ** e);
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

export function makeScale(
  domain: [number, number],
  range: [number, number],
  log = false,
): Scale {
  let [lo, hi] = domain;
  if (log && lo <= 0) {
    throw new Error("log scale needs a positive domain");
  }
  if (lo === hi) {
    // degenerate domain: pad so the single value sits mid-range
    [lo, hi] = log ? [lo / 2, hi * 2] : [lo - 1, hi + 1];
  }
  const [r0, r1] = range;
  const t0 = log ? Math.log10(lo) : lo;
  const t1 = log ? Math.log10(hi) : hi;
  const scale = ((value: number) => {
    const t = log ? Math.log10(value) : value;
    return r0 + ((t - t0) / (t1 - t0)) * (r1 - r0);
  }) as Scale;
  scale.domain = [lo, hi];
  scale.ticks = log ? logTicks(lo, hi) : niceTicks(lo, hi);
  scale.log = log;
  return scale;
}

export class SvgScene {
  private parts: string[] = [];

  constructor(
    readonly width = WIDTH,
    readonly height = HEIGHT,
  ) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="monospace" font-size="11">`,
      `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    );
  }

  raw(element: string): void {
    this.parts.push(element);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const dashAttr = dash === "" ? "" : ` stroke-dasharray="${dash}"`;
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${dashAttr}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, dash = ""): void {
    if (points.length === 0) {
      return;
    }
    const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const dashAttr = dash === "" ? "" : ` stroke-dasharray="${dash}"`;
    this.parts.push(
      `<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="1.5"${dashAttr}/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string, stroke = "none", dash = ""): void {
    const strokeAttr =
      stroke === "none" ? "" : ` stroke="${stroke}" stroke-width="1"`;
    const dashAttr = dash === "" ? "" : ` stroke-dasharray="${dash}"`;
    this.parts.push(
      `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"${strokeAttr}${dashAttr}/>`,
    );
  }

  text(x: number, y: number, content: string, anchor = "start", fill = "#222222"): void {
    const escaped = content
      .replace(/&/g, "&amp;")
      .replace(/</g, "&lt;")
      .replace(/>/g, "&gt;");
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" fill="${fill}">${escaped}</text>`,
    );
  }

  /** Frame, ticks, tick labels, and axis titles for a cartesian plot. */
  axes(xScale: Scale, yScale: Scale, xLabel: string, yLabel: string, title: string): void {
    const { top, right, bottom, left } = MARGIN;
    const x0 = left;
    const x1 = this.width - right;
    const y0 = this.height - bottom;
    const y1 = top;
    this.line(x0, y0, x1, y0, "#222222");
    this.line(x0, y0, x0, y1, "#222222");
    for (const tick of xScale.ticks) {
      const x = xScale(tick);
      this.line(x, y0, x, y0 + 4, "#222222");
      this.text(x, y0 + 16, fmt(tick, 4), "middle");
    }
    for (const tick of yScale.ticks) {
      const y = yScale(tick);
      this.line(x0 - 4, y, x0, y, "#222222");
      this.text(x0 - 7, y + 3.5, yScale.log ? `1e${fmt(Math.log10(tick), 0)}` : fmt(tick, 4), "end");
    }
    this.text((x0 + x1) / 2, this.height - 10, xLabel, "middle");
    this.raw(
      `<text x="16" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" fill="#222222" ` +
        `transform="rotate(-90 16 ${fmt((y0 + y1) / 2)})">${yLabel}</text>`,
    );
    this.text((x0 + x1) / 2, 16, title, "middle");
  }

  legend(entries: Array<{ label: string; color: string; dash?: string }>): void {
    const x = this.width - MARGIN.right - 170;
    entries.forEach((entry, i) => {
      const y = MARGIN.top + 14 + 16 * i;
      this.line(x, y - 4, x + 22, y - 4, entry.color, 1.5, entry.dash ?? "");
      this.text(x + 28, y, entry.label);
    });
  }

  render(): string {
    return [...this.parts, "</svg>", ""].join("\n");
  }
}
