import {
  estimateLifetime,
  loadSeries,
  loadSpectrum,
  loadTheoryCurve,
  sidecarNA,
  type QmiSeries,
} from "./artifacts.js";
import type { FigureSpec } from "./spec.js";
import { MARGIN, PALETTE, SvgScene, fmt, makeScale, type Scale } from "./svg.js";

const PLOT_X: [number, number] = [MARGIN.left, 640 - MARGIN.right];
const PLOT_Y: [number, number] = [420 - MARGIN.bottom, MARGIN.top];

/** Normalized QMI (value over its t=0 value), the decay-figure convention. */
function normalized(series: QmiSeries): number[] {
  const base = series.mean[0];
  if (base === undefined || base <= 0) {
    return [...series.mean];
  }
  return series.mean.map((m) => m / base);
}

function axesOnly(title: string, xLabel: string, yLabel: string): string {
  const scene = new SvgScene();
  scene.axes(makeScale([0, 1], PLOT_X), makeScale([0, 1], PLOT_Y), xLabel, yLabel, title);
  return scene.render();
}

function finitePositive(values: number[]): number[] {
  return values.filter((v) => Number.isFinite(v) && v > 0);
}

function domainOf(values: number[], log: boolean): [number, number] {
  const usable = log ? finitePositive(values) : values.filter((v) => Number.isFinite(v));
  if (usable.length === 0) {
    throw new Error(log ? "no positive values for a log axis" : "no finite values to plot");
  }
  return [Math.min(...usable), Math.max(...usable)];
}

function drawSeries(
  scene: SvgScene,
  xScale: Scale,
  yScale: Scale,
  t: number[],
  values: number[],
  color: string,
  dash = "",
  markers = true,
): void {
  const points: Array<[number, number]> = [];
  for (let i = 0; i < t.length; i++) {
    if (yScale.log && values[i] <= 0) {
      continue; // log axis: nonpositive points are not representable
    }
    points.push([xScale(t[i]), yScale(values[i])]);
  }
  scene.polyline(points, color, dash);
  if (markers) {
    for (const [x, y] of points) {
      scene.circle(x, y, 2.5, color);
    }
  }
}

function renderQmiDecay(spec: FigureSpec): string {
  const series = spec.inputs.map(loadSeries).filter((s) => s.t.length > 0);
  const overlays = spec.overlays.map(loadTheoryCurve);
  if (series.length === 0 && overlays.length === 0) {
    return axesOnly("QMI decay", "t (steps)", "QMI / QMI(0)");
  }
  const log = spec.scale === "log";
  const allT: number[] = [];
  const allY: number[] = [];
  const curves: Array<{ label: string; t: number[]; y: number[]; dash: string }> = [];
  for (const s of series) {
    const y = normalized(s);
    curves.push({ label: s.name, t: s.t, y, dash: "" });
    allT.push(...s.t);
    allY.push(...(log ? finitePositive(y) : y));
  }
  for (const o of overlays) {
    const base = o.qmiBits[0] > 0 ? o.qmiBits[0] : 1;
    const y = o.qmiBits.map((v) => v / base);
    curves.push({ label: o.name, t: o.t, y, dash: "5 3" });
    allT.push(...o.t);
    allY.push(...(log ? finitePositive(y) : y));
  }
  const xScale = makeScale(domainOf(allT, false), PLOT_X);
  const yScale = makeScale(domainOf(allY, log), PLOT_Y, log);
  const scene = new SvgScene();
  scene.axes(xScale, yScale, "t (steps)", "QMI / QMI(0)", "QMI decay");
  curves.forEach((curve, i) => {
    drawSeries(scene, xScale, yScale, curve.t, curve.y, PALETTE[i % PALETTE.length], curve.dash, curve.dash === "");
  });
  scene.legend(curves.map((c, i) => ({ label: c.label, color: PALETTE[i % PALETTE.length], dash: c.dash })));
  return scene.render();
}

function renderLifetimeScaling(spec: FigureSpec): string {
  const points: Array<{ nA: number; tau: number }> = [];
  for (const path of spec.inputs) {
    const series = loadSeries(path);
    if (series.t.length === 0) {
      continue;
    }
    const tau = estimateLifetime(series, spec.epsilon);
    if (tau !== null) {
      points.push({ nA: sidecarNA(path), tau });
    }
  }
  const title = `lifetime scaling (epsilon=${fmt(spec.epsilon)})`;
  if (points.length === 0) {
    return axesOnly(title, "N_A (qubits)", "lifetime (steps)");
  }
  points.sort((a, b) => a.nA - b.nA);
  const log = spec.scale === "log";
  const xScale = makeScale(domainOf(points.map((p) => p.nA), false), PLOT_X);
  const yScale = makeScale(domainOf(points.map((p) => p.tau), log), PLOT_Y, log);
  const scene = new SvgScene();
  scene.axes(xScale, yScale, "N_A (qubits)", "lifetime (steps)", title);
  drawSeries(scene, xScale, yScale, points.map((p) => p.nA), points.map((p) => p.tau), PALETTE[0]);
  for (const p of points) {
    scene.text(xScale(p.nA) + 6, yScale(p.tau) - 6, fmt(p.tau, 2));
  }
  return scene.render();
}

function renderSpectrumDisk(spec: FigureSpec): string {
  const data = loadSpectrum(spec.inputs[0]);
  const size = 420;
  const scene = new SvgScene(size, size);
  const cx = size / 2;
  const cy = size / 2;
  const radius = size / 2 - 40;
  scene.text(cx, 20, `channel spectrum: ${data.name}`, "middle");
  scene.line(cx - radius - 10, cy, cx + radius + 10, cy, "#cccccc");
  scene.line(cx, cy - radius - 10, cx, cy + radius + 10, "#cccccc");
  scene.circle(cx, cy, radius, "none", "#222222");
  if (data.guideRadius !== null) {
    scene.circle(cx, cy, radius * data.guideRadius, "none", "#c2452d", "4 3");
    scene.text(cx, size - 12, `guide radius ${fmt(data.guideRadius, 4)}`, "middle", "#c2452d");
  }
  for (let i = 0; i < data.re.length; i++) {
    scene.circle(cx + radius * data.re[i], cy - radius * data.im[i], 3, PALETTE[0]);
  }
  if (data.lambda1Modulus !== null) {
    scene.text(12, size - 12, `|lambda1| = ${fmt(data.lambda1Modulus, 4)}`);
  }
  return scene.render();
}

function renderQ2cGap(spec: FigureSpec): string {
  if (spec.inputs.length !== 2) {
    throw new Error("q2c-gap needs exactly two inputs: conditioned then unconditioned CSV");
  }
  const [cond, unc] = spec.inputs.map(loadSeries);
  if (cond.t.length === 0 && unc.t.length === 0) {
    return axesOnly("Q2C gap", "t (steps)", "classical MI (bits)");
  }
  const log = spec.scale === "log";
  const allY = [...cond.mean, ...unc.mean];
  const xScale = makeScale(domainOf([...cond.t, ...unc.t], false), PLOT_X);
  const yScale = makeScale(domainOf(allY, log), PLOT_Y, log);
  const scene = new SvgScene();
  scene.axes(xScale, yScale, "t (steps)", "classical MI (bits)", "Q2C gap");
  drawSeries(scene, xScale, yScale, cond.t, cond.mean, PALETTE[0]);
  drawSeries(scene, xScale, yScale, unc.t, unc.mean, PALETTE[1]);
  scene.legend([
    { label: `conditioned (${cond.name})`, color: PALETTE[0] },
    { label: `unconditioned (${unc.name})`, color: PALETTE[1] },
  ]);
  return scene.render();
}

function renderTransitionDerivative(spec: FigureSpec): string {
  const series = loadSeries(spec.inputs[0]);
  if (series.t.length < 2) {
    return axesOnly("transition derivative", "t (steps)", "-d(QMI/QMI(0))/dt");
  }
  const y = normalized(series);
  const t: number[] = [];
  const deriv: number[] = [];
  for (let i = 1; i < series.t.length; i++) {
    const dt = series.t[i] - series.t[i - 1];
    t.push(series.t[i]);
    deriv.push((y[i - 1] - y[i]) / dt);
  }
  const xScale = makeScale(domainOf(t, false), PLOT_X);
  const yScale = makeScale(domainOf(deriv, false), PLOT_Y);
  const scene = new SvgScene();
  scene.axes(xScale, yScale, "t (steps)", "-d(QMI/QMI(0))/dt", "transition derivative");
  drawSeries(scene, xScale, yScale, t, deriv, PALETTE[0]);
  const peak = deriv.indexOf(Math.max(...deriv));
  scene.text(xScale(t[peak]) + 6, yScale(deriv[peak]) - 6, `peak t=${fmt(t[peak])}`);
  return scene.render();
}

export function renderFigure(spec: FigureSpec): string {
  switch (spec.kind) {
    case "qmi-decay":
      return renderQmiDecay(spec);
    case "lifetime-scaling":
      return renderLifetimeScaling(spec);
    case "spectrum-disk":
      return renderSpectrumDisk(spec);
    case "q2c-gap":
      return renderQ2cGap(spec);
    case "transition-derivative":
      return renderTransitionDerivative(spec);
  }
}
