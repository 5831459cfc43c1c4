import { existsSync, readFileSync } from "node:fs";
import Papa from "papaparse";

export interface QmiSeries {
  name: string;
  t: number[];
  mean: number[];
  stderr: number[];
  nTraj: number;
  entropyKind: string;
}

export interface TheoryCurve {
  name: string;
  t: number[];
  qmiBits: number[];
  valid: boolean[];
}

export interface SpectrumData {
  name: string;
  re: number[];
  im: number[];
  modulus: number[];
  /** Guide-circle radius from the summary sidecar, when derivable. */
  guideRadius: number | null;
  lambda1Modulus: number | null;
}

const SERIES_HEADER = ["t", "mean_qmi_bits", "stderr", "n_traj", "entropy_kind"];
const THEORY_HEADER = ["t", "qmi_bits", "valid"];
const SPECTRUM_HEADER = ["re", "im", "modulus"];

function baseName(path: string): string {
  const file = path.split("/").pop() ?? path;
  return file.replace(/\.csv$/, "");
}

function parseCsv(path: string, expectedHeader: string[]): string[][] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new Error(`${path}: ${parsed.errors[0].message}`);
  }
  const rows = parsed.data;
  const header = rows[0] ?? [];
  if (header.join(",") !== expectedHeader.join(",")) {
    throw new Error(
      `${path}: expected header "${expectedHeader.join(",")}", got "${header.join(",")}"`,
    );
  }
  return rows.slice(1);
}

function toNumber(path: string, field: string): number {
  const value = Number(field);
  if (!Number.isFinite(value)) {
    throw new Error(`${path}: non-numeric value "${field}"`);
  }
  return value;
}

/** Harness QMI series CSV; an empty body yields an empty (renderable) series. */
export function loadSeries(path: string): QmiSeries {
  const rows = parseCsv(path, SERIES_HEADER);
  return {
    name: baseName(path),
    t: rows.map((r) => toNumber(path, r[0])),
    mean: rows.map((r) => toNumber(path, r[1])),
    stderr: rows.map((r) => toNumber(path, r[2])),
    nTraj: rows.length > 0 ? toNumber(path, rows[0][3]) : 0,
    entropyKind: rows.length > 0 ? rows[0][4] : "",
  };
}

/** Theory-curve CSV as written by the `theory` subcommand. */
export function loadTheoryCurve(path: string): TheoryCurve {
  const rows = parseCsv(path, THEORY_HEADER);
  return {
    name: baseName(path),
    t: rows.map((r) => toNumber(path, r[0])),
    qmiBits: rows.map((r) => toNumber(path, r[1])),
    valid: rows.map((r) => r[2] === "true"),
  };
}

function sidecarPath(csvPath: string): string {
  return csvPath.replace(/\.csv$/, ".json");
}

/** JSON sidecar written next to a series CSV; null when absent. */
export function loadSidecar(csvPath: string): Record<string, unknown> | null {
  const path = sidecarPath(csvPath);
  if (!existsSync(path)) {
    return null;
  }
  return JSON.parse(readFileSync(path, "utf8")) as Record<string, unknown>;
}

/** Register size N_A recorded in a series sidecar (for lifetime scaling). */
export function sidecarNA(csvPath: string): number {
  const sidecar = loadSidecar(csvPath);
  const spec = sidecar?.spec as Record<string, unknown> | undefined;
  const nA = spec?.n_a;
  if (typeof nA !== "number") {
    throw new Error(`${sidecarPath(csvPath)}: sidecar with spec.n_a required`);
  }
  return nA;
}

/** Spectrum CSV plus its summary sidecar with the disk-radius metadata. */
export function loadSpectrum(path: string): SpectrumData {
  const rows = parseCsv(path, SPECTRUM_HEADER);
  const summary = loadSidecar(path);
  let guideRadius: number | null = null;
  let lambda1Modulus: number | null = null;
  if (summary !== null) {
    const lam = summary.lambda1_modulus;
    if (typeof lam === "number") {
      lambda1Modulus = lam;
    }
    const channel = (summary.metadata as Record<string, unknown> | undefined)
      ?.channel as Record<string, unknown> | undefined;
    if (typeof channel?.n_b === "number") {
      const dB = 2 ** channel.n_b;
      // fully-mixed refresh tightens the bulk disk from 1/sqrt(d_B) to 1/d_B
      guideRadius = channel.reset === "fully-mixed" ? 1 / dB : 1 / Math.sqrt(dB);
    }
  }
  return {
    name: baseName(path),
    re: rows.map((r) => toNumber(path, r[0])),
    im: rows.map((r) => toNumber(path, r[1])),
    modulus: rows.map((r) => toNumber(path, r[2])),
    guideRadius,
    lambda1Modulus,
  };
}

/** First time the series falls to fraction epsilon of its initial value. */
export function estimateLifetime(series: QmiSeries, epsilon: number): number | null {
  if (series.t.length < 2 || series.mean[0] <= 0) {
    return null;
  }
  const threshold = epsilon * series.mean[0];
  for (let i = 1; i < series.t.length; i++) {
    if (series.mean[i] <= threshold) {
      const prev = series.mean[i - 1];
      const frac = prev === series.mean[i] ? 0 : (prev - threshold) / (prev - series.mean[i]);
      return series.t[i - 1] + frac * (series.t[i] - series.t[i - 1]);
    }
  }
  return null; // censored: never crossed within the horizon
}
