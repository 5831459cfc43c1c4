import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { estimateLifetime, loadSeries, loadSpectrum } from "../src/artifacts.js";
import { renderFigure } from "../src/figures.js";
import { parseFigureSpec } from "../src/spec.js";
import { fmt, makeScale } from "../src/svg.js";

const FIXTURES = join(__dirname, "fixtures");
const fixture = (name: string) => join(FIXTURES, name);

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "qilab-plots-"));
}

describe("artifact loading", () => {
  it("parses a harness series CSV", () => {
    const series = loadSeries(fixture("decay.csv"));
    expect(series.t[0]).toBe(0);
    expect(series.mean[0]).toBeCloseTo(16.0);
    expect(series.nTraj).toBe(5);
    expect(series.entropyKind).toBe("von-neumann");
  });

  it("accepts an empty series body", () => {
    const series = loadSeries(fixture("empty.csv"));
    expect(series.t).toHaveLength(0);
  });

  it("rejects a wrong header with a descriptive error", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "time,qmi\n0,1\n");
    expect(() => loadSeries(bad)).toThrow(/expected header/);
  });

  it("rejects non-numeric values", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "t,mean_qmi_bits,stderr,n_traj,entropy_kind\n0,oops,0,1,von-neumann\n");
    expect(() => loadSeries(bad)).toThrow(/non-numeric/);
  });

  it("derives the spectrum guide radius from sidecar metadata", () => {
    const spectrum = loadSpectrum(fixture("disk.csv"));
    expect(spectrum.re.length).toBe(16);
    // pure-zero refresh with n_b=2: bulk disk radius 1/sqrt(4)
    expect(spectrum.guideRadius).toBeCloseTo(0.5);
    expect(spectrum.lambda1Modulus).toBeGreaterThan(0);
  });
});

describe("lifetime estimation", () => {
  it("interpolates the crossing linearly", () => {
    const series = {
      name: "x",
      t: [0, 1, 2, 3],
      mean: [8, 4, 2, 1],
      stderr: [0, 0, 0, 0],
      nTraj: 1,
      entropyKind: "von-neumann",
    };
    expect(estimateLifetime(series, 0.5)).toBeCloseTo(1.0);
    expect(estimateLifetime(series, 0.25)).toBeCloseTo(2.0);
  });

  it("returns null when censored", () => {
    const series = {
      name: "x",
      t: [0, 1],
      mean: [8, 7],
      stderr: [0, 0],
      nTraj: 1,
      entropyKind: "von-neumann",
    };
    expect(estimateLifetime(series, 0.25)).toBeNull();
  });
});

describe("svg primitives", () => {
  it("formats numbers deterministically", () => {
    expect(fmt(1.23456)).toBe("1.235");
    expect(fmt(2)).toBe("2");
    expect(fmt(-0)).toBe("0");
    expect(fmt(0.5, 1)).toBe("0.5");
  });

  it("builds linear and log scales with sensible ticks", () => {
    const lin = makeScale([0, 10], [0, 100]);
    expect(lin(5)).toBeCloseTo(50);
    expect(lin.ticks).toContain(0);
    const log = makeScale([0.01, 1], [0, 100], true);
    expect(log(0.1)).toBeCloseTo(50);
    expect(log.ticks).toEqual([0.01, 0.1, 1]);
    expect(() => makeScale([0, 1], [0, 1], true)).toThrow(/positive/);
  });
});

describe("figure spec validation", () => {
  it("rejects unknown kinds", () => {
    expect(() =>
      parseFigureSpec({ kind: "pie", inputs: [fixture("decay.csv")], out: "x.svg" }),
    ).toThrow();
  });

  it("rejects missing input files", () => {
    expect(() =>
      parseFigureSpec({ kind: "qmi-decay", inputs: ["/no/such.csv"], out: "x.svg" }),
    ).toThrow(/not found/);
  });
});

describe("figure rendering", () => {
  const kinds: Array<[string, object]> = [
    [
      "qmi-decay",
      {
        kind: "qmi-decay",
        inputs: [fixture("decay.csv")],
        overlays: [fixture("decay-theory.csv")],
        scale: "log",
        out: "decay.svg",
      },
    ],
    [
      "lifetime-scaling",
      {
        kind: "lifetime-scaling",
        inputs: [fixture("life-4.csv"), fixture("life-6.csv"), fixture("life-8.csv")],
        out: "life.svg",
      },
    ],
    [
      "spectrum-disk",
      { kind: "spectrum-disk", inputs: [fixture("disk.csv")], out: "disk.svg" },
    ],
    [
      "q2c-gap",
      {
        kind: "q2c-gap",
        inputs: [fixture("q2c-cond.csv"), fixture("q2c-unc.csv")],
        scale: "log",
        out: "q2c.svg",
      },
    ],
    [
      "transition-derivative",
      { kind: "transition-derivative", inputs: [fixture("ramp.csv")], out: "ramp.svg" },
    ],
  ];

  it.each(kinds)("renders %s byte-stably", (_name, raw) => {
    const spec = parseFigureSpec(raw);
    const first = renderFigure(spec);
    const second = renderFigure(spec);
    expect(first.startsWith("<svg")).toBe(true);
    expect(first).toContain("</svg>");
    expect(second).toBe(first);
  });

  it("renders an axes-only figure for an empty series", () => {
    const spec = parseFigureSpec({
      kind: "qmi-decay",
      inputs: [fixture("empty.csv")],
      out: "empty.svg",
    });
    const svg = renderFigure(spec);
    expect(svg.startsWith("<svg")).toBe(true);
    expect(svg).not.toContain("polyline");
  });

  it("q2c-gap insists on a conditioned/unconditioned pair", () => {
    const spec = parseFigureSpec({
      kind: "q2c-gap",
      inputs: [fixture("q2c-cond.csv")],
      out: "x.svg",
    });
    expect(() => renderFigure(spec)).toThrow(/exactly two/);
  });
});

describe("cli", () => {
  it("renders a spec file to the requested output", async () => {
    const { main } = await import("../src/cli.js");
    const dir = tmp();
    const out = join(dir, "fig.svg");
    const specPath = join(dir, "spec.json");
    writeFileSync(
      specPath,
      JSON.stringify({ kind: "spectrum-disk", inputs: [fixture("disk.csv")], out }),
    );
    expect(main(["render", specPath])).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("guide radius");
    // byte stability across CLI invocations
    const out2 = join(dir, "fig2.svg");
    writeFileSync(
      specPath,
      JSON.stringify({ kind: "spectrum-disk", inputs: [fixture("disk.csv")], out: out2 }),
    );
    expect(main(["render", specPath])).toBe(0);
    expect(readFileSync(out2, "utf8")).toBe(svg);
  });

  it("exits 2 on usage and spec errors", async () => {
    const { main } = await import("../src/cli.js");
    expect(main(["draw"])).toBe(2);
    expect(main(["render", "/no/such/spec.json"])).toBe(2);
  });
});
