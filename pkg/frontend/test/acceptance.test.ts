/**
 * End-to-end figure acceptance: every figure kind renders from harness
 * artifacts through the CLI entry point, and re-rendering is byte-stable.
 */
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { expect, it } from "vitest";

import { main } from "../src/cli.js";
import { FIGURE_KINDS } from "../src/spec.js";

const FIXTURES = join(__dirname, "fixtures");
const fixture = (name: string) => join(FIXTURES, name);

const SPECS: Record<string, object> = {
  "qmi-decay": {
    kind: "qmi-decay",
    inputs: [fixture("decay.csv")],
    overlays: [fixture("decay-theory.csv")],
    scale: "log",
  },
  "lifetime-scaling": {
    kind: "lifetime-scaling",
    inputs: [fixture("life-4.csv"), fixture("life-6.csv"), fixture("life-8.csv")],
  },
  "spectrum-disk": {
    kind: "spectrum-disk",
    inputs: [fixture("disk.csv")],
  },
  "q2c-gap": {
    kind: "q2c-gap",
    inputs: [fixture("q2c-cond.csv"), fixture("q2c-unc.csv")],
    scale: "log",
  },
  "transition-derivative": {
    kind: "transition-derivative",
    inputs: [fixture("ramp.csv")],
  },
};

it("AC13: all five figure kinds render via the CLI, byte-stable", () => {
  const dir = mkdtempSync(join(tmpdir(), "qilab-plots-ac13-"));
  for (const kind of FIGURE_KINDS) {
    const renders: string[] = [];
    for (const pass of [1, 2]) {
      const out = join(dir, `${kind}-${pass}.svg`);
      const specPath = join(dir, `${kind}-${pass}.json`);
      writeFileSync(specPath, JSON.stringify({ ...SPECS[kind], out }));
      expect(main(["render", specPath]), `render ${kind}`).toBe(0);
      renders.push(readFileSync(out, "utf8"));
    }
    expect(renders[1], `${kind} byte stability`).toBe(renders[0]);
    expect(renders[0].startsWith("<svg")).toBe(true);
  }
  console.log("AC13: PASS — five figure kinds rendered byte-stably via `plots render`");
});
