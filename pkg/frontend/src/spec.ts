import { existsSync } from "node:fs";
import { z } from "zod";

export const FIGURE_KINDS = [
  "qmi-decay",
  "lifetime-scaling",
  "spectrum-disk",
  "q2c-gap",
  "transition-derivative",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export const figureSpecSchema = z.object({
  kind: z.enum(FIGURE_KINDS),
  /** Input CSV paths in harness format (series or spectrum). */
  inputs: z.array(z.string()).min(1),
  /** Optional theory-curve CSVs (t,qmi_bits,valid) drawn dashed. */
  overlays: z.array(z.string()).default([]),
  /** Vertical axis scaling for decay-style figures. */
  scale: z.enum(["linear", "log"]).default("linear"),
  /** Lifetime threshold fraction for lifetime-scaling figures. */
  epsilon: z.number().gt(0).lt(1).default(0.25),
  /** Output SVG path. */
  out: z.string(),
});

export type FigureSpec = z.infer<typeof figureSpecSchema>;

export function parseFigureSpec(raw: unknown): FigureSpec {
  const spec = figureSpecSchema.parse(raw);
  for (const path of [...spec.inputs, ...spec.overlays]) {
    if (!existsSync(path)) {
      throw new Error(`input file not found: ${path}`);
    }
  }
  return spec;
}
