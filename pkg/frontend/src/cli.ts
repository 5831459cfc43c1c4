#!/usr/bin/env node
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";
import { pathToFileURL } from "node:url";
import { renderFigure } from "./figures.js";
import { parseFigureSpec } from "./spec.js";

const USAGE = "usage: plots render <figure_spec.json>";

export function main(argv: string[]): number {
  const [command, specPath] = argv;
  if (command !== "render" || specPath === undefined) {
    console.error(USAGE);
    return 2;
  }
  try {
    const raw = JSON.parse(readFileSync(specPath, "utf8"));
    const spec = parseFigureSpec(raw);
    const svg = renderFigure(spec);
    mkdirSync(dirname(spec.out), { recursive: true });
    writeFileSync(spec.out, svg);
    console.log(spec.out);
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
