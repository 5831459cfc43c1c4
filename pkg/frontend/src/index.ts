export {
  estimateLifetime,
  loadSeries,
  loadSidecar,
  loadSpectrum,
  loadTheoryCurve,
  sidecarNA,
} from "./artifacts.js";
export { renderFigure } from "./figures.js";
export { FIGURE_KINDS, figureSpecSchema, parseFigureSpec } from "./spec.js";
export { SvgScene, fmt, makeScale } from "./svg.js";
