/** Pure view models for the scatter plot and the sweep strip.
 * No DOM here; app.ts turns these into SVG. */

import type { FrontDoc, NormalizedDoc, SelectionDoc, SweepDoc } from "./types";
import type { AxesMode } from "./state";

export interface ScatterPoint {
  modelId: string;
  index: number;
  x: number;
  y: number;
  pareto: boolean;
  selected: boolean;
  tooltip: string;
}

export interface ScatterModel {
  points: ScatterPoint[];
  xLabel: string;
  yLabel: string;
  xDomain: [number, number];
  yDomain: [number, number];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): (v: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  return lo === hi ? [lo - 0.5, hi + 0.5] : [lo, hi];
}

function round(v: number, digits = 4): string {
  return Number(v.toPrecision(digits)).toString();
}

/** Tooltip shows the model id, raw values in original units and the
 * percentile ("top-%") values exactly as the service reported them. */
export function tooltipFor(
  modelId: string,
  objectives: string[],
  raw: number[],
  rankValues: number[],
): string {
  const parts = objectives.map((name, j) => {
    const pct = 100 * (rankValues[j] ?? 0);
    return `${name}=${round(raw[j] ?? 0)} (top-${round(pct, 3)}%)`;
  });
  return `${modelId}: ${parts.join(", ")}`;
}

/** The normalized document must be the rank view: its values are the
 * percentile coordinates and feed the top-% tooltips directly. */
export function buildScatterModel(
  rankView: NormalizedDoc,
  front: FrontDoc,
  selection: SelectionDoc | null,
  mode: AxesMode,
  axisX: number,
  axisY: number,
): ScatterModel {
  const paretoSet = new Set(front.indices);
  const coords = mode === "raw" ? rankView.raw_values : rankView.values;
  const label = (j: number) =>
    mode === "raw"
      ? rankView.objectives[j] ?? `objective ${j}`
      : `${rankView.objectives[j] ?? `objective ${j}`} percentile`;

  const points: ScatterPoint[] = rankView.model_ids.map((modelId, i) => {
    const row = coords[i] ?? [];
    return {
      modelId,
      index: i,
      x: row[axisX] ?? 0,
      y: row[axisY] ?? 0,
      pareto: paretoSet.has(i),
      selected: selection !== null && selection.model_index === i,
      tooltip: tooltipFor(
        modelId,
        rankView.objectives,
        rankView.raw_values[i] ?? [],
        rankView.values[i] ?? [],
      ),
    };
  });
  return {
    points,
    xLabel: label(axisX),
    yLabel: label(axisY),
    xDomain: extent(points.map((p) => p.x)),
    yDomain: extent(points.map((p) => p.y)),
  };
}

export interface StripSegment {
  lo: number;
  hi: number;
  modelId: string;
  colorIndex: number;
}

/** Sweep entries as a strip of [0,1] colored by selected model. */
export function buildSweepStrip(sweep: SweepDoc): StripSegment[] {
  const colorOf = new Map<string, number>();
  return sweep.entries.map((e) => {
    if (!colorOf.has(e.model_id)) colorOf.set(e.model_id, colorOf.size);
    return {
      lo: e.alpha_lo,
      hi: e.alpha_hi,
      modelId: e.model_id,
      colorIndex: colorOf.get(e.model_id) ?? 0,
    };
  });
}
