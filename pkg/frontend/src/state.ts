/** Session state: everything needed to reproduce what the user sees.
 * Reconstructible from the URL fragment (see urlstate.ts); the last
 * selection is display cache and is not encoded. */

import type { SelectionDoc } from "./types";
import type { SelectParams } from "./api";

export type AxesMode = "raw" | "cdf";

export interface SessionState {
  handleId: string | null;
  objectives: string[];
  p: number | "inf";
  /** Either an explicit weight vector or an alpha on a focus objective. */
  weights: number[] | null;
  alpha: number | null;
  focusObjective: number;
  constraints: string[];
  axesMode: AxesMode;
  axisX: number;
  axisY: number;
  lastSelection: SelectionDoc | null;
}

export function defaultState(): SessionState {
  return {
    handleId: null,
    objectives: [],
    p: "inf",
    weights: null,
    alpha: 0.5,
    focusObjective: 0,
    constraints: [],
    axesMode: "raw",
    axisX: 0,
    axisY: 1,
    lastSelection: null,
  };
}

/** Rescale to sum exactly 1; an all-zero vector becomes uniform. */
export function normalizeWeights(weights: number[]): number[] {
  const clipped = weights.map((w) => (Number.isFinite(w) && w > 0 ? w : 0));
  const total = clipped.reduce((a, b) => a + b, 0);
  if (total <= 0) {
    return weights.map(() => 1 / weights.length);
  }
  return clipped.map((w) => w / total);
}

/** The alpha template: alpha on the focus objective, remainder spread evenly. */
export function weightsFromAlpha(alpha: number, k: number, focus: number): number[] {
  if (k === 1) return [1];
  const rest = (1 - alpha) / (k - 1);
  const w = new Array<number>(k).fill(rest);
  w[focus] = alpha;
  return w;
}

export type StateChange = Partial<
  Pick<
    SessionState,
    | "p"
    | "weights"
    | "alpha"
    | "focusObjective"
    | "constraints"
    | "axesMode"
    | "axisX"
    | "axisY"
  >
>;

/** Pure preference update; weight vectors are re-normalized to sum to 1,
 * and setting alpha clears explicit weights (and vice versa). */
export function applyPreferences(state: SessionState, change: StateChange): SessionState {
  const next: SessionState = { ...state, ...change };
  if (change.weights !== undefined && change.weights !== null) {
    next.weights = normalizeWeights(change.weights);
    next.alpha = null;
  } else if (change.alpha !== undefined && change.alpha !== null) {
    next.weights = null;
    next.alpha = Math.min(1, Math.max(0, change.alpha));
  }
  return next;
}

/** Request body for /select equivalent to this state. */
export function selectParams(state: SessionState): SelectParams {
  const params: SelectParams = { method: "rank", p: state.p };
  if (state.weights) {
    params.weights = state.weights;
  } else {
    params.alpha = state.alpha ?? 0.5;
    params.focus_objective = state.focusObjective;
  }
  if (state.constraints.length) params.constraints = [...state.constraints];
  return params;
}
