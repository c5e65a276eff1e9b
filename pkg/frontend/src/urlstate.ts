/** Shareable-URL encoding of the session state.
 * Number round-trips are exact: JS stringifies doubles with the shortest
 * representation that parses back to the same value. */

import { defaultState, type SessionState } from "./state";

export function encodeState(state: SessionState): string {
  const params = new URLSearchParams();
  if (state.handleId) params.set("pop", state.handleId);
  params.set("p", String(state.p));
  if (state.weights) {
    params.set("w", state.weights.map(String).join(","));
  } else if (state.alpha !== null) {
    params.set("a", String(state.alpha));
    params.set("focus", String(state.focusObjective));
  }
  for (const c of state.constraints) params.append("c", c);
  params.set("axes", state.axesMode);
  params.set("x", String(state.axisX));
  params.set("y", String(state.axisY));
  return "#" + params.toString();
}

export function decodeState(fragment: string): SessionState {
  const state = defaultState();
  const raw = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  if (!raw) return state;
  const params = new URLSearchParams(raw);

  state.handleId = params.get("pop");
  const p = params.get("p");
  if (p === "inf") state.p = "inf";
  else if (p !== null && Number.isFinite(Number(p))) state.p = Number(p);

  const w = params.get("w");
  const a = params.get("a");
  if (w !== null) {
    state.weights = w.split(",").map(Number);
    state.alpha = null;
  } else if (a !== null) {
    state.alpha = Number(a);
    state.weights = null;
  }
  const focus = params.get("focus");
  if (focus !== null) state.focusObjective = Number(focus);

  state.constraints = params.getAll("c");
  const axes = params.get("axes");
  if (axes === "raw" || axes === "cdf") state.axesMode = axes;
  const x = params.get("x");
  const y = params.get("y");
  if (x !== null) state.axisX = Number(x);
  if (y !== null) state.axisY = Number(y);
  return state;
}
