/** Browser wiring: controls -> scheduler -> service -> scatter/strip SVG.
 * All displayed selections come from recorded service responses; this
 * module only renders them. */

import { ApiClient, ServiceError } from "./api";
import {
  applyPreferences,
  defaultState,
  selectParams,
  weightsFromAlpha,
  type SessionState,
  type StateChange,
} from "./state";
import { decodeState, encodeState } from "./urlstate";
import { PreferenceScheduler } from "./scheduler";
import { buildScatterModel, buildSweepStrip, linearScale } from "./scatter";
import type { FrontDoc, NormalizedDoc, SelectionDoc, SweepDoc } from "./types";

const COLORS = [
  "#4363d8", "#e6194b", "#3cb44b", "#f58231", "#911eb4",
  "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080",
];

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 420;
const MARGIN = 42;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export class App {
  state: SessionState = defaultState();
  private rankView: NormalizedDoc | null = null;
  private front: FrontDoc | null = null;
  private sweep: SweepDoc | null = null;
  private readonly scheduler: PreferenceScheduler<SessionState, SelectionDoc>;

  constructor(private readonly api: ApiClient) {
    this.scheduler = new PreferenceScheduler(
      (state) => {
        if (!state.handleId) return Promise.reject(new Error("no population loaded"));
        return this.api.select(state.handleId, selectParams(state));
      },
      {
        onResult: (state, doc) => {
          this.state = { ...state, lastSelection: doc };
          this.writeUrl();
          this.renderAll();
          this.setStatus("");
        },
        onError: (_state, error, retry) => this.showError(error, retry),
      },
      150,
    );
  }

  async start(): Promise<void> {
    const fromUrl = decodeState(window.location.hash);
    this.state = { ...fromUrl, lastSelection: null };

    el<HTMLInputElement>("alpha").addEventListener("input", (e) => {
      const alpha = Number((e.target as HTMLInputElement).value) / 1000;
      this.change({ alpha });
    });
    el<HTMLSelectElement>("p-select").addEventListener("change", (e) => {
      const v = (e.target as HTMLSelectElement).value;
      this.change({ p: v === "inf" ? "inf" : Number(v) });
    });
    el<HTMLSelectElement>("axes-mode").addEventListener("change", (e) => {
      this.change({ axesMode: (e.target as HTMLSelectElement).value as "raw" | "cdf" });
    });
    el<HTMLInputElement>("constraint").addEventListener("change", (e) => {
      const text = (e.target as HTMLInputElement).value.trim();
      this.change({ constraints: text ? text.split(";").map((s) => s.trim()) : [] });
    });
    el<HTMLInputElement>("csv-file").addEventListener("change", async (e) => {
      const file = (e.target as HTMLInputElement).files?.[0];
      if (file) await this.upload(await file.text());
    });
    el<HTMLButtonElement>("retry").addEventListener("click", () => this.scheduler.retry());

    if (this.state.handleId) {
      try {
        await this.loadPopulationViews(this.state.handleId);
        this.scheduler.flush(this.state);
      } catch (err) {
        this.showError(err, () => window.location.reload());
      }
    }
    this.syncControls();
  }

  private change(change: StateChange): void {
    this.state = applyPreferences(this.state, change);
    this.writeUrl();
    this.syncControls();
    this.scheduler.submit(this.state);
    this.refreshSweep();
  }

  private async upload(csvText: string): Promise<void> {
    try {
      const created = await this.api.createPopulation(csvText);
      this.state = {
        ...defaultState(),
        handleId: created.id,
        objectives: created.objectives,
      };
      await this.loadPopulationViews(created.id);
      this.writeUrl();
      this.syncControls();
      this.scheduler.flush(this.state);
    } catch (err) {
      this.showError(err, () => void this.upload(csvText));
    }
  }

  private async loadPopulationViews(id: string): Promise<void> {
    const [rankView, front] = await Promise.all([
      this.api.normalized(id, "rank"),
      this.api.front(id),
    ]);
    this.rankView = rankView;
    this.front = front;
    this.state = { ...this.state, objectives: rankView.objectives };
    await this.refreshSweep();
  }

  private async refreshSweep(): Promise<void> {
    if (!this.state.handleId) return;
    try {
      this.sweep = await this.api.sweep(this.state.handleId, {
        p: this.state.p,
        grid: 101,
        focus_objective: this.state.focusObjective,
        constraints: this.state.constraints,
      });
      this.renderStrip();
    } catch {
      this.sweep = null; // strip is an extra; selection errors surface elsewhere
    }
  }

  private writeUrl(): void {
    window.history.replaceState(null, "", encodeState(this.state));
  }

  private syncControls(): void {
    const k = Math.max(this.state.objectives.length, 2);
    const weights =
      this.state.weights ??
      weightsFromAlpha(this.state.alpha ?? 0.5, k, this.state.focusObjective);
    el<HTMLInputElement>("alpha").value = String(
      Math.round((this.state.alpha ?? weights[this.state.focusObjective] ?? 0.5) * 1000),
    );
    el<HTMLSelectElement>("p-select").value = String(this.state.p);
    el<HTMLSelectElement>("axes-mode").value = this.state.axesMode;
    el<HTMLSpanElement>("weights-view").textContent = weights
      .map((w, j) => `${this.state.objectives[j] ?? "obj" + j}:${w.toFixed(3)}`)
      .join("  ");
  }

  private setStatus(text: string, isError = false): void {
    const node = el<HTMLSpanElement>("status");
    node.textContent = text;
    node.className = isError ? "error" : "";
    el<HTMLButtonElement>("retry").style.display = isError ? "inline" : "none";
  }

  private showError(error: unknown, _retry: () => void): void {
    const message =
      error instanceof ServiceError ? `${error.code}: ${error.message}` : String(error);
    this.setStatus(message, true);
  }

  private renderAll(): void {
    this.renderScatter();
    this.renderStrip();
    this.renderSelection();
  }

  private renderSelection(): void {
    const sel = this.state.lastSelection;
    const node = el<HTMLDivElement>("selection-view");
    if (!sel) {
      node.textContent = "no selection yet";
      return;
    }
    const rows = sel.objectives.map(
      (name, j) =>
        `${name}: ${sel.raw_values[j]} (top-${(sel.top_percent[j] ?? 0).toFixed(2)}%)`,
    );
    node.textContent =
      `${sel.model_id} — criterion ${sel.criterion_value.toPrecision(6)}` +
      (sel.is_pareto_optimal ? "" : " (not Pareto-optimal)") +
      " | " +
      rows.join(" | ");
  }

  private renderScatter(): void {
    if (!this.rankView || !this.front) return;
    const model = buildScatterModel(
      this.rankView,
      this.front,
      this.state.lastSelection,
      this.state.axesMode,
      this.state.axisX,
      this.state.axisY,
    );
    const svg = el<HTMLElement>("scatter") as unknown as SVGSVGElement;
    svg.innerHTML = "";
    const sx = linearScale(model.xDomain, [MARGIN, WIDTH - MARGIN]);
    const sy = linearScale(model.yDomain, [HEIGHT - MARGIN, MARGIN]);
    for (const p of model.points) {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(sx(p.x)));
      dot.setAttribute("cy", String(sy(p.y)));
      dot.setAttribute("r", p.selected ? "7" : "4");
      dot.setAttribute(
        "fill",
        p.selected ? "#e6194b" : p.pareto ? "#4363d8" : "#bbbbbb",
      );
      const excluded = this.isExcluded(p.index);
      dot.setAttribute("opacity", excluded ? "0.25" : "1.0");
      const tip = document.createElementNS(SVG_NS, "title");
      tip.textContent = p.tooltip;
      dot.appendChild(tip);
      svg.appendChild(dot);
    }
    const xLabel = document.createElementNS(SVG_NS, "text");
    xLabel.setAttribute("x", String(WIDTH / 2));
    xLabel.setAttribute("y", String(HEIGHT - 8));
    xLabel.textContent = model.xLabel;
    svg.appendChild(xLabel);
    const yLabel = document.createElementNS(SVG_NS, "text");
    yLabel.setAttribute("transform", `translate(14 ${HEIGHT / 2}) rotate(-90)`);
    yLabel.textContent = model.yLabel;
    svg.appendChild(yLabel);
  }

  private isExcluded(index: number): boolean {
    if (!this.rankView || !this.state.constraints.length) return false;
    const raw = this.rankView.raw_values[index] ?? [];
    for (const text of this.state.constraints) {
      const m = text.match(/^\s*(.+?)\s*(<=|>=|<|>)\s*(-?[\d.eE+]+)\s*$/);
      if (!m) continue;
      const j = this.rankView.objectives.indexOf(m[1] ?? "");
      if (j === -1) continue;
      const value = raw[j] ?? 0;
      const threshold = Number(m[3]);
      const op = m[2];
      const ok =
        op === "<=" ? value <= threshold :
        op === ">=" ? value >= threshold :
        op === "<" ? value < threshold : value > threshold;
      if (!ok) return true;
    }
    return false;
  }

  private renderStrip(): void {
    const svg = el<HTMLElement>("strip") as unknown as SVGSVGElement;
    svg.innerHTML = "";
    if (!this.sweep) return;
    for (const seg of buildSweepStrip(this.sweep)) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(seg.lo * WIDTH));
      rect.setAttribute("width", String(Math.max((seg.hi - seg.lo) * WIDTH, 1)));
      rect.setAttribute("y", "0");
      rect.setAttribute("height", "24");
      rect.setAttribute("fill", COLORS[seg.colorIndex % COLORS.length] ?? "#999");
      const tip = document.createElementNS(SVG_NS, "title");
      tip.textContent = `${seg.modelId} for alpha in [${seg.lo.toFixed(3)}, ${seg.hi.toFixed(3)}]`;
      rect.appendChild(tip);
      svg.appendChild(rect);
    }
  }
}

export function boot(baseUrl = ""): void {
  const app = new App(new ApiClient(baseUrl || window.location.origin));
  void app.start();
}
