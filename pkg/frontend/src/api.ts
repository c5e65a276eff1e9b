/** Thin typed client for the service. The UI never computes selections
 * locally; everything it displays comes from these calls. */

import type {
  CreateResponse,
  FrontDoc,
  NormalizedDoc,
  SelectionDoc,
  ServiceErrorBody,
  SweepDoc,
} from "./types";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface SelectParams {
  method?: string;
  p?: number | "inf";
  weights?: number[];
  alpha?: number;
  focus_objective?: number;
  constraints?: string[];
}

export interface SweepParams {
  method?: string;
  p?: number | "inf";
  grid?: number;
  focus_objective?: number;
  constraints?: string[];
}

type Fetch = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: Fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.baseUrl + path, init);
    } catch (err) {
      throw new ServiceError(0, "network", String(err));
    }
    const text = await resp.text();
    if (!resp.ok) {
      let code = "unknown";
      let message = text;
      try {
        const body = JSON.parse(text) as ServiceErrorBody;
        code = body.error.code;
        message = body.error.message;
      } catch {
        /* non-JSON error body; keep raw text */
      }
      throw new ServiceError(resp.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string }> {
    return this.request("/healthz");
  }

  createPopulation(
    csvText: string,
    objectives?: { name: string; direction: string }[],
    dropIncomplete = false,
  ): Promise<CreateResponse> {
    return this.post("/populations", {
      csv_text: csvText,
      objectives,
      drop_incomplete: dropIncomplete,
    });
  }

  front(id: string): Promise<FrontDoc> {
    return this.request(`/populations/${id}/front`);
  }

  normalized(id: string, method = "rank"): Promise<NormalizedDoc> {
    return this.request(
      `/populations/${id}/normalized?method=${encodeURIComponent(method)}`,
    );
  }

  select(id: string, params: SelectParams): Promise<SelectionDoc> {
    return this.post(`/populations/${id}/select`, params);
  }

  sweep(id: string, params: SweepParams): Promise<SweepDoc> {
    return this.post(`/populations/${id}/sweep`, params);
  }
}
