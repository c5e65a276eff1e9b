import { describe, expect, it } from "vitest";

import { ApiClient, ServiceError } from "../src/api";

type Call = { url: string; init?: RequestInit };

function fakeFetch(status: number, body: unknown) {
  const calls: Call[] = [];
  const fn = (async (url: string | URL | Request, init?: RequestInit) => {
    calls.push({ url: String(url), init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
  return { fn, calls };
}

describe("ApiClient", () => {
  it("posts select params to the population endpoint", async () => {
    const { fn, calls } = fakeFetch(200, { kind: "selection", model_id: "m" });
    const api = new ApiClient("http://svc", fn);
    await api.select("abc", { p: "inf", alpha: 0.5, focus_objective: 1 });
    expect(calls[0]!.url).toBe("http://svc/populations/abc/select");
    expect(JSON.parse(String(calls[0]!.init?.body))).toEqual({
      p: "inf",
      alpha: 0.5,
      focus_objective: 1,
    });
  });

  it("encodes the normalized method as a query parameter", async () => {
    const { fn, calls } = fakeFetch(200, { kind: "normalized" });
    await new ApiClient("http://svc", fn).normalized("abc", "minmax");
    expect(calls[0]!.url).toBe("http://svc/populations/abc/normalized?method=minmax");
  });

  it("surfaces machine-readable error codes", async () => {
    const { fn } = fakeFetch(422, {
      error: { code: "infeasible", message: "no feasible model" },
    });
    const api = new ApiClient("http://svc", fn);
    const err = await api.select("abc", {}).catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(422);
    expect(err.code).toBe("infeasible");
  });

  it("wraps network failures with status 0", async () => {
    const failing = (async () => {
      throw new TypeError("connection refused");
    }) as unknown as typeof fetch;
    const api = new ApiClient("http://svc", failing);
    const err = await api.health().catch((e) => e);
    expect(err).toBeInstanceOf(ServiceError);
    expect(err.status).toBe(0);
    expect(err.code).toBe("network");
  });

  it("uploads csv payloads with objectives", async () => {
    const { fn, calls } = fakeFetch(201, { id: "h1", objectives: ["a"] });
    const api = new ApiClient("http://svc", fn);
    await api.createPopulation("model,a\nm,1\n", [{ name: "a", direction: "minimize" }]);
    const body = JSON.parse(String(calls[0]!.init?.body));
    expect(body.csv_text).toContain("model,a");
    expect(body.objectives).toEqual([{ name: "a", direction: "minimize" }]);
  });
});
