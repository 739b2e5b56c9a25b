/** HTTP client for the analysis and simulation endpoints. */

import type {
  FaultAction,
  GraphDocument,
  RankingPayload,
  Service,
  SimState,
  TraceBatch,
  ValidationSummary,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public key?: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class HttpService implements Service {
  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      let code = String(response.status);
      let message = response.statusText;
      let key: string | undefined;
      try {
        const body = await response.json();
        code = body.code ?? code;
        message = body.message ?? message;
        key = body.key ?? undefined;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ServiceError(response.status, code, message, key);
    }
    return response;
  }

  private postDoc(path: string, doc: GraphDocument): Promise<Response> {
    return this.request(path, { method: "POST", body: JSON.stringify(doc) });
  }

  async health(): Promise<{ status: string }> {
    return (await this.request("/api/health")).json();
  }

  async validate(doc: GraphDocument): Promise<ValidationSummary> {
    return (await this.postDoc("/api/graph/validate", doc)).json();
  }

  async pipelines(doc: GraphDocument) {
    return (await this.postDoc("/api/graph/pipelines", doc)).json();
  }

  async rank(doc: GraphDocument, tRef?: number): Promise<RankingPayload> {
    const query = tRef === undefined ? "" : `?t_ref=${tRef}`;
    return (await this.postDoc(`/api/graph/rank${query}`, doc)).json();
  }

  async curvesCsv(doc: GraphDocument, tMax: number, n: number, tRef?: number): Promise<string> {
    const query = `?t_max=${tMax}&n=${n}` + (tRef === undefined ? "" : `&t_ref=${tRef}`);
    return (await this.postDoc(`/api/graph/curves${query}`, doc)).text();
  }

  async exportOptions(doc: GraphDocument, paperCompat = false): Promise<string> {
    return (await this.postDoc(`/api/graph/export?paper_compat=${paperCompat}`, doc)).text();
  }

  async createSession(doc: GraphDocument, scenario?: object) {
    const body = JSON.stringify({ graph: doc, ...(scenario ? { scenario } : {}) });
    return (await this.request("/api/sim", { method: "POST", body })).json();
  }

  async step(sessionId: string, n: number): Promise<SimState> {
    return (await this.request(`/api/sim/${sessionId}/step?n=${n}`, { method: "POST" })).json();
  }

  async fault(sessionId: string, node: string, action: FaultAction): Promise<SimState> {
    return (
      await this.request(`/api/sim/${sessionId}/fault`, {
        method: "POST",
        body: JSON.stringify({ node, action }),
      })
    ).json();
  }

  async repair(sessionId: string, node: string): Promise<SimState> {
    return (
      await this.request(`/api/sim/${sessionId}/repair`, {
        method: "POST",
        body: JSON.stringify({ node }),
      })
    ).json();
  }

  async state(sessionId: string): Promise<SimState> {
    return (await this.request(`/api/sim/${sessionId}/state`)).json();
  }

  async trace(sessionId: string, since: number): Promise<TraceBatch> {
    return (await this.request(`/api/sim/${sessionId}/trace?since=${since}`)).json();
  }
}
