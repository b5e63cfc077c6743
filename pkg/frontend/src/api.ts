/** Typed client for the fcmsim HTTP service.
 *
 * The UI never computes engine math itself; every number it shows
 * comes out of one of these calls. Errors carry the service's status
 * code and detail payload so views can surface the positioned reason
 * verbatim.
 */

export interface ConceptObj {
  id: string;
  name: string;
  group?: string | null;
}

export interface EdgeObj {
  source: string;
  target: string;
  weight: number;
}

export interface ModelObj {
  name: string;
  concepts: ConceptObj[];
  edges: EdgeObj[];
}

export interface ScenarioObj {
  name: string;
  model_ref?: string | null;
  clamps: Record<string, number>;
  config_override?: ConfigObj | null;
}

export interface ConfigObj {
  kernel?: string;
  squash?: string;
  steepness?: number;
  initial?: string;
  tolerance?: number;
  max_iterations?: number;
  cycle_detection_window?: number;
}

export interface DocumentObj {
  format_version: string;
  model: ModelObj;
  scenarios?: ScenarioObj[] | null;
  config?: ConfigObj | null;
}

export interface ModelListing {
  id: string;
  name: string;
  created: string;
  updated: string;
}

export interface ModelEntry extends ModelListing {
  document: DocumentObj;
}

export interface SavedRef {
  id: string;
  created: string;
  updated: string;
}

export interface RunResultObj {
  status: string;
  iterations: number;
  period: number | null;
  final_state: Record<string, number>;
}

export interface OutcomeObj {
  scenario_name: string;
  baseline: RunResultObj;
  clamped: RunResultObj;
  relative_change: Record<string, number>;
  model_id?: string;
}

export interface MetricsObj {
  concept_count: number;
  connection_count: number;
  density: number;
  connections_per_component: number;
  complexity_score: number | null;
  centrality: Record<string, number>;
  indegree: Record<string, number>;
  outdegree: Record<string, number>;
  classes: Record<string, string>;
  warnings: string[];
  model: string;
  ranking: [string, number][];
}

export interface RunRequest {
  scenario?: string;
  clamps?: Record<string, number>;
  config?: ConfigObj;
}

export interface CompareRun {
  model_id: string;
  name?: string;
  scenario?: string;
  clamps?: Record<string, number>;
}

export interface CompareRequest {
  runs: CompareRun[];
  config?: ConfigObj;
}

export interface ComparisonObj {
  scenarios: string[];
  structural_identity: {
    identical: boolean;
    reference: string;
    diffs: unknown[];
  };
  outcomes: Record<string, OutcomeObj>;
  per_concept_table: [string, (number | null)[]][];
  centrality_rankings: Record<string, [string, number][]>;
}

export interface FixtureListing {
  id: string;
  name: string;
}

/** Detail shape the service uses for schema errors. */
export interface PositionedDetail {
  reason: string;
  path?: string;
}

export class ApiError extends Error {
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, detail: unknown) {
    super(ApiError.describe(status, detail));
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }

  static describe(status: number, detail: unknown): string {
    if (typeof detail === "string") return `HTTP ${status}: ${detail}`;
    if (detail && typeof detail === "object") {
      const d = detail as PositionedDetail;
      if (typeof d.reason === "string") {
        return d.path
          ? `HTTP ${status}: ${d.reason} (at ${d.path})`
          : `HTTP ${status}: ${d.reason}`;
      }
    }
    return `HTTP ${status}`;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchImpl =
      fetchImpl ?? ((input, init) => globalThis.fetch(input, init));
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    let payload: unknown = null;
    const text = await response.text();
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = text;
      }
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  listModels(): Promise<ModelListing[]> {
    return this.request("GET", "/models");
  }

  getModel(id: string): Promise<ModelEntry> {
    return this.request("GET", `/models/${encodeURIComponent(id)}`);
  }

  createModel(doc: DocumentObj): Promise<SavedRef> {
    return this.request("POST", "/models", doc);
  }

  putModel(id: string, doc: DocumentObj): Promise<SavedRef> {
    return this.request("PUT", `/models/${encodeURIComponent(id)}`, doc);
  }

  deleteModel(id: string): Promise<{ deleted: string }> {
    return this.request("DELETE", `/models/${encodeURIComponent(id)}`);
  }

  getMetrics(id: string, selfPairs = false): Promise<MetricsObj> {
    const query = selfPairs ? "?self_pairs=true" : "";
    return this.request(
      "GET",
      `/models/${encodeURIComponent(id)}/metrics${query}`,
    );
  }

  run(id: string, req: RunRequest): Promise<OutcomeObj> {
    return this.request("POST", `/models/${encodeURIComponent(id)}/run`, req);
  }

  compare(req: CompareRequest): Promise<ComparisonObj> {
    return this.request("POST", "/compare", req);
  }

  listFixtures(): Promise<FixtureListing[]> {
    return this.request("GET", "/fixtures");
  }

  getFixture(id: string): Promise<DocumentObj> {
    return this.request("GET", `/fixtures/${encodeURIComponent(id)}`);
  }
}
