/** Typed client for the craftpipe service API. The UI talks only to these
 * documented endpoints; `fetch` is injectable so tests can script a server
 * double. PATCH payloads always carry full float precision. */

export interface PointView {
  position: number[];
  rotation: number[];
}

export interface TransformView {
  translation: number[];
  rotation: number[];
  scale: number[];
}

export interface BundleView {
  transform: TransformView;
  sit: PointView | null;
  grip: PointView | null;
  behavior: any | null;
  metadata: { name: string; creator: string; source_image_digest: string };
}

export interface SessionView {
  id: string;
  phase: string;
  task_label: string;
  token_digest: string;
  prompt_history: { user_text: string; enhanced: string }[];
  image_digests: string[];
  model_digests: string[];
  bundle: BundleView | null;
  trajectory_digest: string;
  item_id: string;
  item_url: string;
  telemetry: {
    counters: Record<string, number>;
    failures: Record<string, number>;
    [key: string]: any;
  };
}

export interface BudgetReportView {
  triangles: number;
  vertices: number;
  file_bytes: number;
  within_budget: boolean;
  violations: string[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public kind: string,
    public detail: string,
    public report: BudgetReportView | null = null,
  ) {
    super(`${kind}: ${detail}`);
  }
}

export interface AdjustPayload {
  transform?: TransformView;
  sit?: PointView | null;
  grip?: PointView | null;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<any> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let kind = `HTTP ${response.status}`;
      let detail = response.statusText;
      let report: BudgetReportView | null = null;
      try {
        const payload = await response.json();
        kind = payload.error ?? kind;
        detail =
          typeof payload.detail === "string"
            ? payload.detail
            : JSON.stringify(payload.detail ?? "");
        report = payload.report ?? null;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(response.status, kind, detail, report);
    }
    return response.json();
  }

  createSession(platformToken: string, taskLabel = ""): Promise<SessionView> {
    return this.request("POST", "/sessions", {
      platform_token: platformToken,
      task_label: taskLabel,
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request("GET", `/sessions/${id}`);
  }

  generateImage(id: string, text: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/image`, { text });
  }

  generateModel(id: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/model`);
  }

  adjust(id: string, payload: AdjustPayload): Promise<SessionView> {
    return this.request("PATCH", `/sessions/${id}/adjust`, payload);
  }

  generateBehavior(id: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/behavior`);
  }

  upload(id: string, name: string): Promise<SessionView> {
    return this.request("POST", `/sessions/${id}/upload`, { name });
  }

  async previewGlb(id: string): Promise<ArrayBuffer> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${id}/preview.glb`,
      { method: "GET" },
    );
    if (!response.ok) {
      throw new ApiError(response.status, `HTTP ${response.status}`, "no preview");
    }
    return response.arrayBuffer();
  }

  async asset(id: string, digest: string): Promise<ArrayBuffer> {
    const response = await this.fetchImpl(
      `${this.baseUrl}/sessions/${id}/assets/${digest}`,
      { method: "GET" },
    );
    if (!response.ok) {
      throw new ApiError(response.status, `HTTP ${response.status}`, "no asset");
    }
    return response.arrayBuffer();
  }
}
