/** Studio view-model. The server is the only authority: `view` is always a
 * verbatim server response (create/echo/reload), never a local guess, so a
 * page reload reproduces exactly what the server reports. Local extras are
 * the undo stack (bounded), in-flight PATCH coalescing, and error banners.
 */

import {
  AdjustPayload,
  ApiClient,
  ApiError,
  BudgetReportView,
  BundleView,
  SessionView,
} from "./api.js";

export type TargetKind = "object" | "sit" | "grip";

export type BannerKind = "retry" | "inline" | "token" | "budget";

export interface Banner {
  kind: BannerKind;
  message: string;
  report: BudgetReportView | null;
  rawReply: string | null;
}

export const UNDO_DEPTH = 50;

/** Render-time rounding; model state keeps full precision. */
export function fmt(value: number, digits = 3): string {
  return value.toFixed(digits);
}

export class StudioState {
  view: SessionView | null = null;
  banner: Banner | null = null;
  target: TargetKind = "object";
  undoStack: BundleView[] = [];

  private pending: AdjustPayload | null = null;
  private flight: Promise<void> | null = null;

  constructor(private client: ApiClient) {}

  get sessionId(): string {
    if (!this.view) throw new Error("no session yet");
    return this.view.id;
  }

  get phase(): string {
    return this.view?.phase ?? "(none)";
  }

  imageAttempts(): number {
    return this.view?.telemetry.counters.image_attempts ?? 0;
  }

  modelAttempts(): number {
    return this.view?.telemetry.counters.model_attempts ?? 0;
  }

  /** Uniform scale badge from the server-echoed transform, e.g. "x2.000". */
  scaleBadge(): string {
    const scale = this.view?.bundle?.transform.scale ?? [1, 1, 1];
    return `x${fmt(scale[0])}`;
  }

  clearBanner(): void {
    this.banner = null;
  }

  // --- session lifecycle -------------------------------------------------------

  async createSession(platformToken: string, taskLabel = ""): Promise<void> {
    this.view = await this.client.createSession(platformToken, taskLabel);
    this.undoStack = [];
    this.banner = null;
  }

  async submitPrompt(text: string): Promise<void> {
    if (!text.trim()) throw new Error("prompt must be non-empty");
    try {
      this.view = await this.client.generateImage(this.sessionId, text);
      this.banner = null;
    } catch (error) {
      this.bannerFrom(error, { 502: "retry" });
      throw error;
    }
  }

  async generateModel(): Promise<void> {
    try {
      this.view = await this.client.generateModel(this.sessionId);
      this.undoStack = []; // new bundle: old snapshots no longer apply
      this.banner = null;
    } catch (error) {
      this.bannerFrom(error, { 502: "retry" });
      throw error;
    }
  }

  async generateBehavior(): Promise<void> {
    try {
      this.view = await this.client.generateBehavior(this.sessionId);
      this.banner = null;
    } catch (error) {
      // schema failures carry the provider's raw reply for user retry
      this.bannerFrom(error, { 502: "retry" });
      throw error;
    }
  }

  async upload(name: string): Promise<void> {
    try {
      this.view = await this.client.upload(this.sessionId, name);
      this.banner = null;
    } catch (error) {
      this.bannerFrom(error, { 401: "token", 507: "budget", 502: "retry" });
      throw error;
    }
  }

  /** Re-fetch from the server; the view must survive a page reload unchanged. */
  async reload(): Promise<void> {
    this.view = await this.client.getSession(this.sessionId);
  }

  // --- adjustments ----------------------------------------------------------------

  /** Commit one gesture. Payloads arriving while a PATCH is in flight are
   * coalesced last-write-wins per field; the returned promise resolves when
   * the queue has drained. */
  commitAdjust(payload: AdjustPayload): Promise<void> {
    this.pending = { ...(this.pending ?? {}), ...payload };
    if (!this.flight) this.flight = this.drain();
    return this.flight;
  }

  private async drain(): Promise<void> {
    try {
      while (this.pending) {
        const batch = this.pending;
        this.pending = null;
        const before = this.view?.bundle ?? null;
        try {
          const next = await this.client.adjust(this.sessionId, batch);
          if (before) this.pushUndo(before);
          this.view = next;
          this.banner = null;
        } catch (error) {
          // 409/422 shown inline; the server view (and any local draft
          // fields) stay as they were
          this.bannerFrom(error, { 409: "inline", 422: "inline" });
        }
      }
    } finally {
      this.flight = null;
    }
  }

  private pushUndo(bundle: BundleView): void {
    this.undoStack.push(JSON.parse(JSON.stringify(bundle)));
    if (this.undoStack.length > UNDO_DEPTH) this.undoStack.shift();
  }

  /** Restore the previous server-echoed bundle with one PATCH. */
  async undo(): Promise<void> {
    const previous = this.undoStack.pop();
    if (!previous || !this.view) return;
    const restored = await this.client.adjust(this.sessionId, {
      transform: previous.transform,
      sit: previous.sit,
      grip: previous.grip,
    });
    this.view = restored;
    this.banner = null;
  }

  // --- error mapping ----------------------------------------------------------------

  private bannerFrom(
    error: unknown,
    mapping: Partial<Record<number, BannerKind>>,
  ): void {
    if (!(error instanceof ApiError)) throw error;
    const kind = mapping[error.status] ?? "inline";
    this.banner = {
      kind,
      message: `${error.kind}: ${error.detail}`,
      report: error.report,
      rawReply: extractRawReply(error.detail),
    };
  }
}

/** Behavior schema failures embed the provider's raw text in the detail;
 * surface it so the user can inspect and retry. */
function extractRawReply(detail: string): string | null {
  return detail || null;
}
