/** DOM wiring for the four workbench panels: prompt/image (A-B), 3D
 * adjustment with mannequin and anchors (C), naming and upload (D). All
 * mutations go through StudioState, which only ever holds server echoes. */

import { ApiClient, PointView } from "./api.js";
import { GlbDocument, interactionExtension, meshInstances, parseGlb, worldBounds, longestSpan } from "./glb.js";
import { MannequinMesh, mannequinMesh } from "./mannequin.js";
import { Vec3 } from "./mathkit.js";
import { Viewport } from "./renderer.js";
import { StudioState, TargetKind, fmt } from "./state.js";
import { TrajectorySample, parseTrajectory, poseAt } from "./trajectory.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

export class Studio {
  private state: StudioState;
  private viewport: Viewport;
  private preview: GlbDocument | null = null;
  private trajectory: TrajectorySample[] = [];
  private playing = false;
  private playStart = 0;
  private seated = false;
  private showMannequin = true;

  // panel A/B
  private tokenInput = el("input", { type: "password", placeholder: "platform token" });
  private promptInput = el("input", { type: "text", placeholder: "describe the object" });
  private submitButton = el("button", {}, "Generate Image");
  private attemptBadge = el("span", { class: "badge" }, "images: 0");
  private imagePreview = el("img", { class: "image-preview", alt: "generated image" });
  private acceptButton = el("button", {}, "Create 3D Model");

  // panel C
  private targetSelect = el("select");
  private fields: Record<string, HTMLInputElement> = {};
  private scaleSelect = el("select");
  private scaleBadge = el("span", { class: "badge" }, "x1.000");
  private spanBadge = el("span", { class: "badge" }, "span: -");
  private undoButton = el("button", {}, "Undo");
  private mannequinToggle = el("button", {}, "Mannequin: standing");

  // behavior panel
  private behaviorButton = el("button", {}, "Generate Behavior");
  private playButton = el("button", {}, "Play Preview");
  private skipButton = el("button", {}, "Skip");

  // panel D
  private nameInput = el("input", { type: "text", placeholder: "item name" });
  private uploadButton = el("button", {}, "Upload");
  private receipt = el("div", { class: "receipt" });

  private banner = el("div", { class: "banner hidden" });
  private phaseBadge = el("span", { class: "badge" }, "phase: (none)");

  constructor(
    private root: HTMLElement,
    private client: ApiClient,
    canvas: HTMLCanvasElement,
  ) {
    this.state = new StudioState(client);
    this.viewport = new Viewport(canvas);
    this.build(canvas);
    this.tick = this.tick.bind(this);
    requestAnimationFrame(this.tick);
  }

  private build(canvas: HTMLCanvasElement): void {
    const left = el("div", { class: "column" });
    const promptPanel = el("fieldset");
    promptPanel.append(el("legend", {}, "A-B. Prompt and image"));
    this.submitButton.disabled = true;
    this.promptInput.addEventListener("input", () => {
      this.submitButton.disabled = !this.promptInput.value.trim();
    });
    this.submitButton.addEventListener("click", () => this.onSubmitPrompt());
    this.acceptButton.addEventListener("click", () => this.onGenerateModel());
    promptPanel.append(
      this.tokenInput, this.promptInput, this.submitButton,
      this.attemptBadge, this.imagePreview, this.acceptButton,
    );

    const adjustPanel = el("fieldset");
    adjustPanel.append(el("legend", {}, "C. Adjust"));
    for (const target of ["object", "sit", "grip"]) {
      this.targetSelect.append(el("option", { value: target }, target));
    }
    this.targetSelect.addEventListener("change", () => {
      this.state.target = this.targetSelect.value as TargetKind;
      this.refreshFields();
    });
    const grid = el("div", { class: "fields" });
    for (const axis of ["x", "y", "z"]) {
      const label = el("label", {}, axis);
      const input = el("input", { type: "number", step: "0.01" });
      input.addEventListener("change", () => this.onFieldCommit());
      this.fields[axis] = input;
      label.append(input);
      grid.append(label);
    }
    for (const factor of ["0.5", "1", "2", "4"]) {
      this.scaleSelect.append(el("option", { value: factor }, `x${factor}`));
    }
    this.scaleSelect.value = "1";
    this.scaleSelect.addEventListener("change", () => this.onScaleSelect());
    this.undoButton.addEventListener("click", () => this.onUndo());
    this.mannequinToggle.addEventListener("click", () => {
      this.seated = !this.seated;
      this.mannequinToggle.textContent = `Mannequin: ${this.seated ? "seated" : "standing"}`;
    });
    adjustPanel.append(
      this.targetSelect, grid, this.scaleSelect, this.scaleBadge,
      this.spanBadge, this.undoButton, this.mannequinToggle,
    );

    const behaviorPanel = el("fieldset");
    behaviorPanel.append(el("legend", {}, "Behavior (optional)"));
    this.behaviorButton.addEventListener("click", () => this.onBehavior());
    this.playButton.addEventListener("click", () => {
      this.playing = !this.playing;
      this.playStart = performance.now();
      this.playButton.textContent = this.playing ? "Stop Preview" : "Play Preview";
    });
    this.skipButton.addEventListener("click", () => {
      // skipping leaves the phase untouched; upload stays available
      this.setBanner(null);
    });
    behaviorPanel.append(this.behaviorButton, this.playButton, this.skipButton);

    const uploadPanel = el("fieldset");
    uploadPanel.append(el("legend", {}, "D. Upload"));
    this.uploadButton.addEventListener("click", () => this.onUpload());
    uploadPanel.append(this.nameInput, this.uploadButton, this.receipt);

    left.append(this.phaseBadge, promptPanel, adjustPanel, behaviorPanel, uploadPanel, this.banner);
    this.root.append(left, canvas);
  }

  // --- actions -----------------------------------------------------------------

  private async onSubmitPrompt(): Promise<void> {
    try {
      if (!this.state.view) {
        await this.state.createSession(this.tokenInput.value);
      }
      await this.state.submitPrompt(this.promptInput.value);
      await this.refreshImage();
    } catch {
      /* banner already set by state */
    }
    this.refresh();
  }

  private async onGenerateModel(): Promise<void> {
    try {
      await this.state.generateModel();
      await this.refreshPreview();
    } catch {
      /* banner set */
    }
    this.refresh();
  }

  private async onFieldCommit(): Promise<void> {
    const view = this.state.view;
    if (!view?.bundle) return;
    const values: Vec3 = [
      parseFloat(this.fields.x.value),
      parseFloat(this.fields.y.value),
      parseFloat(this.fields.z.value),
    ];
    if (values.some((v) => Number.isNaN(v))) return;
    if (this.state.target === "object") {
      const transform = { ...view.bundle.transform, translation: [...values] };
      await this.state.commitAdjust({ transform });
    } else {
      const key = this.state.target;
      const current = view.bundle[key];
      const point: PointView = {
        position: [...values],
        rotation: current ? [...current.rotation] : [0, 0, 0, 1],
      };
      await this.state.commitAdjust({ [key]: point });
    }
    await this.refreshPreview();
    this.refresh();
  }

  private async onScaleSelect(): Promise<void> {
    const view = this.state.view;
    if (!view?.bundle) return;
    const s = parseFloat(this.scaleSelect.value);
    const transform = { ...view.bundle.transform, scale: [s, s, s] };
    await this.state.commitAdjust({ transform });
    await this.refreshPreview();
    this.refresh();
  }

  private async onUndo(): Promise<void> {
    await this.state.undo();
    await this.refreshPreview();
    this.refresh();
  }

  private async onBehavior(): Promise<void> {
    try {
      await this.state.generateBehavior();
      await this.refreshTrajectory();
    } catch {
      /* banner set; raw reply available for retry */
    }
    this.refresh();
  }

  private async onUpload(): Promise<void> {
    try {
      await this.state.upload(this.nameInput.value);
      const view = this.state.view;
      this.receipt.textContent = view?.item_url
        ? `uploaded: ${view.item_url}`
        : "uploaded";
    } catch {
      /* banner set */
    }
    this.refresh();
  }

  // --- server-derived refreshes ---------------------------------------------------

  private async refreshImage(): Promise<void> {
    const view = this.state.view;
    if (!view || view.image_digests.length === 0) return;
    const digest = view.image_digests[view.image_digests.length - 1];
    const bytes = await this.client.asset(view.id, digest);
    this.imagePreview.src = URL.createObjectURL(
      new Blob([bytes], { type: "image/png" }),
    );
  }

  private async refreshPreview(): Promise<void> {
    const view = this.state.view;
    if (!view?.bundle) return;
    this.preview = parseGlb(await this.client.previewGlb(view.id));
    const bounds = worldBounds(this.preview);
    this.spanBadge.textContent = bounds
      ? `span: ${fmt(longestSpan(bounds))} m`
      : "span: -";
  }

  private async refreshTrajectory(): Promise<void> {
    const view = this.state.view;
    if (!view || !view.trajectory_digest) {
      this.trajectory = [];
      return;
    }
    this.trajectory = parseTrajectory(
      await this.client.asset(view.id, view.trajectory_digest),
    );
  }

  // --- rendering --------------------------------------------------------------------

  private refreshFields(): void {
    const bundle = this.state.view?.bundle;
    if (!bundle) return;
    let values: number[] | null = null;
    if (this.state.target === "object") values = bundle.transform.translation;
    else values = bundle[this.state.target]?.position ?? null;
    for (const [i, axis] of ["x", "y", "z"].entries()) {
      this.fields[axis].value = values ? fmt(values[i]) : "";
    }
  }

  private setBanner(text: string | null): void {
    if (!text) {
      this.banner.classList.add("hidden");
      this.banner.textContent = "";
    } else {
      this.banner.classList.remove("hidden");
      this.banner.textContent = text;
    }
  }

  refresh(): void {
    const view = this.state.view;
    this.phaseBadge.textContent = `phase: ${this.state.phase}`;
    this.attemptBadge.textContent = `images: ${this.state.imageAttempts()}`;
    this.scaleBadge.textContent = this.state.scaleBadge();
    const banner = this.state.banner;
    if (!banner) {
      this.setBanner(null);
    } else if (banner.kind === "budget" && banner.report) {
      this.setBanner(
        `Budget exceeded: ${banner.report.triangles} triangles / ` +
          `${banner.report.file_bytes} bytes (${banner.report.violations.join(", ")})`,
      );
    } else if (banner.kind === "token") {
      this.setBanner("Platform token rejected - enter a valid token and retry.");
    } else if (banner.kind === "retry") {
      this.setBanner(`Provider failed - retry. ${banner.message}`);
    } else {
      this.setBanner(banner.message);
    }
    this.refreshFields();
    if (view?.item_url) this.receipt.textContent = `uploaded: ${view.item_url}`;
  }

  private tick(now: number): void {
    const markers = [];
    const bundle = this.state.view?.bundle;
    if (this.preview && bundle) {
      const ext = interactionExtension(this.preview);
      if (ext?.sit) {
        markers.push({
          position: ext.sit.position as Vec3,
          label: "sit",
          color: "#ffd166",
          selected: this.state.target === "sit",
        });
      }
      if (ext?.grip) {
        markers.push({
          position: ext.grip.position as Vec3,
          label: "grip",
          color: "#ef476f",
          selected: this.state.target === "grip",
        });
      }
    }
    const pose =
      this.playing && this.trajectory.length > 0
        ? poseAt(this.trajectory, (now - this.playStart) / 1000)
        : null;
    const mannequin: MannequinMesh | null = this.showMannequin
      ? mannequinMesh(this.seated)
      : null;
    this.viewport.render({
      instances: this.preview ? meshInstances(this.preview) : [],
      objectPose: pose,
      mannequin,
      mannequinOffset: [-1.2, 0, 0],
      markers,
    });
    requestAnimationFrame(this.tick);
  }
}
