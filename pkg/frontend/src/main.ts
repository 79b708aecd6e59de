/** Browser entry point: wires the canvas, sidebar and tooltip to the API.
 *
 * The client stays thin: the server culls and lays out the scene for the
 * requested viewport; this side only maps gestures to new viewports,
 * throttles refetches (≤10/s) while translating already-drawn pixels, and
 * shows popups whose numbers come from API payloads.
 */
import { Api, ApiError, messagePopup } from "./api";
import { buildLayout, hitTest, RenderModel } from "./layout";
import { drawBirdsEye, drawScene } from "./render";
import {
  UiState,
  birdsEyeJump,
  initialState,
  laneDrag,
  pan,
  sceneRequest,
  toggleHidden,
  zoomAboutPoint,
} from "./state";
import type { FlatProfile, MessageDetail, Scene, SessionInfo } from "./types";

const REFETCH_MIN_GAP_MS = 100;

class App {
  private api = new Api("");
  private state!: UiState;
  private session!: SessionInfo;
  private scene: Scene | null = null;
  private model: RenderModel | null = null;
  private scrollY = 0;
  private hoverMessageId: string | null = null;
  private fetchTimer: number | null = null;
  private fetchSeq = 0;
  private lastFetch = 0;
  private pixelShift = 0; // translation applied while a refetch is pending
  private dragging: { startX: number; t0: number; t1: number } | null = null;
  private captionDrag: { fromIndex: number } | null = null;
  private messageCache = new Map<string, MessageDetail>();

  private canvas = document.getElementById("timeline") as HTMLCanvasElement;
  private birdsEyeCanvas = document.getElementById("birdseye") as HTMLCanvasElement;
  private tooltip = document.getElementById("tooltip") as HTMLDivElement;
  private banner = document.getElementById("banner") as HTMLDivElement;
  private sidebar = document.getElementById("sidebar") as HTMLDivElement;
  private title = document.getElementById("session-title") as HTMLElement;

  async boot(): Promise<void> {
    this.session = await this.api.session();
    this.title.textContent =
      `${this.session.platform_name} — ${this.session.session_id} ` +
      `(${fmtClock(this.session.duration_ms)}, slice ${this.session.slice_ms} ms)`;
    this.state = initialState(this.session.duration_ms);
    await this.refreshSidebar();
    this.installHandlers();
    this.resize();
    window.addEventListener("resize", () => this.resize());
    await this.fetchScene();
  }

  private timelineWidth(): number {
    return Math.max(200, this.canvas.clientWidth - 148);
  }

  private resize(): void {
    this.canvas.width = this.canvas.clientWidth;
    this.canvas.height = this.canvas.clientHeight;
    this.birdsEyeCanvas.width = this.birdsEyeCanvas.clientWidth;
    this.birdsEyeCanvas.height = this.birdsEyeCanvas.clientHeight;
    this.scheduleFetch(true);
    this.render();
  }

  // -- scene fetching --------------------------------------------------------

  private scheduleFetch(immediate = false): void {
    if (this.fetchTimer !== null) return;
    const wait = immediate ? 0 : Math.max(0, this.lastFetch + REFETCH_MIN_GAP_MS - Date.now());
    this.fetchTimer = window.setTimeout(() => {
      this.fetchTimer = null;
      void this.fetchScene();
    }, wait);
  }

  private async fetchScene(): Promise<void> {
    const seq = ++this.fetchSeq;
    this.lastFetch = Date.now();
    const params = sceneRequest(this.state, this.timelineWidth());
    try {
      const scene = await this.api.scene(params);
      if (seq !== this.fetchSeq) return; // newest wins
      this.applyScene(scene);
    } catch (error) {
      this.showBanner(error instanceof ApiError
        ? `scene fetch failed: ${error.message}`
        : `scene fetch failed: ${String(error)}`);
    }
  }

  private applyScene(scene: Scene): void {
    if (!Array.isArray(scene.lanes) || !Array.isArray(scene.rects) || scene.birds_eye == null) {
      this.showBanner("malformed scene payload");
      return;
    }
    this.hideBanner();
    this.scene = scene;
    this.pixelShift = 0;
    this.model = buildLayout(scene, this.canvas.width);
    this.render();
  }

  private render(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx || !this.model || !this.scene) return;
    ctx.save();
    ctx.translate(this.pixelShift, 0);
    drawScene(ctx, this.model, this.canvas.height, {
      scrollY: this.scrollY,
      hoverMessageId: this.hoverMessageId,
    });
    ctx.restore();
    const beCtx = this.birdsEyeCanvas.getContext("2d");
    if (beCtx) {
      drawBirdsEye(
        beCtx,
        this.scene.birds_eye,
        this.birdsEyeCanvas.width,
        this.birdsEyeCanvas.height,
        [this.state.t0 / this.session.duration_ms || 0,
         this.state.t1 / this.session.duration_ms || 1],
      );
    }
  }

  // -- sidebar (micro flat profile with hide toggles) -------------------------

  private async refreshSidebar(): Promise<void> {
    const profile: FlatProfile = await this.api.flatProfile();
    this.sidebar.replaceChildren();
    for (const row of profile.rows) {
      const entry = document.createElement("div");
      entry.className = "agent-entry" + (this.state.hidden.includes(row.agent_id) ? " hidden-agent" : "");
      const bar = document.createElement("div");
      bar.className = "activity-bar";
      bar.style.width = `${Math.max(row.pct_session, 0.5)}%`;
      const label = document.createElement("span");
      label.textContent = `${row.name}  ${row.pct_session.toFixed(2)}%`;
      entry.append(label, bar);
      entry.title = "click to hide/show this time line";
      entry.addEventListener("click", () => {
        this.state = toggleHidden(this.state, row.agent_id);
        entry.classList.toggle("hidden-agent");
        this.scheduleFetch(true);
      });
      this.sidebar.append(entry);
    }
  }

  // -- gestures ---------------------------------------------------------------

  private installHandlers(): void {
    this.canvas.addEventListener("wheel", (event) => {
      event.preventDefault();
      if (event.ctrlKey || event.metaKey) {
        const frac = this.anchorFraction(event.offsetX);
        const factor = event.deltaY < 0 ? 1.25 : 0.8;
        this.state = zoomAboutPoint(this.state, factor, frac);
        this.scheduleFetch();
      } else {
        this.scrollY = Math.max(0, this.scrollY + event.deltaY);
        this.render();
      }
    }, { passive: false });

    this.canvas.addEventListener("dblclick", (event) => {
      this.state = zoomAboutPoint(this.state, 2, this.anchorFraction(event.offsetX));
      this.scheduleFetch(true);
    });

    this.canvas.addEventListener("mousedown", (event) => {
      if (event.offsetX < 148 && this.model) {
        const index = this.laneIndexAt(event.offsetY);
        if (index >= 0) {
          this.captionDrag = { fromIndex: index };
          return;
        }
      }
      this.dragging = { startX: event.offsetX, t0: this.state.t0, t1: this.state.t1 };
    });

    window.addEventListener("mouseup", (event) => {
      if (this.captionDrag && this.model) {
        const rect = this.canvas.getBoundingClientRect();
        const toIndex = this.laneIndexAt(event.clientY - rect.top);
        if (toIndex >= 0 && toIndex !== this.captionDrag.fromIndex) {
          const visible = this.model.laneRows.map((row) => row.agentId);
          this.state = laneDrag(this.state, visible, this.captionDrag.fromIndex, toIndex);
          this.scheduleFetch(true);
        }
      }
      this.captionDrag = null;
      this.dragging = null;
    });

    this.canvas.addEventListener("mousemove", (event) => {
      if (this.dragging && this.scene) {
        const dxPx = event.offsetX - this.dragging.startX;
        const deltaMs = -dxPx / this.scene.px_per_ms;
        const span = this.dragging.t1 - this.dragging.t0;
        const shifted = pan(
          { ...this.state, t0: this.dragging.t0, t1: this.dragging.t1 },
          deltaMs,
        );
        if (shifted.t0 !== this.state.t0 || shifted.t1 !== this.state.t1) {
          // translate what is already drawn and let the throttled refetch catch up
          this.pixelShift = (this.dragging.t0 - shifted.t0) * this.scene.px_per_ms;
          this.state = shifted;
          this.render();
          this.scheduleFetch();
        }
        void span;
        return;
      }
      void this.onHover(event.offsetX, event.offsetY, event.clientX, event.clientY);
    });

    this.canvas.addEventListener("mouseleave", () => this.hideTooltip());

    this.birdsEyeCanvas.addEventListener("click", (event) => {
      const f = event.offsetX / this.birdsEyeCanvas.clientWidth;
      this.state = birdsEyeJump(this.state, f);
      this.scheduleFetch(true);
    });
  }

  private anchorFraction(offsetX: number): number {
    const width = this.timelineWidth();
    return Math.max(0, Math.min(1, (offsetX - 148) / width));
  }

  private laneIndexAt(y: number): number {
    if (!this.model) return -1;
    const adjusted = y + this.scrollY;
    return this.model.laneRows.findIndex(
      (row) => adjusted >= row.y && adjusted < row.y + 26,
    );
  }

  // -- hover popups ------------------------------------------------------------

  private async onHover(x: number, y: number, clientX: number, clientY: number): Promise<void> {
    if (!this.model) return;
    const target = hitTest(this.model, x - this.pixelShift, y + (y > this.model.lanesTop ? this.scrollY : 0));
    if (!target) {
      this.hoverMessageId = null;
      this.hideTooltip();
      return;
    }
    if (target.kind === "arc") {
      this.hoverMessageId = target.messageId;
      this.render();
      try {
        let detail = this.messageCache.get(target.messageId);
        if (!detail) {
          detail = await this.api.message(target.messageId);
          this.messageCache.set(target.messageId, detail);
        }
        this.showTooltip(clientX, clientY, messagePopup(detail));
      } catch {
        this.showTooltip(clientX, clientY, ["message details unavailable"]);
      }
      return;
    }
    this.hoverMessageId = null;
    if (target.kind === "rect") {
      this.showTooltip(clientX, clientY, [
        `${target.lane}: ${Math.round(target.durationMs)} ms`,
        `${target.pctOfSlice.toFixed(0)}% of slice (${target.color})`,
      ]);
    } else if (target.kind === "cpu") {
      this.showTooltip(clientX, clientY, [
        `cpu ${target.loadPct.toFixed(2)}% at ${fmtClock(Math.round(target.timeMs))}`,
      ]);
    } else if (target.kind === "glyph") {
      this.showTooltip(clientX, clientY, [`${target.icon} on ${target.lane}`]);
    } else {
      this.showTooltip(clientX, clientY, [`${target.agentId} (drag to reorder)`]);
    }
  }

  private showTooltip(x: number, y: number, lines: string[]): void {
    this.tooltip.replaceChildren(
      ...lines.map((line) => {
        const div = document.createElement("div");
        div.textContent = line;
        return div;
      }),
    );
    this.tooltip.style.left = `${x + 14}px`;
    this.tooltip.style.top = `${y + 14}px`;
    this.tooltip.style.visibility = "visible";
  }

  private hideTooltip(): void {
    this.tooltip.style.visibility = "hidden";
  }

  private showBanner(text: string): void {
    this.banner.textContent = text;
    this.banner.style.display = "block";
  }

  private hideBanner(): void {
    this.banner.style.display = "none";
  }
}

function fmtClock(ms: number): string {
  const minutes = Math.floor(ms / 60000);
  const seconds = Math.floor((ms % 60000) / 1000);
  const millis = ms % 1000;
  return minutes > 0
    ? `${minutes}:${String(seconds).padStart(2, "0")}.${String(millis).padStart(3, "0")}`
    : `${seconds}.${String(millis).padStart(3, "0")}`;
}

new App().boot().catch((error) => {
  const banner = document.getElementById("banner");
  if (banner) {
    banner.textContent = `failed to load session: ${String(error)}`;
    (banner as HTMLElement).style.display = "block";
  }
});
