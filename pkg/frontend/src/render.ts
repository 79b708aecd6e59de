/** Canvas drawing of a RenderModel. Colors and widths come straight from the
 * scene payload; the renderer adds no reclassification of its own. */
import type { RenderModel } from "./layout";
import type { BirdsEye } from "./types";

export const RECT_FILL: Record<string, string> = {
  green: "#35a835",
  orange: "#e8931c",
  red: "#d43333",
};

const CLASS_FILL: Record<string, string> = {
  empty: "#1b1f27",
  green: "#2f7a2f",
  orange: "#b97a1d",
  red: "#b03030",
};

const GLYPH_FILL: Record<string, string> = {
  envelope: "#4aa3e0",
  refusal: "#e05c5c",
  created: "#7ee07e",
  started: "#7ee07e",
  stopped: "#808a99",
  suspended: "#e0c84a",
  resumed: "#7ee07e",
  destroyed: "#e05c5c",
  generic: "#b89ae0",
};

export interface DrawOptions {
  scrollY: number;
  hoverMessageId: string | null;
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  model: RenderModel,
  height: number,
  opts: DrawOptions,
): void {
  const { scrollY } = opts;
  const width = model.widthPx;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10131a";
  ctx.fillRect(0, 0, width, height);

  ctx.save();
  ctx.beginPath();
  ctx.rect(0, model.lanesTop, width, height - model.lanesTop);
  ctx.clip();
  ctx.translate(0, -scrollY);

  // lane life lines, darker for busier agents
  for (const row of model.laneRows) {
    const shade = Math.round(42 + row.darkness * 150);
    ctx.strokeStyle = `rgb(${shade},${shade},${Math.round(shade * 1.12)})`;
    ctx.lineWidth = 1 + row.darkness * 2;
    ctx.beginPath();
    ctx.moveTo(row.lineX0, row.centerY);
    ctx.lineTo(row.lineX1, row.centerY);
    ctx.stroke();
  }
  for (const row of model.externalRows) {
    ctx.strokeStyle = "#6a5acd";
    ctx.setLineDash([6, 4]);
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(model.gutterPx, row.y);
    ctx.lineTo(width, row.y);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  for (const rect of model.rects) {
    ctx.fillStyle = RECT_FILL[rect.color] ?? "#888";
    ctx.fillRect(rect.x, rect.y, Math.max(rect.w, 1), rect.h);
  }

  for (const glyph of model.glyphs) {
    ctx.fillStyle = GLYPH_FILL[glyph.icon] ?? GLYPH_FILL.generic;
    ctx.beginPath();
    ctx.arc(glyph.x, glyph.y, 2.5, 0, Math.PI * 2);
    ctx.fill();
  }

  for (const arc of model.arcs) {
    const hovered = arc.messageId === opts.hoverMessageId;
    ctx.strokeStyle = hovered ? "#ffffff" : arc.direction === "intra" ? "#9fb6d4" : "#c09fe0";
    ctx.lineWidth = hovered ? 2 : 1;
    if (arc.pending) ctx.setLineDash([3, 3]);
    ctx.beginPath();
    ctx.moveTo(arc.x1, arc.y1);
    ctx.lineTo(arc.x2, arc.y2);
    ctx.stroke();
    ctx.setLineDash([]);
    drawArrowHead(ctx, arc.x1, arc.y1, arc.x2, arc.y2);
  }

  ctx.restore();

  // pinned strips: session time line and CPU load
  ctx.fillStyle = "#10131a";
  ctx.fillRect(0, 0, width, model.lanesTop);
  ctx.strokeStyle = "#3c4658";
  ctx.beginPath();
  ctx.moveTo(model.gutterPx, model.cpuY - 6);
  ctx.lineTo(width, model.cpuY - 6);
  ctx.stroke();
  ctx.fillStyle = "#aab6c8";
  ctx.font = "11px system-ui, sans-serif";
  for (const tick of model.axis) {
    ctx.fillText(tick.label, tick.x + 2, model.cpuY - 10);
    ctx.strokeStyle = "#2c3442";
    ctx.beginPath();
    ctx.moveTo(tick.x, model.cpuY - 6);
    ctx.lineTo(tick.x, height);
    ctx.stroke();
  }
  for (const band of model.cpu) {
    ctx.fillStyle = band.color;
    ctx.fillRect(band.x0, model.cpuY, Math.max(band.x1 - band.x0, 1), 12);
  }

  // pinned captions over everything on the left
  ctx.fillStyle = "#171b24";
  ctx.fillRect(0, model.lanesTop, model.gutterPx, height - model.lanesTop);
  ctx.font = "12px system-ui, sans-serif";
  for (const row of model.laneRows) {
    const y = row.centerY - scrollY;
    if (y < model.lanesTop || y > height) continue;
    ctx.fillStyle = "#e8edf5";
    ctx.fillText(row.caption, 8, y + 4, model.gutterPx - 16);
  }
  for (const row of model.externalRows) {
    const y = row.y - scrollY;
    if (y < model.lanesTop || y > height) continue;
    ctx.fillStyle = "#b6a8e8";
    ctx.fillText(`⇄ ${row.platformId}`, 8, y + 4, model.gutterPx - 16);
  }
}

function drawArrowHead(
  ctx: CanvasRenderingContext2D,
  x1: number, y1: number, x2: number, y2: number,
): void {
  const angle = Math.atan2(y2 - y1, x2 - x1);
  ctx.beginPath();
  ctx.moveTo(x2, y2);
  ctx.lineTo(x2 - 6 * Math.cos(angle - 0.4), y2 - 6 * Math.sin(angle - 0.4));
  ctx.lineTo(x2 - 6 * Math.cos(angle + 0.4), y2 - 6 * Math.sin(angle + 0.4));
  ctx.closePath();
  ctx.fillStyle = ctx.strokeStyle as string;
  ctx.fill();
}

export function drawBirdsEye(
  ctx: CanvasRenderingContext2D,
  strip: BirdsEye,
  width: number,
  height: number,
  viewFrac: [number, number],
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#10131a";
  ctx.fillRect(0, 0, width, height);
  const lanes = strip.lanes;
  if (lanes.length) {
    const rowH = Math.max(1, Math.floor(height / lanes.length));
    const bucketW = width / strip.width_buckets;
    lanes.forEach((lane, i) => {
      lane.classes.forEach((cls, k) => {
        if (cls === "empty") return;
        ctx.fillStyle = CLASS_FILL[cls] ?? CLASS_FILL.empty;
        ctx.fillRect(k * bucketW, i * rowH, Math.ceil(bucketW), rowH);
      });
    });
  }
  const [f0, f1] = viewFrac;
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 1;
  ctx.strokeRect(f0 * width, 0.5, Math.max((f1 - f0) * width, 2), height - 1);
}
