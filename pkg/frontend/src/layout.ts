/** Pure screen-space layout of a scene payload, plus hit-testing.
 *
 * The backend already culls and positions everything in viewport pixels
 * (x = (t - t0) * px_per_ms); layout only assigns vertical rows and offsets
 * the timeline by the pinned caption gutter. No metric is recomputed here.
 */
import type { Scene } from "./types";

export interface LayoutOptions {
  gutterPx: number;     // pinned caption column
  axisPx: number;       // session time line strip height
  cpuPx: number;        // CPU strip height
  lanePx: number;       // one agent row
  rectPx: number;       // rectangle height inside a row
}

export const DEFAULT_LAYOUT: LayoutOptions = {
  gutterPx: 148,
  axisPx: 26,
  cpuPx: 16,
  lanePx: 26,
  rectPx: 14,
};

export interface LaneRow {
  agentId: string;
  caption: string;
  darkness: number;
  y: number;       // row top
  centerY: number;
  lineX0: number;  // lane life line, gutter-offset screen px
  lineX1: number;
}

export interface RectBox {
  lane: string;
  x: number;
  y: number;
  w: number;
  h: number;
  color: string;
  eventRef: number;
  durationMs: number;
  pctOfSlice: number;
}

export interface GlyphDot {
  lane: string;
  x: number;
  y: number;
  icon: string;
  eventRef: number;
}

export interface ArcLine {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  messageId: string;
  pending: boolean;
  direction: string;
}

export interface CpuBand {
  x0: number;
  x1: number;
  color: string;
  loadPct: number;
}

export interface AxisTick {
  x: number;
  label: string;
}

export interface ExternalRow {
  platformId: string;
  y: number;
}

export interface RenderModel {
  widthPx: number;
  heightPx: number;
  gutterPx: number;
  axisY: number;
  cpuY: number;
  lanesTop: number;
  laneRows: LaneRow[];
  externalRows: ExternalRow[];
  rects: RectBox[];
  glyphs: GlyphDot[];
  arcs: ArcLine[];
  cpu: CpuBand[];
  axis: AxisTick[];
  pxPerMs: number;
  t0: number;
  t1: number;
}

export function buildLayout(
  scene: Scene,
  widthPx: number,
  opts: LayoutOptions = DEFAULT_LAYOUT,
): RenderModel {
  const { gutterPx, axisPx, cpuPx, lanePx, rectPx } = opts;
  const lanesTop = axisPx + cpuPx;
  const tx = (x: number) => gutterPx + x;

  const laneRows: LaneRow[] = scene.lanes.map((lane) => {
    const y = lanesTop + lane.y_index * lanePx;
    return {
      agentId: lane.agent_id,
      caption: lane.caption,
      darkness: lane.darkness,
      y,
      centerY: y + lanePx / 2,
      lineX0: tx(Math.max(0, lane.x0)),
      lineX1: tx(Math.min(widthPx - gutterPx, lane.x1)),
    };
  });
  const rowByAgent = new Map(laneRows.map((row) => [row.agentId, row]));

  const externalTop = lanesTop + scene.lanes.length * lanePx + (scene.external_lines.length ? lanePx / 2 : 0);
  const externalRows: ExternalRow[] = scene.external_lines.map((line) => ({
    platformId: line.platform_id,
    y: externalTop + line.y_index * lanePx,
  }));
  const externalRowById = new Map(externalRows.map((row) => [row.platformId, row]));

  const rects: RectBox[] = [];
  for (const rect of scene.rects) {
    const row = rowByAgent.get(rect.lane);
    if (!row) continue;
    const w = rect.x1 - rect.x0;
    const durationMs = w / scene.px_per_ms;
    rects.push({
      lane: rect.lane,
      x: tx(rect.x0),
      y: row.centerY - rectPx / 2,
      w,
      h: rectPx,
      color: rect.color,
      eventRef: rect.event_ref,
      durationMs,
      pctOfSlice: (durationMs / scene.slice_ms) * 100,
    });
  }

  const glyphs: GlyphDot[] = [];
  for (const glyph of scene.glyphs) {
    const row = rowByAgent.get(glyph.lane);
    if (!row) continue;
    glyphs.push({
      lane: glyph.lane,
      x: tx(glyph.x),
      y: row.centerY,
      icon: glyph.icon_kind,
      eventRef: glyph.event_ref,
    });
  }

  const arcs: ArcLine[] = [];
  for (const arc of scene.arcs) {
    const fromY = arc.from_kind === "lane"
      ? rowByAgent.get(arc.from_ref)?.centerY
      : externalRowById.get(arc.from_ref)?.y;
    const toY = arc.to_kind === "lane"
      ? rowByAgent.get(arc.to_ref)?.centerY
      : externalRowById.get(arc.to_ref)?.y;
    if (fromY === undefined || toY === undefined) continue;
    // a pending half-arc dangles toward the receiver without reaching a row
    const x2 = arc.x_receive !== null ? tx(arc.x_receive) : tx(arc.x_send) + 18;
    const y2 = arc.x_receive !== null ? toY : (fromY + toY) / 2;
    arcs.push({
      x1: tx(arc.x_send),
      y1: fromY,
      x2,
      y2,
      messageId: arc.message_id,
      pending: arc.pending,
      direction: arc.direction,
    });
  }

  const cpu: CpuBand[] = scene.cpu_strip.map((segment) => ({
    x0: tx(segment.x0),
    x1: tx(segment.x1),
    color: segment.color,
    loadPct: segment.load_pct,
  }));

  const axis: AxisTick[] = scene.time_axis.map((tick) => ({
    x: tx(tick.x),
    label: tick.label,
  }));

  const bottom = externalRows.length
    ? externalRows[externalRows.length - 1].y + lanePx
    : lanesTop + scene.lanes.length * lanePx;

  return {
    widthPx,
    heightPx: bottom,
    gutterPx,
    axisY: 0,
    cpuY: axisPx,
    lanesTop,
    laneRows,
    externalRows,
    rects,
    glyphs,
    arcs,
    cpu,
    axis,
    pxPerMs: scene.px_per_ms,
    t0: scene.t0,
    t1: scene.t1,
  };
}

export type HoverTarget =
  | { kind: "arc"; messageId: string; pending: boolean }
  | { kind: "rect"; eventRef: number; color: string; durationMs: number; pctOfSlice: number; lane: string }
  | { kind: "glyph"; icon: string; eventRef: number; lane: string }
  | { kind: "cpu"; timeMs: number; loadPct: number }
  | { kind: "caption"; agentId: string }
  | null;

function segmentDistance(px: number, py: number, x1: number, y1: number, x2: number, y2: number): number {
  const dx = x2 - x1;
  const dy = y2 - y1;
  const lengthSq = dx * dx + dy * dy;
  let t = lengthSq === 0 ? 0 : ((px - x1) * dx + (py - y1) * dy) / lengthSq;
  t = Math.max(0, Math.min(1, t));
  const cx = x1 + t * dx;
  const cy = y1 + t * dy;
  return Math.hypot(px - cx, py - cy);
}

/** What the pointer is over; arcs win over rects, rects over the CPU strip. */
export function hitTest(model: RenderModel, x: number, y: number): HoverTarget {
  for (const arc of model.arcs) {
    if (segmentDistance(x, y, arc.x1, arc.y1, arc.x2, arc.y2) <= 4) {
      return { kind: "arc", messageId: arc.messageId, pending: arc.pending };
    }
  }
  for (const glyph of model.glyphs) {
    if (Math.hypot(x - glyph.x, y - glyph.y) <= 5) {
      return { kind: "glyph", icon: glyph.icon, eventRef: glyph.eventRef, lane: glyph.lane };
    }
  }
  for (const rect of model.rects) {
    if (x >= rect.x && x <= rect.x + Math.max(rect.w, 1) && y >= rect.y && y <= rect.y + rect.h) {
      return {
        kind: "rect",
        eventRef: rect.eventRef,
        color: rect.color,
        durationMs: rect.durationMs,
        pctOfSlice: rect.pctOfSlice,
        lane: rect.lane,
      };
    }
  }
  if (y >= model.cpuY && y <= model.cpuY + 16 && x >= model.gutterPx) {
    for (const band of model.cpu) {
      if (x >= band.x0 && x < band.x1) {
        const timeMs = model.t0 + (x - model.gutterPx) / model.pxPerMs;
        return { kind: "cpu", timeMs, loadPct: band.loadPct };
      }
    }
  }
  if (x < model.gutterPx) {
    for (const row of model.laneRows) {
      if (y >= row.y && y < row.y + (row.centerY - row.y) * 2) {
        return { kind: "caption", agentId: row.agentId };
      }
    }
  }
  return null;
}
