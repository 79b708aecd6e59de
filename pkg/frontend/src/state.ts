/** Viewport/UI state and its pure gesture transitions.
 *
 * Everything here is plain data in and out, so gesture behavior (zoom about a
 * point, bird's-eye jumps, lane drag) is testable without a browser. Times
 * are integer milliseconds; viewports always stay inside [0, duration].
 */

export interface UiState {
  t0: number;
  t1: number;
  durationMs: number;
  order: string[] | null; // explicit lane order, null = server's automatic order
  hidden: string[];
}

export const MIN_SPAN_MS = 10;

export function initialState(durationMs: number): UiState {
  return { t0: 0, t1: Math.max(durationMs, MIN_SPAN_MS), durationMs, order: null, hidden: [] };
}

function clampWindow(t0: number, t1: number, durationMs: number): [number, number] {
  let span = Math.max(MIN_SPAN_MS, Math.min(Math.round(t1 - t0), durationMs));
  let start = Math.round(t0);
  if (start < 0) start = 0;
  if (start + span > durationMs) start = durationMs - span;
  if (start < 0) {
    start = 0;
    span = durationMs;
  }
  return [start, start + span];
}

/** Shift the window by a time delta (positive = later). */
export function pan(state: UiState, deltaMs: number): UiState {
  const span = state.t1 - state.t0;
  let t0 = Math.round(state.t0 + deltaMs);
  if (t0 < 0) t0 = 0;
  if (t0 + span > state.durationMs) t0 = Math.max(0, state.durationMs - span);
  return { ...state, t0, t1: t0 + span };
}

/**
 * Zoom by `factor` (>1 zooms in) keeping the time under the anchor fixed.
 * `anchorFrac` is the anchor's position inside the window, in [0, 1].
 */
export function zoomAboutPoint(state: UiState, factor: number, anchorFrac: number): UiState {
  const span = state.t1 - state.t0;
  const anchorT = state.t0 + anchorFrac * span;
  const newSpan = Math.max(MIN_SPAN_MS, Math.min(span / factor, state.durationMs));
  let t0 = anchorT - anchorFrac * newSpan;
  let t1 = t0 + newSpan;
  [t0, t1] = clampWindow(t0, t1, state.durationMs);
  return { ...state, t0, t1 };
}

/** Anchor time for a window fraction; what zoomAboutPoint keeps fixed. */
export function anchorTime(state: UiState, anchorFrac: number): number {
  return state.t0 + anchorFrac * (state.t1 - state.t0);
}

/** Center the current span on fraction `f` of the whole session. */
export function birdsEyeJump(state: UiState, f: number): UiState {
  const span = state.t1 - state.t0;
  const center = Math.max(0, Math.min(1, f)) * state.durationMs;
  const [t0, t1] = clampWindow(center - span / 2, center + span / 2, state.durationMs);
  return { ...state, t0, t1 };
}

export function viewportCenter(state: UiState): number {
  return (state.t0 + state.t1) / 2;
}

/** Move the lane at `from` so it lands at index `to` (drag reordering). */
export function laneDrag(state: UiState, visibleOrder: string[], from: number, to: number): UiState {
  const order = state.order ? [...state.order] : [...visibleOrder];
  if (from < 0 || from >= order.length) return state;
  const [moved] = order.splice(from, 1);
  const target = Math.max(0, Math.min(order.length, to));
  order.splice(target, 0, moved);
  return { ...state, order };
}

export function toggleHidden(state: UiState, agentId: string): UiState {
  const hidden = state.hidden.includes(agentId)
    ? state.hidden.filter((a) => a !== agentId)
    : [...state.hidden, agentId];
  return { ...state, hidden };
}

/** Query parameters for the scene fetch this state calls for. */
export function sceneRequest(state: UiState, timelineWidthPx: number): URLSearchParams {
  const span = Math.max(1, state.t1 - state.t0);
  const params = new URLSearchParams();
  params.set("t0", String(state.t0));
  params.set("t1", String(state.t1));
  params.set("px_per_ms", String(timelineWidthPx / span));
  if (state.hidden.length) params.set("hidden", state.hidden.join(","));
  if (state.order) params.set("order", state.order.join(","));
  return params;
}
