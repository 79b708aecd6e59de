/** Wire types mirroring the backend's canonical JSON payloads. */

export interface SessionInfo {
  session_id: string;
  platform_name: string;
  started_at_epoch_ms: number;
  duration_ms: number;
  slice_ms: number;
  clock_resolution_ms: number;
  format_version: number;
}

export interface FlatProfileRow {
  agent_id: string;
  name: string;
  iterations_nonzero: number;
  overload_count: number;
  activity_ms: number;
  pct_session: number;
  max_ms: number;
  avg_ms: number;
  msgs_sent: number;
  msgs_received: number;
  breakdown_ms: [number, number, number] | null;
}

export interface FlatProfile {
  header: {
    duration_ms: number;
    total_activity_ms: number;
    messages_sent: number;
    messages_received: number;
    slice_ms: number;
  };
  rows: FlatProfileRow[];
}

export interface TimeTick {
  t: number;
  x: number;
  label: string;
}

export interface CpuSegment {
  x0: number;
  x1: number;
  color: string;
  load_pct: number;
}

export interface SceneLane {
  agent_id: string;
  caption: string;
  darkness: number;
  y_index: number;
  x0: number;
  x1: number;
}

export interface SceneRect {
  lane: string;
  x0: number;
  x1: number;
  color: "green" | "orange" | "red";
  event_ref: number;
}

export interface SceneGlyph {
  lane: string;
  x: number;
  icon_kind: string;
  event_ref: number;
}

export interface SceneArc {
  from_kind: "lane" | "external";
  from_ref: string;
  to_kind: "lane" | "external";
  to_ref: string;
  x_send: number;
  x_receive: number | null;
  message_id: string;
  direction: "intra" | "outbound" | "inbound";
  pending: boolean;
}

export interface ExternalLine {
  platform_id: string;
  y_index: number;
}

export interface BirdsEye {
  duration_ms: number;
  width_buckets: number;
  lanes: { agent_id: string; classes: string[] }[];
}

export interface Scene {
  t0: number;
  t1: number;
  px_per_ms: number;
  duration_ms: number;
  slice_ms: number;
  time_axis: TimeTick[];
  cpu_strip: CpuSegment[];
  lanes: SceneLane[];
  rects: SceneRect[];
  glyphs: SceneGlyph[];
  arcs: SceneArc[];
  external_lines: ExternalLine[];
  birds_eye: BirdsEye;
}

export interface MessageDetail {
  message_id: string;
  sender: { platform_id: string; agent_id: string; is_external: boolean };
  receiver: { platform_id: string; agent_id: string; is_external: boolean };
  sent_at: number;
  received_at: number | null;
  scope: string;
  performative: string;
  conversation_id: string | null;
  content: string;
  other: [string, string][];
}

export interface CpuSeries {
  bucket_ms: number;
  buckets: {
    bucket_start: number;
    mean_load_pct: number;
    max_load_pct: number;
    empty: boolean;
  }[];
}
