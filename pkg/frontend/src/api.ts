/** Thin fetch client for the snapshot service; the single source of numbers. */
import type { BirdsEye, CpuSeries, FlatProfile, MessageDetail, Scene, SessionInfo } from "./types";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function getJson<T>(base: string, path: string): Promise<T> {
  const response = await fetch(base + path);
  if (!response.ok) {
    throw new ApiError(response.status, `${path}: HTTP ${response.status}`);
  }
  return (await response.json()) as T;
}

export class Api {
  constructor(private base: string = "") {}

  session(): Promise<SessionInfo> {
    return getJson(this.base, "/api/session");
  }

  flatProfile(): Promise<FlatProfile> {
    return getJson(this.base, "/api/flat-profile");
  }

  scene(params: URLSearchParams): Promise<Scene> {
    return getJson(this.base, `/api/scene?${params.toString()}`);
  }

  message(id: string): Promise<MessageDetail> {
    return getJson(this.base, `/api/message/${encodeURIComponent(id)}`);
  }

  cpu(bucketMs: number): Promise<CpuSeries> {
    return getJson(this.base, `/api/cpu?bucket_ms=${bucketMs}`);
  }

  birdsEye(buckets: number): Promise<BirdsEye> {
    return getJson(this.base, `/api/birds-eye?buckets=${buckets}`);
  }
}

/** Popup text for a hovered message arc, straight from the API payload. */
export function messagePopup(detail: MessageDetail): string[] {
  const inFlight = detail.received_at === null ? " (in flight)" : "";
  const lines = [
    `${detail.performative}  ${detail.sender.agent_id} → ${detail.receiver.agent_id}`,
    `scope: ${detail.scope}${inFlight}`,
  ];
  if (detail.conversation_id) lines.push(`conversation: ${detail.conversation_id}`);
  if (detail.content) lines.push(detail.content);
  for (const [key, value] of detail.other) lines.push(`${key}: ${value}`);
  return lines;
}
