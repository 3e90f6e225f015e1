// Server connection: one websocket for the envelope stream, fetch for uploads.

import { PROTOCOL_VERSION, decodeEnvelope, type Catalog, type Envelope } from "./protocol.js";

export interface NetHandlers {
  onEnvelope: (envelope: Envelope) => void;
  onOpen?: () => void;
  onClose?: () => void;
}

export class SocketClient {
  private ws: WebSocket | null = null;
  private seq = 0;
  token: string | null = null;

  constructor(private baseUrl: string, private handlers: NetHandlers) {}

  connect(): void {
    const url = this.baseUrl.replace(/^http/, "ws") + "/ws";
    this.ws = new WebSocket(url);
    this.ws.onopen = () => {
      this.seq = 0;
      this.handlers.onOpen?.();
      if (this.token) this.send("resume", { token: this.token });
    };
    this.ws.onmessage = (event) => {
      const envelope = decodeEnvelope(String(event.data));
      if (envelope) this.handlers.onEnvelope(envelope);
    };
    this.ws.onclose = () => {
      this.handlers.onClose?.();
      // lean reconnect; resume fires from onopen when a token exists
      setTimeout(() => this.connect(), 1500);
    };
  }

  send(kind: string, payload: Record<string, unknown> = {}): void {
    if (!this.ws || this.ws.readyState !== WebSocket.OPEN) return;
    this.seq += 1;
    this.ws.send(JSON.stringify({ v: PROTOCOL_VERSION, seq: this.seq, kind, payload }));
  }
}

export async function fetchCatalog(baseUrl: string): Promise<Catalog> {
  const response = await fetch(baseUrl + "/catalog");
  if (!response.ok) throw new Error(`catalog fetch failed: ${response.status}`);
  return (await response.json()) as Catalog;
}

export async function uploadIllustration(
  baseUrl: string,
  matchId: string,
  token: string,
  blob: Blob,
  mediaType: string,
): Promise<{ token: string }> {
  const response = await fetch(
    `${baseUrl}/matches/${encodeURIComponent(matchId)}/assets?token=${encodeURIComponent(token)}`,
    { method: "POST", body: blob, headers: { "content-type": mediaType } },
  );
  if (!response.ok) {
    const body = await response.json().catch(() => ({}));
    throw new Error(body.message ?? `upload failed: ${response.status}`);
  }
  return (await response.json()) as { token: string };
}

/** Resolve the asset URL for a cover-art token; builtin refs render locally. */
export function assetUrl(baseUrl: string, token: string): string | null {
  if (token.startsWith("sha256:")) {
    return `${baseUrl}/assets/${encodeURIComponent(token)}`;
  }
  return null;
}
