// Single reducer for all server events, applied in seq order.
//
// The store is the only state the UI reads. It keeps the latest projection,
// the countdown, and a playback queue of resolution logs. It hard-strips
// any plan-shaped data from the opponent side before storing, so opponent
// plans cannot exist in client memory before a resolved event even if a
// buggy or malicious server were to send them.

import { CountdownClock } from "./clock.js";
import type { Envelope, Projection, ResolutionLog } from "./protocol.js";

export type Screen = "connect" | "lobby" | "wizard" | "illustrate" | "battle" | "end";

export interface MatchInfo {
  matchId: string;
  token: string;
  playerIndex: number;
  opponentName: string;
  timerScale: number;
}

export interface StoreState {
  screen: Screen;
  queued: boolean;
  match: MatchInfo | null;
  projection: Projection | null;
  names: [string, string] | null;
  playback: ResolutionLog[];
  roundBanner: { result: { round: number; winner: number | null; reason: string }; wins: number[] } | null;
  finale: { winner: number | null; round_wins: number[]; ties: number } | null;
  lastError: { code: string; message: string } | null;
  lastAck: number | null;
}

export function initialState(): StoreState {
  return {
    screen: "connect",
    queued: false,
    match: null,
    projection: null,
    names: null,
    playback: [],
    roundBanner: null,
    finale: null,
    lastError: null,
    lastAck: null,
  };
}

function screenFor(projection: Projection): Screen {
  switch (projection.phase) {
    case "setup":
      return "wizard";
    case "customize":
    case "illustrate":
      return "illustrate";
    case "await_plans":
    case "round_over":
      return "battle";
    case "match_over":
      return "end";
  }
}

/** Drop anything plan-shaped from the opponent's half of a projection. */
export function sanitizeProjection(projection: Projection): Projection {
  const opponent: any = { ...projection.opponent };
  delete opponent.plan;
  delete opponent.entries;
  opponent.plan_submitted = Boolean(opponent.plan_submitted);
  return { ...projection, opponent };
}

export class Store {
  state: StoreState = initialState();
  clock = new CountdownClock();
  private lastSeq = 0;
  private listeners: (() => void)[] = [];

  subscribe(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  /** Apply one server envelope; ignores stale/duplicate seq numbers. */
  apply(envelope: Envelope, now: number = Date.now()): void {
    if (envelope.seq <= this.lastSeq) return;
    this.lastSeq = envelope.seq;
    const s = this.state;
    if (envelope.ack !== null && envelope.ack !== undefined) s.lastAck = envelope.ack;
    switch (envelope.kind) {
      case "queued":
        s.queued = true;
        s.screen = "lobby";
        break;
      case "match_found":
        s.queued = false;
        s.match = {
          matchId: envelope.payload.match_id,
          token: envelope.payload.token,
          playerIndex: envelope.payload.player_index,
          opponentName: envelope.payload.opponent_name,
          timerScale: envelope.payload.timer_scale ?? 1,
        };
        s.screen = "wizard";
        break;
      case "state": {
        s.projection = sanitizeProjection(envelope.payload.projection as Projection);
        s.names = envelope.payload.names ?? s.names;
        if (envelope.payload.remaining_s !== null && envelope.payload.remaining_s !== undefined) {
          this.clock.sync(envelope.payload.remaining_s, now);
        } else {
          this.clock.clear();
        }
        s.screen = screenFor(s.projection);
        break;
      }
      case "timer_sync":
        if (envelope.payload.remaining_s !== null && envelope.payload.remaining_s !== undefined) {
          this.clock.sync(envelope.payload.remaining_s, now);
        }
        break;
      case "resolved":
        s.playback.push(envelope.payload.log as ResolutionLog);
        break;
      case "round_end":
        s.roundBanner = { result: envelope.payload.result, wins: envelope.payload.round_wins };
        break;
      case "match_end":
        s.finale = envelope.payload;
        s.screen = "end";
        break;
      case "error":
        s.lastError = { code: envelope.payload.code, message: envelope.payload.message };
        break;
      default:
        break; // plan_ack, pong: nothing to store
    }
    this.emit();
  }

  /** Reconnect bookkeeping: server seq restarts per connection. */
  resetStream(): void {
    this.lastSeq = 0;
  }

  shiftPlayback(): ResolutionLog | undefined {
    return this.state.playback.shift();
  }

  clearError(): void {
    this.state.lastError = null;
  }
}
