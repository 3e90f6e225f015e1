// Mirror of the server's wire protocol (see docs/protocol.md in the repo root).

export const PROTOCOL_VERSION = 1;

export interface Envelope {
  v: number;
  seq: number;
  kind: string;
  match_id: string | null;
  ack: number | null;
  payload: any;
}

export interface CardMoveView {
  move_id: string;
  cover_art: string | null;
  unlocks_round: number;
}

export interface CardView {
  slot: number;
  origin: "custom" | "premade";
  content_id: string;
  name: string;
  max_hp: number;
  hp: number;
  knocked_out: boolean;
  moves: CardMoveView[];
}

export interface OwnSide {
  hand: CardView[];
  archetype_id: string | null;
  prompt_id: string | null;
  round_wins: number;
  plan: { entries: PlanEntry[] } | null;
  plan_submitted: boolean;
  attached_this_round: boolean;
  tie_requested: boolean;
}

// The opponent view deliberately has no plan field; the server never sends
// one before the resolved event and the store refuses to keep one (tested).
export interface OpponentSide {
  hand: CardView[];
  selected: boolean;
  round_wins: number;
  plan_submitted: boolean;
  attached_this_round: boolean;
  tie_requested: boolean;
}

export interface Projection {
  match_id: string;
  phase: "setup" | "customize" | "illustrate" | "await_plans" | "round_over" | "match_over";
  round: number;
  turn: number;
  initiative: number;
  player_index: number;
  max_turns: number;
  you: OwnSide;
  opponent: OpponentSide;
  round_results: RoundResult[];
  pending_result: RoundResult | null;
  winner: number | null;
}

export interface RoundResult {
  round: number;
  winner: number | null;
  reason: string;
}

export interface PlanEntry {
  slot: number;
  move_id: string;
  target_slot: number | null;
}

export type LogStep =
  | { kind: "dice_rolled"; player: number; slot: number; move_id: string; face: number; success: boolean }
  | { kind: "damage_dealt"; attacker: [number, number]; target: [number, number]; amount: number; reflected: boolean }
  | { kind: "attack_fizzled"; player: number; slot: number; reason: string }
  | { kind: "knockout"; player: number; slot: number }
  | { kind: "round_end"; winner: number | null; reason: string };

export interface ResolutionLog {
  round: number;
  turn: number;
  initiative: number;
  steps: LogStep[];
  rng_cursor_after: number;
}

export interface CatalogMove {
  id: string;
  display_name: string;
  kind: "attack" | "dodge" | "reflect";
  magnitude: number;
  dice_window: number;
  activation_round: number;
  effect_text: string;
}

export interface Catalog {
  version: number;
  prompts: { id: string; name: string; description: string; keywords: string[] }[];
  moves: CatalogMove[];
  archetypes: { id: string; name: string; base_hp: number; move_pool: string[] }[];
  premade_cards: {
    id: string; name: string; max_hp: number; moves: string[];
    cover_art: string; illustrator: string;
  }[];
  placeholder_asset: string;
  timer_schedule: [number, number, number];
}

export function moveById(catalog: Catalog, id: string): CatalogMove | undefined {
  return catalog.moves.find((m) => m.id === id);
}

export function decodeEnvelope(raw: string): Envelope | null {
  try {
    const doc = JSON.parse(raw);
    if (typeof doc !== "object" || doc === null) return null;
    if (typeof doc.seq !== "number" || typeof doc.kind !== "string") return null;
    return doc as Envelope;
  } catch {
    return null;
  }
}
