// Local models for the setup wizard and the battle planner.
//
// Both enforce the rules the server would reject anyway, so bad input never
// leaves the client: a slot holds at most one assignment by construction,
// and the wizard blocks duplicate premade picks before sending.

import type { Catalog, PlanEntry, Projection } from "./protocol.js";
import { moveById } from "./protocol.js";

export class WizardSelection {
  promptId: string | null = null;
  archetypeId: string | null = null;
  firstMoveId: string | null = null;
  premadeIds: string[] = [];

  togglePremade(id: string): void {
    if (this.premadeIds.includes(id)) {
      this.premadeIds = this.premadeIds.filter((x) => x !== id);
    } else if (this.premadeIds.length < 2) {
      this.premadeIds.push(id);
    }
  }

  /** Human-readable blockers; empty means the selection can be sent. */
  problems(): string[] {
    const out: string[] = [];
    if (!this.promptId) out.push("pick a character");
    if (!this.archetypeId) out.push("pick an archetype");
    if (!this.firstMoveId) out.push("pick your first move");
    if (this.premadeIds.length !== 2) out.push("pick two deck cards");
    if (new Set(this.premadeIds).size !== this.premadeIds.length) {
      out.push("deck cards must be two different cards");
    }
    return out;
  }

  payload() {
    return {
      prompt_id: this.promptId,
      archetype_id: this.archetypeId,
      first_move_id: this.firstMoveId,
      premade_ids: this.premadeIds,
    };
  }
}

export interface Assignment {
  moveId: string;
  target: number | null;
}

/**
 * Per-turn plan builder. Keyed by slot, so assigning a second move to a
 * card replaces the first: two moves on one card cannot be expressed.
 */
export class PlanBuilder {
  private assignments = new Map<number, Assignment>();

  assign(slot: number, moveId: string, target: number | null): void {
    this.assignments.set(slot, { moveId, target });
  }

  clearSlot(slot: number): void {
    this.assignments.delete(slot);
  }

  reset(): void {
    this.assignments.clear();
  }

  get(slot: number): Assignment | undefined {
    return this.assignments.get(slot);
  }

  get size(): number {
    return this.assignments.size;
  }

  entries(): PlanEntry[] {
    return [...this.assignments.entries()]
      .sort(([a], [b]) => a - b)
      .map(([slot, a]) => ({ slot, move_id: a.moveId, target_slot: a.target }));
  }

  /** Blockers against the current projection; empty means submittable. */
  problems(projection: Projection, catalog: Catalog): string[] {
    const out: string[] = [];
    for (const [slot, assignment] of this.assignments) {
      const card = projection.you.hand.find((c) => c.slot === slot);
      const spec = moveById(catalog, assignment.moveId);
      if (!card || card.knocked_out) {
        out.push(`card ${slot} cannot act`);
        continue;
      }
      if (!spec) continue;
      if (spec.kind === "attack") {
        const target = projection.opponent.hand.find((c) => c.slot === assignment.target);
        if (!target || target.knocked_out) {
          out.push(`${spec.display_name} needs a living target`);
        }
      } else if (assignment.target !== null) {
        out.push(`${spec.display_name} does not take a target`);
      }
    }
    return out;
  }
}
