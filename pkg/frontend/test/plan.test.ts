// Wizard and plan-builder local validation mirrors the server's rules.
import { describe, expect, it } from "vitest";

import { PlanBuilder, WizardSelection } from "../src/plan.js";
import type { Catalog, Projection } from "../src/protocol.js";

const catalog: Catalog = {
  version: 1,
  prompts: [{ id: "p", name: "P", description: "d", keywords: [] }],
  moves: [
    { id: "slam", display_name: "Slam", kind: "attack", magnitude: 8, dice_window: 0, activation_round: 1, effect_text: "" },
    { id: "duck", display_name: "Duck", kind: "dodge", magnitude: 0, dice_window: 5, activation_round: 1, effect_text: "" },
  ],
  archetypes: [{ id: "a", name: "A", base_hp: 20, move_pool: ["slam", "duck"] }],
  premade_cards: [],
  placeholder_asset: "builtin:placeholder",
  timer_schedule: [1080, 600, 420],
};

function card(slot: number, knockedOut = false) {
  return {
    slot, origin: "premade" as const, content_id: "x", name: `card${slot}`,
    max_hp: 10, hp: knockedOut ? 0 : 10, knocked_out: knockedOut, moves: [],
  };
}

function projection(overrides: Partial<Projection> = {}): Projection {
  return {
    match_id: "m", phase: "await_plans", round: 1, turn: 1, initiative: 0,
    player_index: 0, max_turns: 30,
    you: {
      hand: [card(0), card(1), card(2)], archetype_id: "a", prompt_id: "p",
      round_wins: 0, plan: null, plan_submitted: false,
      attached_this_round: true, tie_requested: false,
    },
    opponent: {
      hand: [card(0), card(1, true), card(2)], selected: true, round_wins: 0,
      plan_submitted: false, attached_this_round: true, tie_requested: false,
    },
    round_results: [], pending_result: null, winner: null,
    ...overrides,
  };
}

describe("WizardSelection", () => {
  it("cannot hold the same premade twice", () => {
    const wizard = new WizardSelection();
    wizard.togglePremade("rex");
    wizard.togglePremade("rex"); // second toggle deselects instead of duplicating
    expect(wizard.premadeIds).toEqual([]);
    wizard.togglePremade("rex");
    wizard.togglePremade("owl");
    wizard.togglePremade("bat"); // third pick is refused
    expect(wizard.premadeIds).toEqual(["rex", "owl"]);
  });

  it("lists what is still missing", () => {
    const wizard = new WizardSelection();
    expect(wizard.problems().length).toBe(4);
    wizard.promptId = "p";
    wizard.archetypeId = "a";
    wizard.firstMoveId = "slam";
    wizard.togglePremade("rex");
    wizard.togglePremade("owl");
    expect(wizard.problems()).toEqual([]);
    expect(wizard.payload().premade_ids).toEqual(["rex", "owl"]);
  });
});

describe("PlanBuilder", () => {
  it("cannot express two moves on one card", () => {
    const planner = new PlanBuilder();
    planner.assign(0, "slam", 0);
    planner.assign(0, "duck", null); // replaces, never duplicates
    expect(planner.size).toBe(1);
    expect(planner.entries()).toEqual([{ slot: 0, move_id: "duck", target_slot: null }]);
  });

  it("emits entries sorted by slot", () => {
    const planner = new PlanBuilder();
    planner.assign(2, "slam", 0);
    planner.assign(0, "duck", null);
    expect(planner.entries().map((e) => e.slot)).toEqual([0, 2]);
  });

  it("flags attacks aimed at dead cards before sending", () => {
    const planner = new PlanBuilder();
    planner.assign(0, "slam", 1); // opponent slot 1 is knocked out
    expect(planner.problems(projection(), catalog)).toHaveLength(1);
    planner.assign(0, "slam", 2);
    expect(planner.problems(projection(), catalog)).toEqual([]);
  });

  it("flags defensive moves carrying a target", () => {
    const planner = new PlanBuilder();
    planner.assign(0, "duck", 2);
    expect(planner.problems(projection(), catalog)).toHaveLength(1);
  });

  it("flags knocked-out planners", () => {
    const dead = projection();
    dead.you.hand[0] = card(0, true);
    const planner = new PlanBuilder();
    planner.assign(0, "slam", 0);
    expect(planner.problems(dead, catalog)).toHaveLength(1);
  });

  it("resets cleanly between turns", () => {
    const planner = new PlanBuilder();
    planner.assign(0, "slam", 0);
    planner.reset();
    expect(planner.size).toBe(0);
    expect(planner.entries()).toEqual([]);
  });
});
