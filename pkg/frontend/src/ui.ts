// All screens, rendered from the store on every change.
//
// Full re-render keeps the data flow one-way; the drawing canvas and the
// in-progress plan survive because they live in module caches keyed by
// match/round/turn and get re-attached instead of rebuilt.

import { assetUrl } from "./net.js";
import { Painter } from "./painter.js";
import { PlanBuilder, WizardSelection } from "./plan.js";
import type {
  Catalog,
  CardView,
  LogStep,
  Projection,
  ResolutionLog,
} from "./protocol.js";
import { moveById } from "./protocol.js";
import type { Store } from "./store.js";

export interface AppContext {
  store: Store;
  catalog: Catalog;
  baseUrl: string;
  send: (kind: string, payload?: Record<string, unknown>) => void;
  upload: (blob: Blob, mediaType: string) => Promise<void>;
}

// --- tiny DOM helpers --------------------------------------------------------

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string | null)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    if (child === null) continue;
    node.append(child instanceof Node ? child : document.createTextNode(child));
  }
  return node;
}

function button(label: string, onClick: () => void, cls = "btn"): HTMLButtonElement {
  const node = el("button", { class: cls }, label);
  node.addEventListener("click", onClick);
  return node;
}

// --- per-match UI state that must outlive re-renders ---------------------------

const wizard = new WizardSelection();
let wizardStep = 0;
let painter: Painter | null = null;
let painterKey = "";
let uploadBusy = false;
let uploadError: string | null = null;
const planner = new PlanBuilder();
let plannerKey = "";
let armedSlot: { slot: number; moveId: string } | null = null;
let playbackIndex = 0;
let playbackSeen = false;

// --- entry point ---------------------------------------------------------------

export function renderApp(root: HTMLElement, ctx: AppContext): void {
  const { store } = ctx;
  root.replaceChildren();
  root.append(header(ctx));
  const error = store.state.lastError;
  if (error) {
    const banner = el("div", { class: "error-banner" },
      `${error.code}: ${error.message} `,
      button("dismiss", () => { store.clearError(); renderApp(root, ctx); }, "btn small"));
    root.append(banner);
  }
  switch (store.state.screen) {
    case "connect":
      root.append(connectScreen(ctx));
      break;
    case "lobby":
      root.append(el("section", { class: "panel center" },
        el("h2", {}, "Waiting for an opponent…"),
        el("p", {}, "Share a room code with a friend, or hold tight for the queue.")));
      break;
    case "wizard":
      root.append(wizardScreen(ctx));
      break;
    case "illustrate":
      root.append(customizeOrIllustrate(ctx));
      break;
    case "battle":
      root.append(battleScreen(ctx));
      break;
    case "end":
      root.append(endScreen(ctx));
      break;
  }
}

function header(ctx: AppContext): HTMLElement {
  const { state } = ctx.store;
  const projection = state.projection;
  const bits: string[] = ["inkduel"];
  if (projection && state.names) {
    const me = state.names[projection.player_index];
    const them = state.names[1 - projection.player_index];
    bits.push(`${me} vs ${them}`);
    bits.push(`round ${projection.round}/3`);
    const wins = [projection.you.round_wins, projection.opponent.round_wins];
    bits.push(`wins ${wins[0]}–${wins[1]}`);
  }
  return el("header", { class: "topbar" }, bits.join("  ·  "));
}

// --- connect / lobby -------------------------------------------------------------

function connectScreen(ctx: AppContext): HTMLElement {
  const name = el("input", { class: "text", placeholder: "your name", maxlength: "24" });
  const room = el("input", { class: "text", placeholder: "room code (optional)" });
  const join = button("Find a match", () => {
    const payload: Record<string, unknown> = { name: name.value.trim() };
    if (room.value.trim()) payload.room = room.value.trim();
    if (!name.value.trim()) return;
    ctx.send("hello", payload);
  }, "btn primary");
  return el("section", { class: "panel center" },
    el("h2", {}, "Draw. Duel. Repeat."),
    el("p", {}, "Three rounds; each round you pick a move, illustrate it against the clock, then battle."),
    el("div", { class: "stack" }, name, room, join));
}

// --- setup wizard (3 steps) --------------------------------------------------------

function wizardScreen(ctx: AppContext): HTMLElement {
  const { catalog } = ctx;
  const projection = ctx.store.state.projection;
  if (projection && projection.you.hand.length > 0) {
    return el("section", { class: "panel center" },
      el("h2", {}, "Hand locked in"),
      el("p", {}, "Waiting for your opponent to finish setting up…"));
  }
  const steps = ["Character", "Archetype", "Deck cards"];
  const stepBar = el("div", { class: "steps" },
    ...steps.map((label, i) =>
      el("span", { class: i === wizardStep ? "step active" : "step" }, `${i + 1}. ${label}`)),
    // no hard deadline on setup; five to ten minutes is the expected pace
    el("span", { class: "hint" }, "no timer here; setup usually takes 5-10 minutes"));

  const left = el("div", { class: "grid" });
  const right = el("aside", { class: "preview" });

  if (wizardStep === 0) {
    for (const prompt of catalog.prompts) {
      const card = el("div", { class: wizard.promptId === prompt.id ? "tile selected" : "tile" },
        el("strong", {}, prompt.name),
        el("small", {}, prompt.keywords.join(" · ")));
      card.addEventListener("click", () => { wizard.promptId = prompt.id; rerender(ctx); });
      left.append(card);
    }
    const chosen = catalog.prompts.find((p) => p.id === wizard.promptId);
    right.append(el("h3", {}, chosen?.name ?? "Pick a character"),
      el("p", {}, chosen?.description ?? "A prompt guides the drawings you'll make each round."));
  } else if (wizardStep === 1) {
    for (const archetype of catalog.archetypes) {
      const tile = el("div", { class: wizard.archetypeId === archetype.id ? "tile selected" : "tile" },
        el("strong", {}, archetype.name),
        el("small", {}, `${archetype.base_hp} HP`));
      tile.addEventListener("click", () => {
        wizard.archetypeId = archetype.id;
        wizard.firstMoveId = null;
        rerender(ctx);
      });
      left.append(tile);
    }
    const chosen = catalog.archetypes.find((a) => a.id === wizard.archetypeId);
    right.append(el("h3", {}, chosen?.name ?? "Pick an archetype"));
    if (chosen) {
      right.append(el("p", {}, `${chosen.base_hp} HP. First move (you'll illustrate it in round 1):`));
      for (const moveId of chosen.move_pool) {
        const move = moveById(catalog, moveId)!;
        const row = el("div", { class: wizard.firstMoveId === moveId ? "move-row selected" : "move-row" },
          el("strong", {}, move.display_name), el("small", {}, ` ${move.effect_text}`));
        row.addEventListener("click", () => { wizard.firstMoveId = moveId; rerender(ctx); });
        right.append(row);
      }
    }
  } else {
    for (const premade of catalog.premade_cards) {
      const picked = wizard.premadeIds.includes(premade.id);
      const tile = el("div", { class: picked ? "tile selected" : "tile" },
        coverThumb(ctx, premade.cover_art, premade.name),
        el("strong", {}, premade.name),
        el("small", {}, `${premade.max_hp} HP`));
      tile.addEventListener("click", () => { wizard.togglePremade(premade.id); rerender(ctx); });
      left.append(tile);
    }
    const last = catalog.premade_cards.find((c) => c.id === wizard.premadeIds[wizard.premadeIds.length - 1]);
    right.append(el("h3", {}, last ? last.name : "Pick two deck cards"));
    if (last) {
      right.append(coverThumb(ctx, last.cover_art, last.name, "preview-art"),
        el("small", {}, `art by ${last.illustrator}`));
      for (const moveId of last.moves) {
        const move = moveById(ctx.catalog, moveId)!;
        right.append(el("div", { class: "move-row" },
          el("strong", {}, move.display_name),
          el("small", {}, ` round ${move.activation_round}+ — ${move.effect_text}`)));
      }
    }
  }

  const nav = el("div", { class: "row" });
  if (wizardStep > 0) nav.append(button("Back", () => { wizardStep -= 1; rerender(ctx); }));
  if (wizardStep < 2) {
    nav.append(button("Next", () => { wizardStep += 1; rerender(ctx); }, "btn primary"));
  } else {
    const problems = wizard.problems();
    if (problems.length === 0) {
      nav.append(button("Lock in hand", () => ctx.send("select_hand", wizard.payload()), "btn primary"));
    } else {
      nav.append(el("span", { class: "hint" }, problems.join("; ")));
    }
  }
  return el("section", { class: "panel" }, stepBar,
    el("div", { class: "wizard-body" }, left, right), nav);
}

// --- customize + illustrate -----------------------------------------------------------

function customizeOrIllustrate(ctx: AppContext): HTMLElement {
  const projection = ctx.store.state.projection!;
  if (projection.phase === "customize") return customizeScreen(ctx, projection);
  return illustrateScreen(ctx, projection);
}

function customizeScreen(ctx: AppContext, projection: Projection): HTMLElement {
  const custom = projection.you.hand[0];
  if (custom.moves.length >= projection.round) {
    return el("section", { class: "panel center" },
      el("h2", {}, `Round ${projection.round}: move locked`),
      el("p", {}, "Waiting for your opponent's pick…"));
  }
  const pool = ctx.catalog.archetypes.find((a) => a.id === projection.you.archetype_id)?.move_pool ?? [];
  const known = new Set(custom.moves.map((m) => m.move_id));
  const body = el("div", { class: "grid" });
  for (const moveId of pool) {
    if (known.has(moveId)) continue;
    const move = moveById(ctx.catalog, moveId)!;
    const tile = el("div", { class: "tile" },
      el("strong", {}, move.display_name), el("small", {}, move.effect_text));
    tile.addEventListener("click", () => ctx.send("select_move", { move_id: moveId }));
    body.append(tile);
  }
  return el("section", { class: "panel" },
    el("h2", {}, `Round ${projection.round}: ${custom.name} learns a new move`),
    body);
}

function illustrateScreen(ctx: AppContext, projection: Projection): HTMLElement {
  const store = ctx.store;
  const custom = projection.you.hand[0];
  const move = moveById(ctx.catalog, custom.moves[projection.round - 1].move_id);
  const attached = projection.you.attached_this_round;
  const expired = store.clock.active && store.clock.remaining() <= 0;
  const locked = attached || expired;

  const key = `${projection.match_id}:${projection.round}`;
  if (painterKey !== key) {
    painter = null;
    painterKey = key;
    uploadBusy = false;
    uploadError = null;
  }
  if (!painter) {
    const canvas = el("canvas", { class: "easel" });
    painter = new Painter(canvas);
  }
  painter.locked = locked || uploadBusy;

  const brief = el("div", { class: "brief" },
    el("h2", {}, `Draw: ${custom.name} using ${move?.display_name ?? "the new move"}`),
    el("p", {}, move?.effect_text ?? ""),
    el("div", { class: "countdown", id: "countdown" }, store.clock.display()));

  const tools = el("div", { class: "row tools" });
  if (!locked) {
    const colorInput = el("input", { type: "color", value: painter.color });
    colorInput.addEventListener("input", () => { painter!.color = colorInput.value; painter!.tool = "brush"; });
    const sizeInput = el("input", { type: "range", min: "1", max: "40", value: String(painter.size) });
    sizeInput.addEventListener("input", () => { painter!.size = Number(sizeInput.value); });
    tools.append(
      button("Brush", () => { painter!.tool = "brush"; }),
      button("Eraser", () => { painter!.tool = "eraser"; }),
      colorInput, sizeInput,
      button("Undo", () => painter!.undo()),
      button("Clear", () => painter!.clear()),
    );
    const filePick = el("input", { type: "file", accept: "image/png,image/jpeg" });
    filePick.addEventListener("change", async () => {
      const file = filePick.files?.[0];
      if (file) await painter!.importImage(file);
    });
    tools.append(filePick);
    const uploadButton = button(uploadBusy ? "Uploading…" : "Upload cover art", async () => {
      if (uploadBusy) return;
      uploadBusy = true;
      uploadError = null;
      rerender(ctx);
      try {
        await ctx.upload(await painter!.exportPng(), "image/png");
      } catch (exc) {
        uploadError = String(exc instanceof Error ? exc.message : exc);
      } finally {
        uploadBusy = false;
        rerender(ctx);
      }
    }, "btn primary");
    tools.append(uploadButton);
    if (uploadError) tools.append(el("span", { class: "hint error" }, `${uploadError} — try again`));
  } else {
    tools.append(el("span", { class: "hint" },
      attached ? "Cover art attached. Waiting for your opponent…"
        : "Time! A placeholder cover was attached for this round."));
  }

  const section = el("section", { class: "panel" }, brief, painter.canvas, tools);
  return section;
}

// --- battle ------------------------------------------------------------------------

function battleScreen(ctx: AppContext): HTMLElement {
  const store = ctx.store;
  const projection = store.state.projection!;
  const log = store.state.playback[0];
  if (log) return playbackScreen(ctx, log);

  const key = `${projection.match_id}:${projection.round}:${projection.turn}`;
  if (plannerKey !== key) {
    planner.reset();
    armedSlot = null;
    plannerKey = key;
  }
  const submitted = projection.you.plan_submitted;

  const enemyRow = el("div", { class: "card-row" },
    ...projection.opponent.hand.map((card) => cardFace(ctx, card, projection, "enemy")));
  const ownRow = el("div", { class: "card-row" },
    ...projection.you.hand.map((card) => cardFace(ctx, card, projection, "own")));

  const controls = el("div", { class: "row" });
  if (submitted) {
    controls.append(el("span", { class: "hint" }, "Plan locked. Waiting for the reveal…"));
  } else {
    controls.append(
      button(`Lock in plan (${planner.size} move${planner.size === 1 ? "" : "s"})`, () => {
        const problems = planner.problems(projection, ctx.catalog);
        if (problems.length > 0) {
          store.state.lastError = { code: "invalid_plan", message: problems.join("; ") };
          rerender(ctx);
          return;
        }
        ctx.send("submit_plan", { entries: planner.entries() });
      }, "btn primary"),
      button("Pass turn", () => ctx.send("submit_plan", { entries: [] })),
    );
  }
  controls.append(
    button(projection.you.tie_requested ? "Tie offered…" : "Offer tie", () => {
      if (window.confirm("Declare this round a tie? It ends drawn once both of you agree.")) {
        ctx.send("declare_tie");
      }
    }),
    button("Forfeit round", () => {
      if (window.confirm("Concede this round to your opponent?")) ctx.send("forfeit");
    }, "btn danger"),
  );
  if (projection.opponent.tie_requested) {
    controls.append(el("span", { class: "hint" }, "Opponent offers a tie."));
  }
  if (projection.opponent.plan_submitted && !submitted) {
    controls.append(el("span", { class: "hint" }, "Opponent has locked in."));
  }

  return el("section", { class: "panel" },
    el("h2", {}, `Round ${projection.round} — turn ${projection.turn}`),
    el("p", { class: "hint" }, "Assign up to one move per card, pick targets for attacks, then lock in."),
    enemyRow, el("hr", {}), ownRow, controls);
}

function cardFace(ctx: AppContext, card: CardView, projection: Projection,
                  side: "own" | "enemy"): HTMLElement {
  const hpPct = Math.round((card.hp / card.max_hp) * 100);
  const face = el("div", { class: `card ${side}${card.knocked_out ? " dead" : ""}` },
    coverThumb(ctx, card.moves[Math.min(projection.round, card.moves.length) - 1]?.cover_art ?? null, card.name),
    el("strong", {}, card.name),
    el("div", { class: "hp" }, el("div", { class: "hp-fill", style: `width:${hpPct}%` }, "")),
    el("small", {}, `${card.hp}/${card.max_hp} HP`));

  if (side === "enemy") {
    if (armedSlot && !card.knocked_out) {
      face.classList.add("targetable");
      face.addEventListener("click", () => {
        planner.assign(armedSlot!.slot, armedSlot!.moveId, card.slot);
        armedSlot = null;
        rerender(ctx);
      });
    }
    return face;
  }

  const assigned = planner.get(card.slot);
  if (assigned) {
    const spec = moveById(ctx.catalog, assigned.moveId);
    face.append(el("div", { class: "assigned" },
      `${spec?.display_name}${assigned.target !== null ? ` → slot ${assigned.target + 1}` : ""}`));
  }
  if (!card.knocked_out && !projection.you.plan_submitted) {
    const moves = el("div", { class: "move-list" });
    for (const cardMove of card.moves.slice(0, projection.round)) {
      const spec = moveById(ctx.catalog, cardMove.move_id)!;
      const armed = armedSlot?.slot === card.slot && armedSlot.moveId === cardMove.move_id;
      const row = button(
        `${spec.display_name}${spec.kind === "attack" ? ` (${spec.magnitude})` : ` (1–${spec.dice_window})`}`,
        () => {
          if (spec.kind === "attack") {
            armedSlot = armed ? null : { slot: card.slot, moveId: cardMove.move_id };
          } else {
            planner.assign(card.slot, cardMove.move_id, null);
            armedSlot = null;
          }
          rerender(ctx);
        },
        armed ? "btn small armed" : "btn small");
      moves.append(row);
    }
    if (assigned) {
      moves.append(button("×", () => { planner.clearSlot(card.slot); rerender(ctx); }, "btn small"));
    }
    face.append(moves);
  }
  return face;
}

// --- reveal playback -----------------------------------------------------------------

function playbackScreen(ctx: AppContext, log: ResolutionLog): HTMLElement {
  const store = ctx.store;
  const names = store.state.names ?? ["P1", "P2"];
  const steps = log.steps;
  const shown = steps.slice(0, playbackIndex + 1);
  const list = el("ol", { class: "log" },
    ...shown.map((step) => el("li", {}, describeStep(ctx, step, names))));

  const advance = () => {
    if (playbackIndex < steps.length - 1) {
      playbackIndex += 1;
    } else {
      store.shiftPlayback();
      playbackIndex = 0;
      playbackSeen = true;
    }
    rerender(ctx);
  };
  const controls = el("div", { class: "row" },
    button(playbackIndex < steps.length - 1 ? "Next" : "Done", advance, "btn primary"));
  if (playbackSeen || steps.length > 4) {
    controls.append(button("Skip", () => {
      store.shiftPlayback();
      playbackIndex = 0;
      playbackSeen = true;
      rerender(ctx);
    }));
  }
  return el("section", { class: "panel" },
    el("h2", {}, `Reveal — round ${log.round}, turn ${log.turn}`), list, controls);
}

function describeStep(ctx: AppContext, step: LogStep, names: string[]): string {
  const projection = ctx.store.state.projection!;
  const cardName = (player: number, slot: number) => {
    const side = player === projection.player_index ? projection.you : projection.opponent;
    return `${names[player]}'s ${side.hand[slot]?.name ?? `card ${slot + 1}`}`;
  };
  switch (step.kind) {
    case "dice_rolled": {
      const spec = moveById(ctx.catalog, step.move_id);
      return `${cardName(step.player, step.slot)} rolls ${step.face} for ${spec?.display_name}` +
        ` — ${step.success ? "success!" : "no effect"}`;
    }
    case "damage_dealt":
      if (step.amount === 0) return `${cardName(step.target[0], step.target[1])} dodges the attack.`;
      return `${cardName(step.attacker[0], step.attacker[1])} ` +
        `${step.reflected ? "reflects" : "hits"} ${cardName(step.target[0], step.target[1])}` +
        ` for ${step.amount}.`;
    case "attack_fizzled":
      return `${cardName(step.player, step.slot)}'s attack fizzles (${step.reason.replace("_", " ")}).`;
    case "knockout":
      return `${cardName(step.player, step.slot)} is knocked out!`;
    case "round_end":
      if (step.winner === null) return `The round ends drawn (${step.reason.replace("_", " ")}).`;
      return `${names[step.winner]} wins the round (${step.reason}).`;
  }
}

// --- match end ------------------------------------------------------------------------

function endScreen(ctx: AppContext): HTMLElement {
  const store = ctx.store;
  const finale = store.state.finale;
  const projection = store.state.projection;
  const names = store.state.names ?? ["P1", "P2"];
  let headline = "Match over";
  if (finale) {
    headline = finale.winner === null ? "Drawn match!" :
      finale.winner === projection?.player_index ? "You win the match!" :
        `${names[finale.winner]} wins the match`;
  }
  const wins = finale?.round_wins ?? [0, 0];
  return el("section", { class: "panel center" },
    el("h2", {}, headline),
    el("p", {}, `Rounds: ${names[0]} ${wins[0]} — ${wins[1]} ${names[1]}` +
      (finale?.ties ? ` (${finale.ties} drawn)` : "")),
    el("p", { class: "hint" }, "Refresh the page to queue up again."));
}

// --- shared bits -------------------------------------------------------------------------

function coverThumb(ctx: AppContext, token: string | null, seedText: string,
                    cls = "thumb"): HTMLElement {
  if (token) {
    const url = assetUrl(ctx.baseUrl, token);
    if (url) {
      const img = el("img", { class: cls, src: url, alt: seedText });
      return img;
    }
  }
  // builtin/placeholder refs render as a deterministic two-tone swatch
  let hash = 2166136261;
  for (const ch of (token ?? "none") + seedText) {
    hash = (hash ^ ch.charCodeAt(0)) * 16777619 >>> 0;
  }
  const hue = hash % 360;
  const swatch = el("div", {
    class: cls + " swatch",
    style: `background: linear-gradient(135deg, hsl(${hue},45%,70%), hsl(${(hue + 40) % 360},35%,45%))`,
  }, seedText.slice(0, 2));
  return swatch;
}

let rerenderHook: (() => void) | null = null;

export function setRerender(hook: () => void): void {
  rerenderHook = hook;
}

function rerender(_ctx: AppContext): void {
  rerenderHook?.();
}
