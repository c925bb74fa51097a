/** The goal panel: hypotheses above a rule line, conclusion below, and
 * the server-supplied rule palette. */

import type { GoalJson, PaletteEntry } from "./types.js";
import { paletteFor, visibleGoals, type ViewState } from "./state.js";

export interface PanelCallbacks {
  onPalette(goalId: number, entry: PaletteEntry, args: string[]): void;
  promptArg(name: string): string | null;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderGoalPanel(
  doc: Document,
  view: ViewState,
  callbacks?: PanelCallbacks,
): HTMLElement {
  const root = el(doc, "section", "goal-panel");
  const goals = visibleGoals(view);
  const status = view.session?.state.status ?? "open";
  if (goals.length === 0) {
    const badge = el(doc, "p", `status status-${status}`);
    badge.textContent =
      status === "proved" ? "Proved." : status === "refuted" ? "Refuted." : "No open goals.";
    root.appendChild(badge);
    return root;
  }
  for (const goal of goals) {
    root.appendChild(renderGoal(doc, view, goal, callbacks));
  }
  return root;
}

function renderGoal(
  doc: Document,
  view: ViewState,
  goal: GoalJson,
  callbacks?: PanelCallbacks,
): HTMLElement {
  const card = el(doc, "article", "goal");
  card.dataset.goalId = String(goal.id);
  card.appendChild(el(doc, "h3", "goal-id", `goal ${goal.id}`));

  const hyps = el(doc, "ul", "hypotheses");
  for (const h of goal.hypotheses) {
    const item = el(doc, "li", "hypothesis");
    item.dataset.label = h.label;
    item.appendChild(el(doc, "span", "hyp-label", h.label));
    item.appendChild(el(doc, "span", "hyp-formula", h.formula));
    hyps.appendChild(item);
  }
  card.appendChild(hyps);
  card.appendChild(el(doc, "hr", "rule-line"));
  card.appendChild(el(doc, "p", "conclusion", goal.conclusion));

  if (goal.pending_unknowns.length > 0) {
    card.appendChild(
      el(doc, "p", "pending", `unresolved: ${goal.pending_unknowns.join(", ")}`),
    );
  }

  // palette only for the live state; frames in the movie are read-only
  if (view.liveMode && callbacks) {
    card.appendChild(renderPalette(doc, view, goal.id, callbacks));
  }
  return card;
}

function renderPalette(
  doc: Document,
  view: ViewState,
  goalId: number,
  callbacks: PanelCallbacks,
): HTMLElement {
  const bar = el(doc, "div", "palette");
  for (const entry of paletteFor(view, goalId)) {
    const button = el(doc, "button", "palette-entry");
    button.dataset.rule = entry.rule;
    button.dataset.direction = entry.direction;
    button.textContent = entry.hyp ? `${entry.rule} (${entry.hyp})` : entry.rule;
    button.addEventListener("click", () => {
      const args: string[] = [];
      for (const name of entry.args) {
        if (name.endsWith("?")) continue; // optional arguments stay empty
        const value = callbacks.promptArg(name);
        if (value === null) return; // cancelled
        args.push(value);
      }
      callbacks.onPalette(goalId, entry, args);
    });
    bar.appendChild(button);
  }
  return bar;
}

/** The script line a palette click posts to the server. */
export function commandForPalette(entry: PaletteEntry, args: string[]): string {
  const scriptNames: Record<string, string> = {
    AndI: "and_intro", AndE1: "and_elim1", AndE2: "and_elim2",
    OrI1: "or_intro1", OrI2: "or_intro2", OrE: "or_elim",
    ImpI: "impl_intro", ImpE: "impl_elim",
    IffI: "iff_intro", IffE1: "iff_elim1", IffE2: "iff_elim2",
    NotI: "not_intro", NotE: "not_elim", BottomE: "bottom_elim",
    RAA: "raa", ForallI: "forall_intro", ForallE: "forall_elim",
    ExistsI: "exists_intro", ExistsE: "exists_elim",
    Assumption: "assumption", EqualityRefl: "eq_refl", EqualityRewrite: "eq_rewrite",
  };
  const name = scriptNames[entry.rule] ?? entry.rule;
  const tail = args.length > 0 ? ` ${args.join(" ")}` : "";
  if (entry.rule === "Assumption") return `assumption${tail}`;
  if (entry.direction === "forward") return `forward ${entry.hyp} ${name}${tail}`;
  return `backward ${name}${tail}`;
}
