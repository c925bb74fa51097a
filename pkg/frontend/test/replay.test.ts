// Replay fidelity: the slider spans exactly the recorded frames and the
// goal panel at each cursor mirrors the server's ReplayLog.
// @vitest-environment jsdom
import { describe, expect, it } from "vitest";

import { renderGoalPanel } from "../src/goalPanel.js";
import { renderReplayControls, renderTimeline } from "../src/replay.js";
import {
  clampCursor,
  expectedFrameCount,
  failureMarkers,
  initialViewState,
  replayControls,
  visibleGoals,
  withReplay,
  withSession,
} from "../src/state.js";
import type { ReplayLogJson, SessionJson } from "../src/types.js";

import replayFixture from "./fixtures/replay.json";
import sessionFixture from "./fixtures/session.json";

const replay = replayFixture as unknown as ReplayLogJson;
const session = sessionFixture as unknown as SessionJson;

function loadedView() {
  return withReplay(withSession(initialViewState(), session), replay);
}

describe("replay slider", () => {
  it("exposes frame count = accepted state-changing events + 1", () => {
    expect(replay.frames.length).toBe(expectedFrameCount(replay));
    // the fixture has exactly one rejected command in the middle
    const rejected = replay.events.filter((e) => !e.outcome.accepted);
    expect(rejected).toHaveLength(1);

    const view = loadedView();
    const controls = renderReplayControls(document, view, {
      onSeek: () => {},
      onStep: () => {},
      onPlay: () => {},
    });
    const slider = controls.querySelector<HTMLInputElement>(".replay-slider")!;
    expect(Number(slider.max)).toBe(replay.frames.length - 1);
    expect(Number(slider.min)).toBe(0);
  });

  it("renders a failure marker between the surrounding frames", () => {
    const markers = failureMarkers(replay);
    expect(markers).toHaveLength(1);
    expect(markers[0]!.command).toBe("frobnicate the goal");

    const timeline = renderTimeline(document, replay, 0);
    const items = Array.from(timeline.children).map((c) => c.className);
    const markerIndex = items.findIndex((c) => c === "failure-marker");
    expect(markerIndex).toBeGreaterThan(0);
    // the marker sits after the frame the rejected event landed on
    const flag = timeline.querySelector<HTMLElement>(".failure-marker")!;
    expect(flag.dataset.afterFrame).toBe(String(markers[0]!.frame));
    expect(flag.textContent).toContain("failed: frobnicate the goal");
  });

  it("clamps seeking and stepping to the frame range", () => {
    let view = loadedView();
    view = replayControls(view, { kind: "seek", index: 999 });
    expect(view.cursor).toBe(replay.frames.length - 1);
    view = replayControls(view, { kind: "step-forward" });
    expect(view.cursor).toBe(replay.frames.length - 1); // clamped at the end
    view = replayControls(view, { kind: "play" });
    expect(view.cursor).toBe(0);
    view = replayControls(view, { kind: "step-back" });
    expect(view.cursor).toBe(0); // clamped at the start
    expect(clampCursor(replay, -5)).toBe(0);
  });

  it("shows each frame's goals exactly as the server reconstructed them", () => {
    for (let cursor = 0; cursor < replay.frames.length; cursor++) {
      const view = replayControls(loadedView(), { kind: "seek", index: cursor });
      const goals = visibleGoals(view);
      const frame = replay.frames[cursor]!;
      expect(goals).toEqual(frame.open_goals);

      const panel = renderGoalPanel(document, view);
      const cards = panel.querySelectorAll(".goal");
      expect(cards).toHaveLength(frame.open_goals.length);
      frame.open_goals.forEach((goal, i) => {
        const card = cards[i]!;
        expect(card.querySelector(".conclusion")!.textContent).toBe(goal.conclusion);
        const labels = Array.from(card.querySelectorAll(".hyp-label")).map(
          (n) => n.textContent,
        );
        expect(labels).toEqual(goal.hypotheses.map((h) => h.label));
      });
    }
  });

  it("keeps the palette tied to the live state, not the movie", () => {
    const view = replayControls(loadedView(), { kind: "seek", index: 0 });
    const panel = renderGoalPanel(document, view, {
      onPalette: () => {},
      promptArg: () => null,
    });
    // while scrubbing, frames are read-only: no palette buttons
    expect(panel.querySelectorAll(".palette-entry")).toHaveLength(0);

    const live = withSession(initialViewState(), session);
    const livePanel = renderGoalPanel(document, live, {
      onPalette: () => {},
      promptArg: () => null,
    });
    const rules = Array.from(livePanel.querySelectorAll<HTMLElement>(".palette-entry")).map(
      (b) => b.dataset.rule,
    );
    expect(rules).toEqual(
      session.state.open_goals[0]!.palette!.map((p) => p.rule),
    );
  });
});
