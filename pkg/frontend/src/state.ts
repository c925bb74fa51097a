/** View state and its transitions. Pure data in, pure data out: the DOM
 * renderers consume snapshots of this. */

import type {
  GoalJson,
  PaletteEntry,
  ReplayLogJson,
  SessionJson,
  SessionStateJson,
} from "./types.js";

export interface ViewState {
  session: SessionJson | null;
  selectedGoal: number | null;
  selectedHypothesis: string | null;
  replay: ReplayLogJson | null;
  cursor: number; // frame index into replay.frames
  liveMode: boolean; // false while scrubbing the movie
}

export function initialViewState(): ViewState {
  return {
    session: null,
    selectedGoal: null,
    selectedHypothesis: null,
    replay: null,
    cursor: 0,
    liveMode: true,
  };
}

export function withSession(view: ViewState, session: SessionJson): ViewState {
  const goals = session.state.open_goals;
  const first = goals.length > 0 ? goals[0]!.id : null;
  const selected =
    view.selectedGoal !== null && goals.some((g) => g.id === view.selectedGoal)
      ? view.selectedGoal
      : first;
  return { ...view, session, selectedGoal: selected, selectedHypothesis: null };
}

export function withState(view: ViewState, state: SessionStateJson): ViewState {
  if (!view.session) return view;
  return withSession(view, { ...view.session, state, status: state.status });
}

export function withReplay(view: ViewState, replay: ReplayLogJson): ViewState {
  return {
    ...view,
    replay,
    cursor: clampCursor(replay, replay.frames.length - 1),
    liveMode: false,
  };
}

export function clampCursor(replay: ReplayLogJson | null, cursor: number): number {
  if (!replay || replay.frames.length === 0) return 0;
  return Math.max(0, Math.min(cursor, replay.frames.length - 1));
}

export type ReplayAction =
  | { kind: "step-forward" }
  | { kind: "step-back" }
  | { kind: "seek"; index: number }
  | { kind: "play" };

export function replayControls(view: ViewState, action: ReplayAction): ViewState {
  if (!view.replay) return view;
  switch (action.kind) {
    case "step-forward":
      return { ...view, cursor: clampCursor(view.replay, view.cursor + 1) };
    case "step-back":
      return { ...view, cursor: clampCursor(view.replay, view.cursor - 1) };
    case "seek":
      return { ...view, cursor: clampCursor(view.replay, action.index) };
    case "play":
      return { ...view, cursor: 0 };
  }
}

/** Goals shown at the current cursor: the replay frame while scrubbing,
 * the live server state otherwise. */
export function visibleGoals(view: ViewState): GoalJson[] {
  if (!view.liveMode && view.replay) {
    const frame = view.replay.frames[view.cursor];
    return frame ? frame.open_goals : [];
  }
  return view.session ? view.session.state.open_goals : [];
}

/** The palette always reflects the latest accepted event: it is read off
 * the live session state, never recomputed client-side. */
export function paletteFor(view: ViewState, goalId: number): PaletteEntry[] {
  if (!view.session) return [];
  const goal = view.session.state.open_goals.find((g) => g.id === goalId);
  return goal?.palette ?? [];
}

/** Failure markers: for each rejected event, the index of the frame it
 * sits after. Multiple rejections can share a slot. */
export function failureMarkers(replay: ReplayLogJson): { frame: number; command: string; error: string }[] {
  const out: { frame: number; command: string; error: string }[] = [];
  for (const event of replay.events) {
    if (!event.outcome.accepted) {
      out.push({
        frame: event.frame_after,
        command: event.command,
        error: event.outcome.error,
      });
    }
  }
  return out;
}

/** Invariant from the movie model: frame count is one more than the
 * number of accepted state-changing events. */
export function expectedFrameCount(replay: ReplayLogJson): number {
  const changing = replay.events.filter(
    (e) => e.outcome.accepted && e.outcome.report.frame_changed,
  ).length;
  return changing + 1;
}
