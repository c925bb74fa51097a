/** The movie player: a slider over replay frames with failure markers
 * for rejected commands rendered between the frames they fell between. */

import { failureMarkers, type ViewState } from "./state.js";
import type { ReplayLogJson } from "./types.js";

export interface ReplayCallbacks {
  onSeek(index: number): void;
  onStep(delta: 1 | -1): void;
  onPlay(): void;
}

export function renderReplayControls(
  doc: Document,
  view: ViewState,
  callbacks: ReplayCallbacks,
): HTMLElement {
  const root = doc.createElement("div");
  root.className = "replay-controls";
  const replay = view.replay;
  if (!replay) {
    root.textContent = "no replay loaded";
    return root;
  }

  const slider = doc.createElement("input");
  slider.type = "range";
  slider.className = "replay-slider";
  slider.min = "0";
  slider.max = String(replay.frames.length - 1);
  slider.value = String(view.cursor);
  slider.addEventListener("input", () => callbacks.onSeek(Number(slider.value)));
  root.appendChild(slider);

  const back = doc.createElement("button");
  back.className = "step-back";
  back.textContent = "<";
  back.addEventListener("click", () => callbacks.onStep(-1));
  const forward = doc.createElement("button");
  forward.className = "step-forward";
  forward.textContent = ">";
  forward.addEventListener("click", () => callbacks.onStep(1));
  const play = doc.createElement("button");
  play.className = "play";
  play.textContent = "play";
  play.addEventListener("click", () => callbacks.onPlay());
  for (const b of [back, forward, play]) root.appendChild(b);

  const label = doc.createElement("span");
  label.className = "frame-label";
  label.textContent = `frame ${view.cursor} / ${replay.frames.length - 1}`;
  root.appendChild(label);

  root.appendChild(renderTimeline(doc, replay, view.cursor));
  return root;
}

/** One tick per frame, with failed-step markers wedged between ticks. */
export function renderTimeline(
  doc: Document,
  replay: ReplayLogJson,
  cursor: number,
): HTMLElement {
  const timeline = doc.createElement("ol");
  timeline.className = "timeline";
  const markers = failureMarkers(replay);
  replay.frames.forEach((frame, index) => {
    const tick = doc.createElement("li");
    tick.className = index === cursor ? "frame-tick current" : "frame-tick";
    tick.dataset.frame = String(index);
    tick.textContent = `${frame.open_goals.length} open`;
    timeline.appendChild(tick);
    for (const marker of markers.filter((m) => m.frame === index)) {
      const flag = doc.createElement("li");
      flag.className = "failure-marker";
      flag.dataset.afterFrame = String(index);
      flag.title = marker.error;
      flag.textContent = `failed: ${marker.command}`;
      timeline.appendChild(flag);
    }
  });
  return timeline;
}
