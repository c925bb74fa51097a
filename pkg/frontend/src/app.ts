/** Wires the panels to the API. One mutating request in flight per
 * session; the server's per-session serialization is the real guarantee. */

import { ApiClient, ApiError } from "./api.js";
import { commandForPalette, renderGoalPanel } from "./goalPanel.js";
import { emptyDraft, modelText, renderModelBuilder, renderTrace, type ModelDraft } from "./modelBuilder.js";
import { renderReplayControls } from "./replay.js";
import {
  initialViewState,
  replayControls,
  withReplay,
  withSession,
  withState,
  type ViewState,
} from "./state.js";
import type { ExerciseJson, PaletteEntry } from "./types.js";

type Traces = { role: string; trace: import("./types.js").TraceStepJson }[];

export class App {
  view: ViewState = initialViewState();
  exercise: ExerciseJson | null = null;
  draft: ModelDraft | null = null;
  lastTraces: Traces | null = null;
  lastBanner: string | null = null;
  private busy = false;

  constructor(
    readonly api: ApiClient,
    readonly doc: Document,
    readonly root: HTMLElement,
  ) {}

  async start(exerciseId: string, studentId: string): Promise<void> {
    const listing = await this.api.listExercises();
    this.exercise = listing.exercises.find((e) => e.id === exerciseId) ?? null;
    const session = await this.api.createSession(exerciseId, studentId);
    this.view = withSession(this.view, session);
    if (this.exercise && this.exercise.mode !== "prove") {
      this.draft = emptyDraft(this.exercise.signature, "valuation");
    }
    this.render();
  }

  async send(command: string): Promise<void> {
    if (!this.view.session || this.busy) return;
    this.busy = true;
    this.lastBanner = null;
    this.lastTraces = null;
    try {
      const response = await this.api.sendCommand(this.view.session.id, command);
      this.view = withState(this.view, response.state);
      this.view.session!.events.push(response);
      if (!response.outcome.accepted) {
        this.lastBanner = `rejected: ${response.outcome.error}: ${response.outcome.message}`;
      } else if (response.outcome.report.refutation) {
        this.lastTraces = response.outcome.report.refutation.traces;
      }
    } catch (error) {
      if (error instanceof ApiError) {
        this.lastBanner = `${error.code}: ${error.message}`;
      } else {
        this.lastBanner = "connection lost; retry when the server is back";
      }
    } finally {
      this.busy = false;
      this.render();
    }
  }

  async loadReplay(): Promise<void> {
    if (!this.view.session) return;
    const log = await this.api.replay(this.view.session.id);
    this.view = withReplay(this.view, log);
    this.render();
  }

  render(): void {
    this.root.replaceChildren();
    this.root.appendChild(
      renderGoalPanel(this.doc, this.view, {
        onPalette: (_goal, entry: PaletteEntry, args) => {
          void this.send(commandForPalette(entry, args));
        },
        promptArg: (name) => this.doc.defaultView?.prompt?.(name) ?? null,
      }),
    );
    if (this.view.replay) {
      this.root.appendChild(
        renderReplayControls(this.doc, this.view, {
          onSeek: (index) => {
            this.view = replayControls(this.view, { kind: "seek", index });
            this.render();
          },
          onStep: (delta) => {
            this.view = replayControls(this.view, {
              kind: delta > 0 ? "step-forward" : "step-back",
            });
            this.render();
          },
          onPlay: () => {
            this.view = replayControls(this.view, { kind: "play" });
            this.render();
          },
        }),
      );
    }
    if (this.draft && this.exercise && this.view.session?.state.status === "open") {
      this.root.appendChild(
        renderModelBuilder(
          this.doc,
          this.exercise.signature,
          this.draft,
          (draft) => {
            this.draft = draft;
            this.render();
          },
          (text) => void this.send(`refute with ${text}`),
        ),
      );
    }
    if (this.lastTraces) {
      const host = this.doc.createElement("section");
      host.className = "traces";
      for (const { role, trace } of this.lastTraces) {
        host.appendChild(renderTrace(this.doc, role, trace));
      }
      this.root.appendChild(host);
    }
    if (this.lastBanner) {
      const note = this.doc.createElement("p");
      note.className = "banner";
      note.textContent = this.lastBanner;
      this.root.appendChild(note);
    }
  }
}

export function mount(doc: Document, base = ""): App {
  const root = doc.getElementById("app") ?? doc.body;
  return new App(new ApiClient(base), doc, root as HTMLElement);
}
