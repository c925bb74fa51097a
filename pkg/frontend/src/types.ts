/** Payload shapes of the workbench HTTP API (see docs/formats.md). */

export interface Labeled {
  label: string;
  formula: string;
}

export interface SequentJson {
  hypotheses: Labeled[];
  conclusion: string;
}

export interface SignatureJson {
  predicates: Record<string, number>;
  functions: Record<string, number>;
  constants: string[];
}

export interface DefinitionJson {
  name: string;
  params: string[];
  definiendum: string;
  definiens: string;
}

export interface ExerciseJson {
  id: string;
  title: string;
  sequent: SequentJson;
  signature: SignatureJson;
  mode: "prove" | "refute" | "mystery";
  automation_cap: { max_level: number; budget: number };
  definitions: DefinitionJson[];
  difficulty: number;
}

export interface PaletteEntry {
  rule: string;
  direction: "backward" | "forward";
  hyp: string | null;
  args: string[];
}

export interface GoalJson {
  id: number;
  hypotheses: Labeled[];
  conclusion: string;
  introduced_parameters: string[];
  pending_unknowns: string[];
  palette?: PaletteEntry[];
}

export interface SessionStateJson {
  status: "open" | "proved" | "refuted";
  open_goals: GoalJson[];
  digest: string;
}

export interface TraceStepJson {
  formula: string;
  environment: Record<string, string>;
  value: boolean;
  clause: string;
  children: TraceStepJson[];
}

export interface RefutationJson {
  refutes: boolean;
  reason: string | null;
  traces: { role: string; trace: TraceStepJson }[];
}

export interface StepReportJson {
  command: string;
  status: string;
  new_goals: number[];
  open_goals: number[];
  message: string;
  applied: string[];
  frame_changed: boolean;
  refutation?: RefutationJson;
}

export interface EventJson {
  ordinal: number;
  timestamp: string;
  command: string;
  outcome:
    | { accepted: true; report: StepReportJson }
    | { accepted: false; error: string; message: string };
}

export interface CommandResponse extends EventJson {
  state: SessionStateJson;
}

export interface SessionJson {
  id: string;
  exercise_id: string;
  student_id: string;
  created: string;
  status: string;
  events: EventJson[];
  state: SessionStateJson;
}

export interface FrameJson {
  open_goals: GoalJson[];
  digest: string;
}

export interface ReplayEventJson extends EventJson {
  frame_after: number;
}

export interface ReplayLogJson {
  frames: FrameJson[];
  events: ReplayEventJson[];
}

export interface TreeNodeJson {
  formula: string;
  rule: string;
  children: TreeNodeJson[];
  discharged: string[];
  label?: string;
}
