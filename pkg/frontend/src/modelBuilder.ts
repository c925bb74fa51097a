/** The countermodel builder: truth-value toggles for propositional
 * exercises, domain/table entry for first-order ones. It only EMITS the
 * model text; the server judges it and returns the satisfaction trace. */

import type { SignatureJson, TraceStepJson } from "./types.js";

export type ModelKind = "valuation" | "finite-structure";

export interface ValuationDraft {
  kind: "valuation";
  values: Record<string, boolean>;
}

export interface StructureDraft {
  kind: "finite-structure";
  domain: string[];
  predicates: Record<string, string[][]>;
  functions: Record<string, [string[], string][]>;
  constants: Record<string, string>;
}

export type ModelDraft = ValuationDraft | StructureDraft;

export function emptyDraft(signature: SignatureJson, kind: ModelKind): ModelDraft {
  if (kind === "valuation") {
    const values: Record<string, boolean> = {};
    for (const name of Object.keys(signature.predicates).sort()) {
      if (signature.predicates[name] === 0) values[name] = false;
    }
    return { kind: "valuation", values };
  }
  return {
    kind: "finite-structure",
    domain: ["0"],  // the domain is never empty; enforced here and re-checked server-side
    predicates: Object.fromEntries(
      Object.keys(signature.predicates).sort().map((p) => [p, []]),
    ),
    functions: Object.fromEntries(
      Object.keys(signature.functions).sort().map((f) => [f, []]),
    ),
    constants: {},
  };
}

export function toggle(draft: ValuationDraft, symbol: string): ValuationDraft {
  return {
    kind: "valuation",
    values: { ...draft.values, [symbol]: !draft.values[symbol] },
  };
}

export function removeDomainElement(draft: StructureDraft, element: string): StructureDraft {
  const domain = draft.domain.filter((e) => e !== element);
  if (domain.length === 0) {
    return draft; // refuse: a structure needs at least one element
  }
  return { ...draft, domain };
}

/** Serialize a draft into the model-text grammar the server parses. */
export function modelText(draft: ModelDraft): string {
  if (draft.kind === "valuation") {
    return Object.keys(draft.values)
      .sort()
      .map((name) => `${name}=${draft.values[name] ? 1 : 0}`)
      .join(", ");
  }
  const parts = [`domain = {${draft.domain.join(", ")}}`];
  for (const name of Object.keys(draft.predicates).sort()) {
    const rows = draft.predicates[name] ?? [];
    parts.push(`${name} = {${rows.map((row) => `(${row.join(", ")})`).join(", ")}}`);
  }
  for (const name of Object.keys(draft.functions).sort()) {
    const entries = draft.functions[name] ?? [];
    parts.push(
      `${name} = {${entries
        .map(([args, value]) => `(${args.join(", ")}) -> ${value}`)
        .join(", ")}}`,
    );
  }
  for (const name of Object.keys(draft.constants).sort()) {
    parts.push(`${name} = ${draft.constants[name]}`);
  }
  return parts.join("; ");
}

export function renderModelBuilder(
  doc: Document,
  signature: SignatureJson,
  draft: ModelDraft,
  onChange: (draft: ModelDraft) => void,
  onSubmit: (text: string) => void,
): HTMLElement {
  const root = doc.createElement("form");
  root.className = "model-builder";
  root.addEventListener("submit", (e) => {
    e.preventDefault();
    onSubmit(modelText(draft));
  });

  if (draft.kind === "valuation") {
    for (const name of Object.keys(draft.values).sort()) {
      const row = doc.createElement("label");
      row.className = "valuation-toggle";
      row.dataset.symbol = name;
      const box = doc.createElement("input");
      box.type = "checkbox";
      box.checked = draft.values[name] ?? false;
      box.addEventListener("change", () => onChange(toggle(draft, name)));
      row.appendChild(box);
      row.appendChild(doc.createTextNode(` ${name}`));
      root.appendChild(row);
    }
  } else {
    const domain = doc.createElement("p");
    domain.className = "domain";
    domain.textContent = `domain = {${draft.domain.join(", ")}}`;
    root.appendChild(domain);
  }

  const preview = doc.createElement("code");
  preview.className = "model-preview";
  preview.textContent = modelText(draft);
  root.appendChild(preview);

  const submit = doc.createElement("button");
  submit.type = "submit";
  submit.className = "submit-model";
  submit.textContent = "refute with this model";
  root.appendChild(submit);
  return root;
}

/** The expandable justification tree for a judged model. Each step shows
 * its formula, verdict, and the clause that produced it. */
export function renderTrace(doc: Document, role: string, step: TraceStepJson): HTMLElement {
  const details = doc.createElement("details");
  details.className = `trace-step trace-${step.value ? "true" : "false"}`;
  details.dataset.role = role;
  details.open = !step.value; // failures come pre-expanded
  const summary = doc.createElement("summary");
  const env = Object.entries(step.environment)
    .map(([k, v]) => `${k}=${v}`)
    .join(", ");
  summary.textContent =
    `${role}: ${step.formula} is ${step.value} [${step.clause}]` + (env ? ` {${env}}` : "");
  details.appendChild(summary);
  for (const child of step.children) {
    details.appendChild(renderTrace(doc, "", child));
  }
  return details;
}
