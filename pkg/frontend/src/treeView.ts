/** Gentzen-style rendering of an exported derivation tree: premises in a
 * row above an inference line, the conclusion below, discharge labels
 * superscripted on the rule name. */

import type { TreeNodeJson } from "./types.js";

export function renderTree(doc: Document, node: TreeNodeJson): HTMLElement {
  const root = doc.createElement("div");
  root.className = "derivation";
  if (node.rule === "assumption" || node.rule === "supposition") {
    root.classList.add("leaf", node.rule);
    const formula = doc.createElement("span");
    formula.className = "leaf-formula";
    formula.textContent = node.formula;
    const tag = doc.createElement("sup");
    tag.className = "leaf-label";
    tag.textContent = node.label ?? "";
    root.appendChild(formula);
    root.appendChild(tag);
    return root;
  }
  const premises = doc.createElement("div");
  premises.className = "premises";
  for (const child of node.children) {
    premises.appendChild(renderTree(doc, child));
  }
  const line = doc.createElement("div");
  line.className = "inference-line";
  const rule = doc.createElement("span");
  rule.className = "rule-name";
  rule.textContent =
    node.discharged.length > 0 ? `${node.rule} [${node.discharged.join(", ")}]` : node.rule;
  line.appendChild(rule);
  const conclusion = doc.createElement("div");
  conclusion.className = "tree-conclusion";
  conclusion.textContent = node.formula;
  root.appendChild(premises);
  root.appendChild(line);
  root.appendChild(conclusion);
  return root;
}
