/** Findings panel and completeness widget. Both re-render from the latest
 * backend responses; finding entries are buttons, so the panel is fully
 * keyboard navigable. */

import type { CompletenessReport, Finding, ValidationReport } from "./api.js";

const SEVERITY_ORDER: Finding["severity"][] = ["violation", "warning", "info"];

export function renderFindings(
  container: HTMLElement,
  report: ValidationReport | null,
  onFocusRequest: (elementPath: string) => void,
): void {
  container.textContent = "";
  if (report === null) {
    container.append(textEl("p", "No validation run yet."));
    return;
  }
  const status = textEl("p", report.conformant ? "Record conforms to the schema." : "Record does not conform yet.");
  status.className = report.conformant ? "status-ok" : "status-bad";
  container.append(status);

  for (const severity of SEVERITY_ORDER) {
    const findings = report.findings.filter((f) => f.severity === severity);
    if (findings.length === 0) continue;
    const heading = textEl("h3", `${severity}s (${findings.length})`);
    container.append(heading);
    const list = document.createElement("ul");
    list.className = `findings findings-${severity}`;
    for (const finding of findings) {
      const item = document.createElement("li");
      const button = document.createElement("button");
      button.type = "button";
      button.className = "finding";
      button.textContent = `${finding.elementPath} — ${finding.message}`;
      button.addEventListener("click", () => onFocusRequest(finding.elementPath));
      item.append(button);
      list.append(item);
    }
    container.append(list);
  }
  if (report.findings.length === 0) {
    container.append(textEl("p", "No findings."));
  }
}

export function renderCompleteness(container: HTMLElement, report: CompletenessReport | null): void {
  container.textContent = "";
  if (report === null) return;
  for (const [tier, fill] of Object.entries(report.perTier)) {
    const row = document.createElement("div");
    row.className = "progress-row";
    const label = textEl("span", `${tier}: ${fill.filled}/${fill.total}`);
    const meter = document.createElement("progress");
    meter.max = Math.max(fill.total, 1);
    meter.value = fill.filled;
    meter.setAttribute("aria-label", `${tier} elements filled`);
    row.append(label, meter);
    container.append(row);
  }
  const gate = textEl("p", report.mandatoryComplete
    ? "All mandatory elements are filled."
    : "Mandatory elements are still missing.");
  gate.className = report.mandatoryComplete ? "status-ok" : "status-warn";
  container.append(gate);
}

function textEl(tag: string, text: string): HTMLElement {
  const node = document.createElement(tag);
  node.textContent = text;
  return node;
}
