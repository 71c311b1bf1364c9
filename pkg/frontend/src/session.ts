/** Session state for one curation run.
 *
 * Holds the record being edited, per-element dirty flags, extraction
 * attribution, and the latest validation/completeness results. Validation
 * responses carry a sequence number so a slow, superseded response can
 * never overwrite a newer one.
 */

import type { CompletenessReport, ValidationReport } from "./api.js";
import type { FieldEntry, FormValues } from "./recordio.js";

export interface SessionState {
  values: FormValues;
  dirty: Set<string>;
  attribution: Record<string, string>;
  lastValidation: ValidationReport | null;
  lastCompleteness: CompletenessReport | null;
}

export function newSession(): SessionState {
  return {
    values: {},
    dirty: new Set(),
    attribution: {},
    lastValidation: null,
    lastCompleteness: null,
  };
}

export function setEntries(state: SessionState, elementId: string, entries: FieldEntry[]): void {
  if (entries.length === 0) {
    delete state.values[elementId];
  } else {
    state.values[elementId] = entries;
  }
  state.dirty.add(elementId);
}

/** Replace the whole record, e.g. after extraction or file import.
 * Dirty flags reset; attribution is kept only when provided. */
export function resetRecord(
  state: SessionState,
  values: FormValues,
  attribution: Record<string, string> = {},
): void {
  state.values = values;
  state.dirty = new Set();
  state.attribution = attribution;
  state.lastValidation = null;
  state.lastCompleteness = null;
}

export class ResponseSequencer {
  private issued = 0;
  private applied = 0;

  next(): number {
    this.issued += 1;
    return this.issued;
  }

  /** True when `seq` is newer than everything applied so far. */
  accept(seq: number): boolean {
    if (seq <= this.applied) return false;
    this.applied = seq;
    return true;
  }
}

export function applyValidation(
  state: SessionState,
  sequencer: ResponseSequencer,
  seq: number,
  report: ValidationReport,
): boolean {
  if (!sequencer.accept(seq)) return false;
  state.lastValidation = report;
  return true;
}

export function violationsOf(state: SessionState): string[] {
  return (state.lastValidation?.findings ?? [])
    .filter((f) => f.severity === "violation")
    .map((f) => `${f.elementPath}: ${f.message}`);
}
