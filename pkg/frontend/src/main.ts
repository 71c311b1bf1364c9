/** Application wiring: extract, curate with live validation, download. */

import { ApiClient, ApiError, repoUrlProblem } from "./api.js";
import type { SchemaDocument } from "./api.js";
import { FormView } from "./form.js";
import { buildFormModel } from "./formModel.js";
import { renderCompleteness, renderFindings } from "./panels.js";
import { fromDocument, toDocument } from "./recordio.js";
import { applyValidation, newSession, ResponseSequencer, violationsOf } from "./session.js";

const VALIDATE_DEBOUNCE_MS = 400;

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export async function boot(baseUrl = ""): Promise<void> {
  const api = new ApiClient(baseUrl);
  const banner = byId<HTMLElement>("banner");

  let schema: SchemaDocument;
  try {
    schema = await api.schema();
  } catch (error) {
    banner.hidden = false;
    banner.textContent = `Cannot reach the metadata service: ${String(error)}`;
    return;
  }

  const state = newSession();
  const sequencer = new ResponseSequencer();
  const formRoot = byId<HTMLElement>("form-root");
  const findingsRoot = byId<HTMLElement>("findings");
  const completenessRoot = byId<HTMLElement>("completeness");

  let view = new FormView(formRoot, buildFormModel(schema), state, { onEdit: scheduleValidation });
  view.render();

  let debounceTimer: ReturnType<typeof setTimeout> | null = null;

  function scheduleValidation(): void {
    if (debounceTimer !== null) clearTimeout(debounceTimer);
    debounceTimer = setTimeout(() => void runValidation(), VALIDATE_DEBOUNCE_MS);
  }

  async function runValidation(): Promise<void> {
    const seq = sequencer.next();
    const record = toDocument(schema, state.values);
    try {
      const [validation, completeness] = await Promise.all([
        api.validate(record),
        api.completeness(record),
      ]);
      if (!applyValidation(state, sequencer, seq, validation)) return; // superseded
      state.lastCompleteness = completeness;
      banner.hidden = true;
      renderFindings(findingsRoot, validation, (path) => view.focusElement(path));
      renderCompleteness(completenessRoot, completeness);
    } catch (error) {
      banner.hidden = false;
      banner.textContent = `Validation unavailable — editing continues locally. (${String(error)})`;
    }
  }

  // --- extraction flow ---
  const urlInput = byId<HTMLInputElement>("repo-url");
  const extractButton = byId<HTMLButtonElement>("extract");
  const extractError = byId<HTMLElement>("extract-error");

  extractButton.addEventListener("click", () => void runExtraction());
  urlInput.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") void runExtraction();
  });

  async function runExtraction(): Promise<void> {
    extractError.hidden = true;
    const problem = repoUrlProblem(urlInput.value);
    if (problem !== null) {
      extractError.hidden = false;
      extractError.textContent = problem;
      return; // no request sent for malformed input
    }
    extractButton.disabled = true;
    extractButton.textContent = "extracting…";
    try {
      const response = await api.extract(urlInput.value.trim());
      state.values = fromDocument(schema, response.record);
      state.dirty = new Set();
      state.attribution = response.extractionReport.extracted;
      view = new FormView(formRoot, buildFormModel(schema), state, { onEdit: scheduleValidation });
      view.render();
      syncTierToggles();
      scheduleValidation();
    } catch (error) {
      extractError.hidden = false;
      if (error instanceof ApiError && error.status === 429) {
        const wait = error.retryAfter !== null ? ` Try again in about ${error.retryAfter}s.` : " Try again later.";
        extractError.textContent = `The code forge is rate-limiting requests.${wait}`;
      } else if (error instanceof ApiError) {
        extractError.textContent = `${error.message} — fix the URL and retry.`;
      } else {
        extractError.textContent = `Extraction failed: ${String(error)} — retry when the service is reachable.`;
      }
    } finally {
      extractButton.disabled = false;
      extractButton.textContent = "Extract";
    }
  }

  // --- tier visibility toggles ---
  const showRecommended = byId<HTMLInputElement>("show-recommended");
  const showOptional = byId<HTMLInputElement>("show-optional");

  function syncTierToggles(): void {
    view.setTierVisibility({ recommended: showRecommended.checked, optional: showOptional.checked });
  }

  showRecommended.addEventListener("change", syncTierToggles);
  showOptional.addEventListener("change", syncTierToggles);
  syncTierToggles();

  // --- download flow ---
  byId<HTMLButtonElement>("download").addEventListener("click", () => void download());

  async function download(): Promise<void> {
    const record = toDocument(schema, state.values);
    const violations = violationsOf(state);
    if (violations.length > 0) {
      const listing = violations.slice(0, 12).join("\n");
      if (!window.confirm(`The record still has violations:\n\n${listing}\n\nDownload anyway?`)) return;
    } else if (Object.keys(record).length === 0) {
      if (!window.confirm("The record is empty; the file will only contain the context. Download anyway?")) return;
    }
    try {
      const { bytes, filename } = await api.exportRecord(record);
      saveBlob(bytes, filename);
    } catch (error) {
      banner.hidden = false;
      banner.textContent = `Download failed, no file was written: ${String(error)}`;
    }
  }

  // --- file import (restores a previously downloaded record) ---
  const fileInput = byId<HTMLInputElement>("import-file");
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      const parsed = JSON.parse(await file.text()) as Record<string, unknown>;
      state.values = fromDocument(schema, parsed);
      state.dirty = new Set();
      state.attribution = {};
      view = new FormView(formRoot, buildFormModel(schema), state, { onEdit: scheduleValidation });
      view.render();
      syncTierToggles();
      scheduleValidation();
    } catch (error) {
      banner.hidden = false;
      banner.textContent = `Could not read that file as a metadata record: ${String(error)}`;
    } finally {
      fileInput.value = "";
    }
  });

  scheduleValidation();
}

export function saveBlob(bytes: Blob, filename: string): void {
  const url = URL.createObjectURL(bytes);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  document.body.append(anchor);
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}

declare global {
  interface Window {
    __ersmetaBooted?: Promise<void>;
  }
}

if (typeof document !== "undefined" && document.getElementById("form-root")) {
  const params = new URLSearchParams(window.location.search);
  window.__ersmetaBooted = boot(params.get("api") ?? "http://127.0.0.1:8420");
}
