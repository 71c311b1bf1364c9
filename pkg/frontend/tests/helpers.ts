import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { SchemaDocument } from "../src/api.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export function fixtureText(name: string): string {
  return readFileSync(join(HERE, "fixtures", name), "utf-8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export function bundledSchema(): SchemaDocument {
  return fixtureJson<SchemaDocument>("bundled-schema.json");
}

export function toySchema(): SchemaDocument {
  return fixtureJson<SchemaDocument>("toy-schema.json");
}

/** The application shell from index.html, reduced to the ids the code wires. */
export function mountAppShell(): void {
  document.body.innerHTML = `
    <header>
      <input id="repo-url" type="url">
      <button id="extract" type="button">Extract</button>
      <button id="download" type="button">Download JSON</button>
      <input id="import-file" type="file">
      <p id="extract-error" hidden></p>
    </header>
    <div id="banner" hidden></div>
    <label><input type="checkbox" id="show-recommended" checked></label>
    <label><input type="checkbox" id="show-optional"></label>
    <div id="form-root"></div>
    <div id="completeness"></div>
    <div id="findings"></div>
  `;
}

export interface RecordedCall {
  url: string;
  body: unknown;
}

/** fetch stub backed by the recorded backend responses. Validation answers
 * follow the real backend's shape: the missing-name fixture while `name`
 * is absent, a conformant empty report once it is present. */
export function makeFetchStub(options?: { exportBytes?: string }) {
  const calls: RecordedCall[] = [];
  const exportBytes = options?.exportBytes ?? fixtureText("export-demo.json");

  const stub = async (input: string, init?: RequestInit): Promise<Response> => {
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    calls.push({ url: input, body });
    const respond = (text: string, status = 200, headers: Record<string, string> = {}) =>
      new Response(text, { status, headers: { "Content-Type": "application/json", ...headers } });

    if (input.endsWith("/api/schema")) {
      return respond(fixtureText("bundled-schema.json"));
    }
    if (input.endsWith("/api/extract")) {
      if (String(body.url).includes("acme/grid-sim")) {
        return respond(fixtureText("extract-grid-sim.json"));
      }
      if (String(body.url).includes("rate-limited")) {
        return respond(JSON.stringify({ code: "rate_limited", message: "upstream rate limit" }), 429, {
          "Retry-After": "77",
        });
      }
      return respond(JSON.stringify({ code: "repo_not_found", message: "not found" }), 404);
    }
    if (input.endsWith("/api/validate")) {
      const record = body.record as Record<string, unknown>;
      if (!("name" in record)) {
        return respond(fixtureText("validate-missing-name.json"));
      }
      return respond(JSON.stringify({ findings: [], conformant: true }));
    }
    if (input.endsWith("/api/completeness")) {
      return respond(fixtureText("completeness-empty.json"));
    }
    if (input.endsWith("/api/export")) {
      return respond(exportBytes, 200, {
        "Content-Disposition": 'attachment; filename="demo.metadata.json"',
      });
    }
    return respond(JSON.stringify({ code: "unknown", message: `no stub for ${input}` }), 500);
  };

  return { stub, calls };
}
