/** Typed client for the metadata service HTTP API. */

export interface ThematicArea {
  id: string;
  label: string;
  description: string;
}

export interface ElementDef {
  id: string;
  label: string;
  description: string;
  tier: "mandatory" | "recommended" | "optional";
  area?: string;
  valueType: string;
  multiValued: boolean;
  vocabularyRef?: string;
  provenance: string;
  sourceIri?: string;
}

export interface SubSchema {
  id: string;
  fields: ElementDef[];
}

export interface VocabularyTerm {
  label: string;
  iri?: string;
}

export interface Vocabulary {
  id: string;
  kind: string;
  sourceNote: string;
  terms: VocabularyTerm[];
}

export interface SchemaDocument {
  id: string;
  version: string;
  areas: ThematicArea[];
  elements: ElementDef[];
  subSchemas: SubSchema[];
  vocabularies: Vocabulary[];
  namespaces: Record<string, string>;
}

export interface Finding {
  elementPath: string;
  constraint: string;
  severity: "violation" | "warning" | "info";
  message: string;
}

export interface ValidationReport {
  findings: Finding[];
  conformant: boolean;
}

export interface TierFill {
  filled: number;
  total: number;
}

export interface CompletenessReport {
  perTier: Record<string, TierFill>;
  perArea: Record<string, TierFill>;
  mandatoryComplete: boolean;
}

export interface ExtractionReport {
  extracted: Record<string, string>;
  skipped: [string, string][];
}

export interface ExtractResponse {
  record: Record<string, unknown>;
  extractionReport: ExtractionReport;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly retryAfter: number | null = null,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function throwApiError(response: Response): Promise<never> {
  let code = "unknown_error";
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as ApiErrorBody;
    code = body.code ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  const retryAfterHeader = response.headers.get("Retry-After");
  const retryAfter = retryAfterHeader === null ? null : Number(retryAfterHeader);
  throw new ApiError(response.status, code, message, Number.isNaN(retryAfter as number) ? null : retryAfter);
}

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await throwApiError(response);
    return (await response.json()) as T;
  }

  schema(): Promise<SchemaDocument> {
    return this.getJson("/api/schema");
  }

  extract(url: string): Promise<ExtractResponse> {
    return this.postJson("/api/extract", { url });
  }

  validate(record: Record<string, unknown>): Promise<ValidationReport> {
    return this.postJson("/api/validate", { record });
  }

  completeness(record: Record<string, unknown>): Promise<CompletenessReport> {
    return this.postJson("/api/completeness", { record });
  }

  /** Export keeps the exact bytes the backend produced: they are the file. */
  async exportRecord(record: Record<string, unknown>): Promise<{ bytes: Blob; filename: string }> {
    const response = await this.fetchImpl(this.baseUrl + "/api/export", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ record }),
    });
    if (!response.ok) await throwApiError(response);
    const disposition = response.headers.get("Content-Disposition") ?? "";
    const match = /filename="([^"]+)"/.exec(disposition);
    return { bytes: await response.blob(), filename: match ? match[1] : "record.metadata.json" };
  }
}

/** Light client-side URL screening: only obviously malformed input is
 * rejected locally; host support is the backend's call. */
export function repoUrlProblem(url: string): string | null {
  const trimmed = url.trim();
  if (!trimmed) return "Enter a repository URL.";
  const candidate = trimmed.includes("://") ? trimmed : "https://" + trimmed;
  let parsed: URL;
  try {
    parsed = new URL(candidate);
  } catch {
    return "This does not look like a valid URL.";
  }
  const segments = parsed.pathname.split("/").filter((s) => s.length > 0);
  if (segments.length < 2) {
    return "The URL must point at a repository (host/owner/repository).";
  }
  return null;
}
