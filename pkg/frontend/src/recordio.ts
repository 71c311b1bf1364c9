/** Conversions between the editable form state and record documents.
 *
 * Form state keeps everything as strings (what the inputs hold); the wire
 * document carries typed JSON per the schema's value types. Empty inputs
 * and all-empty nested rows are treated as absent.
 */

import type { ElementDef, SchemaDocument } from "./api.js";
import { subSchemaRef } from "./formModel.js";

/** One value as edited: a scalar string, or a nested map of field -> rows. */
export type FieldEntry = string | NestedEntry;
export interface NestedEntry {
  [fieldId: string]: string[];
}

/** elementId -> ordered list of entries (rows). */
export type FormValues = Record<string, FieldEntry[]>;

function scalarToWire(element: ElementDef, raw: string): unknown {
  const text = element.valueType === "text" ? raw : raw.trim();
  switch (element.valueType) {
    case "integer":
      return Number.parseInt(text, 10);
    case "number":
      return Number.parseFloat(text);
    case "boolean":
      return text === "true";
    default:
      return text;
  }
}

function scalarFromWire(value: unknown): string {
  if (typeof value === "string") return value;
  if (typeof value === "number" || typeof value === "boolean") return String(value);
  return JSON.stringify(value);
}

function entryIsEmpty(element: ElementDef, entry: FieldEntry): boolean {
  if (typeof entry === "string") {
    return element.valueType === "text" ? entry === "" : entry.trim() === "";
  }
  return Object.values(entry).every((rows) => rows.every((v) => v.trim() === ""));
}

/** Build the wire record document (element keys only, no context). */
export function toDocument(schema: SchemaDocument, values: FormValues): Record<string, unknown> {
  const document: Record<string, unknown> = {};
  for (const element of schema.elements) {
    const entries = (values[element.id] ?? []).filter((e) => !entryIsEmpty(element, e));
    if (entries.length === 0) continue;
    const wire = entries.map((entry) => entryToWire(schema, element, entry));
    document[element.id] = element.multiValued ? wire : wire[0];
  }
  return document;
}

function entryToWire(schema: SchemaDocument, element: ElementDef, entry: FieldEntry): unknown {
  const subId = subSchemaRef(element);
  if (subId && typeof entry === "object") {
    const sub = schema.subSchemas.find((s) => s.id === subId);
    const wire: Record<string, unknown> = {};
    for (const field of sub?.fields ?? []) {
      const rows = (entry[field.id] ?? []).filter((v) =>
        field.valueType === "text" ? v !== "" : v.trim() !== "",
      );
      if (rows.length === 0) continue;
      const converted = rows.map((v) => scalarToWire(field, v));
      wire[field.id] = field.multiValued ? converted : converted[0];
    }
    return wire;
  }
  return scalarToWire(element, entry as string);
}

/** Read a downloaded/exported document back into editable form state.
 * Keys starting with "@" (the linked-data context) are skipped. */
export function fromDocument(schema: SchemaDocument, document: Record<string, unknown>): FormValues {
  const values: FormValues = {};
  for (const element of schema.elements) {
    if (!(element.id in document)) continue;
    const raw = document[element.id];
    const rows = element.multiValued && Array.isArray(raw) ? raw : [raw];
    values[element.id] = rows.map((item) => entryFromWire(schema, element, item));
  }
  return values;
}

function entryFromWire(schema: SchemaDocument, element: ElementDef, item: unknown): FieldEntry {
  const subId = subSchemaRef(element);
  if (subId && item !== null && typeof item === "object" && !Array.isArray(item)) {
    const sub = schema.subSchemas.find((s) => s.id === subId);
    const nested: NestedEntry = {};
    for (const field of sub?.fields ?? []) {
      const rawField = (item as Record<string, unknown>)[field.id];
      if (rawField === undefined) continue;
      const rows = field.multiValued && Array.isArray(rawField) ? rawField : [rawField];
      nested[field.id] = rows.map(scalarFromWire);
    }
    return nested;
  }
  return scalarFromWire(item);
}
