/** Pure derivation of the curation form structure from a schema document.
 * The form contains exactly the elements the schema declares; nothing here
 * knows any element by name. */

import type { ElementDef, SchemaDocument, SubSchema, Vocabulary } from "./api.js";

export interface FieldModel {
  element: ElementDef;
  /** dropdown options for vocabulary-bound fields, empty otherwise */
  terms: string[];
  /** sub-schema fields for nested elements, empty otherwise */
  subFields: FieldModel[];
  subSchemaId: string | null;
}

export interface SectionModel {
  area: { id: string; label: string; description: string };
  fields: FieldModel[];
}

export interface FormModel {
  schemaId: string;
  sections: SectionModel[];
}

export function subSchemaRef(element: ElementDef): string | null {
  const prefix = "subSchemaRef:";
  return element.valueType.startsWith(prefix) ? element.valueType.slice(prefix.length) : null;
}

function vocabularyOf(schema: SchemaDocument, element: ElementDef): Vocabulary | undefined {
  if (!element.vocabularyRef) return undefined;
  return schema.vocabularies.find((v) => v.id === element.vocabularyRef);
}

function fieldModel(schema: SchemaDocument, element: ElementDef): FieldModel {
  const subId = subSchemaRef(element);
  let subFields: FieldModel[] = [];
  if (subId) {
    const sub: SubSchema | undefined = schema.subSchemas.find((s) => s.id === subId);
    subFields = (sub?.fields ?? []).map((f) => fieldModel(schema, f));
  }
  const vocabulary = vocabularyOf(schema, element);
  return {
    element,
    terms: vocabulary ? vocabulary.terms.map((t) => t.label) : [],
    subFields,
    subSchemaId: subId,
  };
}

export function buildFormModel(schema: SchemaDocument): FormModel {
  const sections: SectionModel[] = schema.areas.map((area) => ({
    area,
    fields: schema.elements.filter((el) => el.area === area.id).map((el) => fieldModel(schema, el)),
  }));
  // elements pointing at an undeclared area would otherwise vanish silently
  const placed = new Set(sections.flatMap((s) => s.fields.map((f) => f.element.id)));
  const strays = schema.elements.filter((el) => !placed.has(el.id));
  if (strays.length > 0) {
    sections.push({
      area: { id: "_unassigned", label: "Unassigned", description: "" },
      fields: strays.map((el) => fieldModel(schema, el)),
    });
  }
  return { schemaId: schema.id, sections };
}

export function allFieldIds(model: FormModel): string[] {
  return model.sections.flatMap((s) => s.fields.map((f) => f.element.id));
}
