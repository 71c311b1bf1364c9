/** DOM rendering of the schema-driven curation form.
 *
 * The form is rendered once per record reset; individual inputs write
 * straight into the session state, so typing never triggers a re-render.
 * Every input is labeled; vocabulary-bound fields are strict dropdowns.
 */

import type { FieldModel, FormModel, SectionModel } from "./formModel.js";
import type { FieldEntry, FormValues, NestedEntry } from "./recordio.js";
import type { SessionState } from "./session.js";
import { setEntries } from "./session.js";

export interface TierVisibility {
  recommended: boolean;
  optional: boolean;
}

export interface FormCallbacks {
  onEdit: () => void;
}

function h<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

function inputType(valueType: string): string {
  switch (valueType) {
    case "date":
      return "date";
    case "integer":
    case "number":
      return "number";
    default:
      return "text";
  }
}

function scalarControl(
  id: string,
  valueType: string,
  terms: string[],
  value: string,
  onInput: (value: string) => void,
): HTMLElement {
  if (terms.length > 0) {
    const select = h("select", { id });
    select.append(h("option", { value: "" }, "— select —"));
    for (const term of terms) {
      const option = h("option", { value: term }, term);
      if (term === value) option.selected = true;
      select.append(option);
    }
    select.addEventListener("change", () => onInput(select.value));
    return select;
  }
  if (valueType === "boolean") {
    const select = h("select", { id });
    for (const [optionValue, label] of [["", "— select —"], ["true", "yes"], ["false", "no"]]) {
      const option = h("option", { value: optionValue }, label);
      if (optionValue === value) option.selected = true;
      select.append(option);
    }
    select.addEventListener("change", () => onInput(select.value));
    return select;
  }
  const input = h("input", { id, type: inputType(valueType) });
  if (valueType === "integer") input.setAttribute("step", "1");
  input.value = value;
  input.addEventListener("input", () => onInput(input.value));
  return input;
}

function emptyEntry(field: FieldModel): FieldEntry {
  return field.subSchemaId ? {} : "";
}

export class FormView {
  private tierVisibility: TierVisibility = { recommended: true, optional: false };

  constructor(
    private readonly root: HTMLElement,
    private readonly model: FormModel,
    private readonly state: SessionState,
    private readonly callbacks: FormCallbacks,
  ) {}

  setTierVisibility(visibility: TierVisibility): void {
    this.tierVisibility = visibility;
    this.applyTierVisibility();
  }

  render(): void {
    this.root.textContent = "";
    for (const section of this.model.sections) {
      this.root.append(this.renderSection(section));
    }
    this.applyTierVisibility();
  }

  focusElement(elementPath: string): void {
    const elementId = elementPath.split(".")[0].split("[")[0];
    const group = this.root.querySelector<HTMLElement>(`[data-element-id="${elementId}"]`);
    if (!group) return;
    if (group.dataset.tier !== "mandatory") {
      // make sure a hidden field can actually receive focus
      if (group.dataset.tier === "recommended") this.tierVisibility.recommended = true;
      if (group.dataset.tier === "optional") this.tierVisibility.optional = true;
      this.applyTierVisibility();
      this.syncToggles();
    }
    const section = group.closest("details");
    if (section) section.open = true;
    const control = group.querySelector<HTMLElement>("input, select, textarea");
    control?.focus();
    if (typeof group.scrollIntoView === "function") {
      group.scrollIntoView({ block: "center" });
    }
  }

  private syncToggles(): void {
    for (const tier of ["recommended", "optional"] as const) {
      const toggle = document.querySelector<HTMLInputElement>(`#show-${tier}`);
      if (toggle) toggle.checked = this.tierVisibility[tier];
    }
  }

  private applyTierVisibility(): void {
    for (const group of this.root.querySelectorAll<HTMLElement>(".field-group")) {
      const tier = group.dataset.tier;
      const visible =
        tier === "mandatory" ||
        (tier === "recommended" && this.tierVisibility.recommended) ||
        (tier === "optional" && this.tierVisibility.optional);
      group.hidden = !visible;
    }
    for (const section of this.root.querySelectorAll<HTMLDetailsElement>("details.area")) {
      const groups = [...section.querySelectorAll<HTMLElement>(".field-group")];
      section.hidden = groups.every((g) => g.hidden);
    }
  }

  private renderSection(section: SectionModel): HTMLElement {
    const details = h("details", { class: "area" });
    const mandatoryCount = section.fields.filter((f) => f.element.tier === "mandatory").length;
    details.open = mandatoryCount > 0;
    details.append(
      h("summary", {}, h("strong", {}, section.area.label), " ", h("small", {}, section.area.description)),
    );
    for (const field of section.fields) {
      details.append(this.renderFieldGroup(field));
    }
    return details;
  }

  private entries(elementId: string): FieldEntry[] {
    return this.state.values[elementId] ?? [];
  }

  private renderFieldGroup(field: FieldModel): HTMLElement {
    const element = field.element;
    const group = h("div", {
      class: "field-group",
      "data-element-id": element.id,
      "data-tier": element.tier,
    });

    const head = h("div", { class: "field-head" });
    head.append(
      h("label", { for: `f-${element.id}-0` }, element.label),
      h("span", { class: `tier-badge tier-${element.tier}` }, element.tier),
    );
    const source = this.state.attribution[element.id];
    if (source) {
      const edited = this.state.dirty.has(element.id) ? " (edited)" : "";
      head.append(h("span", { class: "attribution", title: "value pre-filled from the repository" },
        `extracted from ${source}${edited}`));
    }
    group.append(head);

    if (element.description) {
      group.append(
        h("details", { class: "desc" },
          h("summary", {}, "description & examples"),
          h("p", {}, element.description),
          h("p", { class: "hint-slot" }, ""),
        ),
      );
    }

    const rows = h("div", { class: "rows" });
    group.append(rows);
    const current = this.entries(element.id);
    const initial = current.length > 0 ? current : [emptyEntry(field)];
    initial.forEach((entry, index) => rows.append(this.renderRow(field, entry, index)));

    if (element.multiValued || field.subSchemaId) {
      const add = h("button", { type: "button", class: "add-row" },
        element.multiValued ? `add ${element.label.toLowerCase()}` : `edit ${element.label.toLowerCase()}`);
      if (!element.multiValued) add.hidden = true;
      add.addEventListener("click", () => {
        rows.append(this.renderRow(field, emptyEntry(field), rows.children.length));
      });
      group.append(add);
    }
    return group;
  }

  private renderRow(field: FieldModel, entry: FieldEntry, index: number): HTMLElement {
    const element = field.element;
    const row = h("div", { class: "row", "data-row": String(index) });
    if (field.subSchemaId) {
      row.append(this.renderNested(field, (entry ?? {}) as NestedEntry, index));
    } else {
      row.append(
        scalarControl(`f-${element.id}-${index}`, element.valueType, field.terms,
          typeof entry === "string" ? entry : "", (value) => {
            this.updateScalarRow(element.id, index, value);
          }),
      );
    }
    if (element.multiValued) {
      const remove = h("button", { type: "button", class: "remove-row", "aria-label": `remove ${element.label} ${index + 1}` }, "✕");
      remove.addEventListener("click", () => {
        row.remove();
        this.collectRowsIntoState(element.id);
        this.callbacks.onEdit();
      });
      row.append(remove);
    }
    return row;
  }

  private renderNested(field: FieldModel, entry: NestedEntry, index: number): HTMLElement {
    const element = field.element;
    const fieldset = h("fieldset", { class: "nested" },
      h("legend", {}, `${element.label} ${element.multiValued ? index + 1 : ""}`.trim()));
    for (const subField of field.subFields) {
      const subId = `f-${element.id}-${index}-${subField.element.id}`;
      const wrapper = h("div", { class: "nested-field" });
      wrapper.append(
        h("label", { for: subId }, subField.element.label),
        scalarControl(subId, subField.element.valueType, subField.terms,
          entry[subField.element.id]?.[0] ?? "", (value) => {
            this.updateNestedRow(element.id, index, subField.element.id, value);
          }),
      );
      fieldset.append(wrapper);
    }
    return fieldset;
  }

  private updateScalarRow(elementId: string, index: number, value: string): void {
    const entries = [...this.entries(elementId)];
    while (entries.length <= index) entries.push("");
    entries[index] = value;
    setEntries(this.state, elementId, this.prune(entries));
    this.refreshAttribution(elementId);
    this.callbacks.onEdit();
  }

  private updateNestedRow(elementId: string, index: number, fieldId: string, value: string): void {
    const entries = [...this.entries(elementId)];
    while (entries.length <= index) entries.push({});
    const nested = { ...(entries[index] as NestedEntry) };
    if (value === "") {
      delete nested[fieldId];
    } else {
      nested[fieldId] = [value];
    }
    entries[index] = nested;
    setEntries(this.state, elementId, this.prune(entries));
    this.refreshAttribution(elementId);
    this.callbacks.onEdit();
  }

  /** Drop trailing fully-empty rows so clearing an input clears the element. */
  private prune(entries: FieldEntry[]): FieldEntry[] {
    const notEmpty = (e: FieldEntry) =>
      typeof e === "string" ? e !== "" : Object.keys(e).length > 0;
    const result = [...entries];
    while (result.length > 0 && !notEmpty(result[result.length - 1])) {
      result.pop();
    }
    return result;
  }

  private collectRowsIntoState(elementId: string): void {
    const group = this.root.querySelector(`[data-element-id="${elementId}"]`);
    if (!group) return;
    const entries: FieldEntry[] = [];
    for (const row of group.querySelectorAll<HTMLElement>(".row")) {
      const fieldset = row.querySelector("fieldset");
      if (fieldset) {
        const nested: NestedEntry = {};
        for (const control of fieldset.querySelectorAll<HTMLInputElement | HTMLSelectElement>("input, select")) {
          const fieldId = control.id.split("-").pop() as string;
          if (control.value !== "") nested[fieldId] = [control.value];
        }
        entries.push(nested);
      } else {
        const control = row.querySelector<HTMLInputElement | HTMLSelectElement>("input, select");
        entries.push(control ? control.value : "");
      }
    }
    setEntries(this.state, elementId, this.prune(entries));
    this.refreshAttribution(elementId);
  }

  private refreshAttribution(elementId: string): void {
    const group = this.root.querySelector(`[data-element-id="${elementId}"]`);
    const marker = group?.querySelector(".attribution");
    const source = this.state.attribution[elementId];
    if (marker && source && !marker.textContent?.endsWith("(edited)")) {
      marker.textContent = `extracted from ${source} (edited)`;
    }
  }
}
