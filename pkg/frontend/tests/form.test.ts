import { beforeEach, describe, expect, it } from "vitest";

import { FormView } from "../src/form.js";
import { buildFormModel } from "../src/formModel.js";
import { newSession } from "../src/session.js";
import { bundledSchema, toySchema } from "./helpers.js";

function renderInto(schema = bundledSchema()) {
  document.body.innerHTML = '<div id="form-root"></div>';
  const root = document.getElementById("form-root") as HTMLElement;
  const state = newSession();
  let edits = 0;
  const view = new FormView(root, buildFormModel(schema), state, { onEdit: () => (edits += 1) });
  view.render();
  return { root, state, view, schema, edits: () => edits };
}

describe("rendered form", () => {
  beforeEach(() => {
    document.body.innerHTML = "";
  });

  it("renders exactly one field group per schema element (bundled schema)", () => {
    const { root, schema } = renderInto();
    const rendered = [...root.querySelectorAll<HTMLElement>(".field-group")].map(
      (g) => g.dataset.elementId,
    );
    expect(new Set(rendered)).toEqual(new Set(schema.elements.map((el) => el.id)));
    expect(rendered.length).toBe(schema.elements.length);
  });

  it("renders exactly the toy schema's fields when given the toy schema", () => {
    const { root } = renderInto(toySchema());
    const rendered = [...root.querySelectorAll<HTMLElement>(".field-group")].map(
      (g) => g.dataset.elementId,
    );
    expect(rendered.sort()).toEqual(["homepage", "name"]);
  });

  it("labels every control", () => {
    const { root } = renderInto();
    for (const control of root.querySelectorAll("input, select")) {
      const id = control.getAttribute("id");
      expect(id).toBeTruthy();
      expect(root.querySelector(`label[for="${id}"]`)).not.toBeNull();
    }
  });

  it("shows a tier badge matching each element's tier", () => {
    const { root, schema } = renderInto();
    for (const element of schema.elements) {
      const group = root.querySelector(`[data-element-id="${element.id}"]`)!;
      expect(group.querySelector(".tier-badge")!.textContent).toBe(element.tier);
    }
  });

  it("renders vocabulary-bound fields as strict dropdowns with the vocabulary's terms", () => {
    const { root, schema } = renderInto();
    for (const element of schema.elements) {
      if (element.valueType !== "vocabularyTerm") continue;
      const group = root.querySelector(`[data-element-id="${element.id}"]`)!;
      expect(group.querySelector("input")).toBeNull(); // no free-text escape
      const select = group.querySelector("select")!;
      const vocab = schema.vocabularies.find((v) => v.id === element.vocabularyRef)!;
      const options = [...select.querySelectorAll("option")].map((o) => o.getAttribute("value"));
      expect(options).toEqual(["", ...vocab.terms.map((t) => t.label)]);
    }
  });

  it("writes edits into the session state without re-rendering", () => {
    const { root, state, edits } = renderInto();
    const nameInput = root.querySelector<HTMLInputElement>('[data-element-id="name"] input')!;
    nameInput.value = "grid-sim";
    nameInput.dispatchEvent(new Event("input", { bubbles: true }));
    expect(state.values.name).toEqual(["grid-sim"]);
    expect(edits()).toBe(1);
    // the node was mutated in place, not replaced
    expect(root.querySelector('[data-element-id="name"] input')).toBe(nameInput);
  });

  it("clearing an input removes the element from the record", () => {
    const { root, state } = renderInto();
    const nameInput = root.querySelector<HTMLInputElement>('[data-element-id="name"] input')!;
    nameInput.value = "x";
    nameInput.dispatchEvent(new Event("input", { bubbles: true }));
    nameInput.value = "";
    nameInput.dispatchEvent(new Event("input", { bubbles: true }));
    expect("name" in state.values).toBe(false);
  });

  it("hides optional fields by default and reveals them via tier visibility", () => {
    const { root, view, schema } = renderInto();
    view.setTierVisibility({ recommended: true, optional: false });
    const optionalId = schema.elements.find((el) => el.tier === "optional")!.id;
    const mandatoryId = schema.elements.find((el) => el.tier === "mandatory")!.id;
    const optionalGroup = root.querySelector<HTMLElement>(`[data-element-id="${optionalId}"]`)!;
    const mandatoryGroup = root.querySelector<HTMLElement>(`[data-element-id="${mandatoryId}"]`)!;
    expect(optionalGroup.hidden).toBe(true);
    expect(mandatoryGroup.hidden).toBe(false);
    view.setTierVisibility({ recommended: true, optional: true });
    expect(optionalGroup.hidden).toBe(false);
  });

  it("focusElement focuses the first control of the finding's element", () => {
    const { root, view } = renderInto();
    view.focusElement("name");
    const nameInput = root.querySelector<HTMLInputElement>('[data-element-id="name"] input')!;
    expect(document.activeElement).toBe(nameInput);
  });

  it("focusElement reveals hidden tiers and maps dotted paths to the parent element", () => {
    const { root, view } = renderInto();
    document.body.insertAdjacentHTML(
      "beforeend",
      '<input type="checkbox" id="show-recommended"><input type="checkbox" id="show-optional">',
    );
    view.setTierVisibility({ recommended: false, optional: false });
    view.focusElement("contributor.familyName");
    const group = root.querySelector<HTMLElement>('[data-element-id="contributor"]')!;
    expect(group.hidden).toBe(false);
    expect(document.activeElement).toBe(group.querySelector("input, select"));
  });

  it("prefilled values render with extraction attribution markers", () => {
    document.body.innerHTML = '<div id="form-root"></div>';
    const root = document.getElementById("form-root") as HTMLElement;
    const state = newSession();
    state.values = { name: ["grid-sim"] };
    state.attribution = { name: "repoInfo.name" };
    const view = new FormView(root, buildFormModel(bundledSchema()), state, { onEdit: () => {} });
    view.render();
    const marker = root.querySelector('[data-element-id="name"] .attribution')!;
    expect(marker.textContent).toBe("extracted from repoInfo.name");
    const input = root.querySelector<HTMLInputElement>('[data-element-id="name"] input')!;
    expect(input.value).toBe("grid-sim");
    input.value = "renamed";
    input.dispatchEvent(new Event("input", { bubbles: true }));
    expect(marker.textContent).toBe("extracted from repoInfo.name (edited)");
  });

  it("multi-valued elements support adding and removing rows", () => {
    const { root, state } = renderInto();
    const group = root.querySelector<HTMLElement>('[data-element-id="keywords"]')!;
    const add = group.querySelector<HTMLButtonElement>(".add-row")!;
    const first = group.querySelector<HTMLInputElement>("input")!;
    first.value = "energy";
    first.dispatchEvent(new Event("input", { bubbles: true }));
    add.click();
    const inputs = group.querySelectorAll("input");
    (inputs[1] as HTMLInputElement).value = "simulation";
    inputs[1].dispatchEvent(new Event("input", { bubbles: true }));
    expect(state.values.keywords).toEqual(["energy", "simulation"]);
    group.querySelector<HTMLButtonElement>(".row .remove-row")!.click();
    expect(state.values.keywords).toEqual(["simulation"]);
  });

  it("nested sub-schema fields edit their own entries", () => {
    const { root, state } = renderInto();
    const group = root.querySelector<HTMLElement>('[data-element-id="author"]')!;
    const given = group.querySelector<HTMLInputElement>('input[id$="givenName"]')!;
    const family = group.querySelector<HTMLInputElement>('input[id$="familyName"]')!;
    given.value = "Ada";
    given.dispatchEvent(new Event("input", { bubbles: true }));
    family.value = "Lovelace";
    family.dispatchEvent(new Event("input", { bubbles: true }));
    expect(state.values.author).toEqual([{ givenName: ["Ada"], familyName: ["Lovelace"] }]);
  });
});
