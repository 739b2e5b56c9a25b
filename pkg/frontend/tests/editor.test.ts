import { describe, expect, it } from "vitest";

import { GraphEditor, TOOLBOX } from "../src/editor.js";
import type { GraphDocument } from "../src/types.js";
import { MockService, fixture, fixtureText } from "./mock_service.js";

function editorWith(doc?: GraphDocument): GraphEditor {
  const editor = new GraphEditor(new MockService());
  if (doc) editor.load(doc);
  return editor;
}

describe("document round trip", () => {
  it("load then save returns the document unchanged", () => {
    const original = fixture<GraphDocument>("serial.json");
    const editor = editorWith(original);
    expect(editor.save()).toEqual(original);
    expect(editor.dirty).toBe(false);
  });

  it("loadText/saveText keeps structural identity with the file form", () => {
    const text = fixtureText("serial.json");
    const editor = editorWith();
    editor.loadText(text);
    expect(JSON.parse(editor.saveText())).toEqual(JSON.parse(text));
  });

  it("saved copies are detached from the editor state", () => {
    const editor = editorWith(fixture<GraphDocument>("serial.json"));
    const saved = editor.save();
    editor.moveNode("sensor 1", 0, 0);
    expect(saved).toEqual(fixture<GraphDocument>("serial.json"));
  });
});

describe("editing actions", () => {
  it("dragging a node updates only its loc field", () => {
    const original = fixture<GraphDocument>("serial.json");
    const editor = editorWith(original);
    editor.moveNode("Module 1", -100, -200);
    const before = original.nodeDataArray.find((n) => n.key === "Module 1")!;
    const after = editor.node("Module 1")!;
    expect(after.loc).toBe("-100 -200");
    const { loc: _a, ...restAfter } = after;
    const { loc: _b, ...restBefore } = before;
    expect(restAfter).toEqual(restBefore);
    expect(editor.dirty).toBe(true);
  });

  it("adds palette nodes with generated keys", () => {
    const editor = editorWith();
    for (const entry of TOOLBOX) {
      editor.addNode(entry.category, { x: 10, y: 20 });
    }
    expect(editor.doc.nodeDataArray).toHaveLength(TOOLBOX.length);
    expect(new Set(editor.doc.nodeDataArray.map((n) => n.key)).size).toBe(TOOLBOX.length);
    expect(editor.node("OR 6")?.k).toBe(1);
  });

  it("links and deletes nodes, dropping dangling links", () => {
    const editor = editorWith();
    const a = editor.addNode("sensor");
    const b = editor.addNode("Module");
    editor.linkNodes(a.key, b.key);
    expect(editor.doc.linkDataArray).toEqual([
      { from: a.key, to: b.key, fromPort: "out", toPort: "in" },
    ]);
    editor.deleteNode(b.key);
    expect(editor.doc.linkDataArray).toEqual([]);
    expect(editor.node(b.key)).toBeUndefined();
  });

  it("renaming a node follows its links", () => {
    const editor = editorWith(fixture<GraphDocument>("serial.json"));
    editor.setProperty("Module 1", "key", "ModuleOne");
    expect(editor.node("ModuleOne")).toBeDefined();
    expect(editor.doc.linkDataArray.filter((l) => l.from === "ModuleOne" || l.to === "ModuleOne"))
      .toHaveLength(2);
  });

  it("numeric properties are stored as numbers, empty clears", () => {
    const editor = editorWith(fixture<GraphDocument>("serial.json"));
    editor.setProperty("DV 1", "lambdaHw", "2.5");
    expect(editor.node("DV 1")!.lambdaHw).toBe(2.5);
    editor.setProperty("DV 1", "Rel", "");
    expect(editor.node("DV 1")!.Rel).toBeUndefined();
  });
});

describe("one-hot id bit picker", () => {
  it("writes exactly one bit in hex form", () => {
    const editor = editorWith();
    const pe = editor.addNode("Module");
    editor.setIdBit(pe.key, 11);
    expect(editor.node(pe.key)!.id).toBe("0x800");
    editor.setIdBit(pe.key, 0);
    expect(editor.node(pe.key)!.id).toBe("0x1");
    editor.setIdBit(pe.key, null);
    expect(editor.node(pe.key)!.id).toBeUndefined();
  });

  it("reports bits taken by other PEs", () => {
    const editor = editorWith();
    const first = editor.addNode("Module");
    const second = editor.addNode("Module");
    editor.setIdBit(first.key, 3);
    expect(editor.usedIdBits(second.key)).toEqual(new Set([3]));
    expect(editor.usedIdBits(first.key)).toEqual(new Set());
    const picker = (() => {
      editor.select(second.key);
      return editor.renderPropertyPanelHtml();
    })();
    expect(picker).toContain('data-bit="3" disabled');
  });
});

describe("service-sourced validation badges", () => {
  it("a cycle produces a badge on the offending node", async () => {
    const editor = editorWith(fixture<GraphDocument>("serial.json"));
    editor.linkNodes("Actuator 1", "sensor 1");
    const summary = await editor.validate();
    expect(summary.valid).toBe(false);
    const badged = editor.doc.nodeDataArray.filter((n) => editor.nodeBadges(n.key).length > 0);
    expect(badged.length).toBeGreaterThan(0);
    expect(editor.renderCanvasSvg()).toContain('class="badge"');
  });

  it("the clean example validates clean", async () => {
    const editor = editorWith(fixture<GraphDocument>("serial.json"));
    const summary = await editor.validate();
    expect(summary).toMatchObject({ valid: true, nodes: 6, links: 4 });
  });
});

describe("rendering", () => {
  it("renders every node and link of the loaded example", () => {
    const editor = editorWith(fixture<GraphDocument>("serial.json"));
    const svg = editor.renderCanvasSvg();
    expect(svg.match(/class="node/g)).toHaveLength(6);
    expect(svg.match(/class="edge"/g)).toHaveLength(4);
  });

  it("toolbox mirrors the palette", () => {
    const editor = editorWith();
    const html = editor.renderToolboxHtml();
    for (const entry of TOOLBOX) expect(html).toContain(`data-category="${entry.category}"`);
  });

  it("property panel exposes the editable fields for a PE", () => {
    const editor = editorWith(fixture<GraphDocument>("triple.json"));
    editor.select("Voter");
    const html = editor.renderPropertyPanelHtml();
    for (const field of ["key", "name", "Rel", "lambdaHw", "lambdaSw"]) {
      expect(html).toContain(`data-field="${field}"`);
    }
    expect(html).toContain("bitpicker");
  });
});
