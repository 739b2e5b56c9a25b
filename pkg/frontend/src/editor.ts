/** Interactive dependency-graph editor.
 *
 * Owns a GraphDocument and mutates it through small actions
 * (add/move/link/delete/edit-properties). Saving hands back a deep copy
 * in the exact document format, so a load-save cycle is identity.
 * Validation is service-sourced and shown as per-node badges; PE IDs are
 * set through a one-hot bit picker so a malformed ID can never be typed.
 */

import type {
  GraphDocument,
  NodeRecord,
  Service,
  ValidationSummary,
  Violation,
} from "./types.js";

/** Toolbox palette: one entry per node category. */
export const TOOLBOX: { category: string; label: string; hint: string }[] = [
  { category: "sensor", label: "Sensor", hint: "data source sampled from the environment" },
  { category: "actuator", label: "Actuator", hint: "output device driven by a module" },
  { category: "Module", label: "Module (PE)", hint: "processing element, carries a one-hot ID" },
  { category: "DV", label: "Data variable", hint: "information passed between modules" },
  { category: "MDV", label: "Management DV", hint: "consumed by the system manager" },
  { category: "OR", label: "OR gate", hint: "needs k of its inputs" },
  { category: "AND", label: "AND gate", hint: "needs all inputs" },
  { category: "XOR", label: "XOR gate", hint: "routes exactly one input" },
  { category: "DEMUX", label: "DEMUX", hint: "fans one input out" },
  { category: "label", label: "Comment", hint: "annotation, invisible to analysis" },
];

/** Property panel: editable fields per category family. */
export const PROPERTY_FIELDS = ["key", "name", "Rel", "lambdaHw", "lambdaSw", "id"] as const;

const deepCopy = <T>(value: T): T => JSON.parse(JSON.stringify(value));

export function emptyDocument(): GraphDocument {
  return { nodeDataArray: [], linkDataArray: [] };
}

export class GraphEditor {
  doc: GraphDocument = emptyDocument();
  selection: string | null = null;
  dirty = false;
  validation: ValidationSummary | null = null;

  constructor(private service: Service) {}

  // -- persistence ----------------------------------------------------------

  load(doc: GraphDocument): void {
    this.doc = deepCopy(doc);
    this.selection = null;
    this.validation = null;
    this.dirty = false;
  }

  loadText(text: string): void {
    this.load(JSON.parse(text));
  }

  /** Deep copy in the interchange format (what gets written to disk). */
  save(): GraphDocument {
    return deepCopy(this.doc);
  }

  saveText(): string {
    return JSON.stringify(this.doc, null, 2) + "\n";
  }

  // -- lookup ---------------------------------------------------------------

  node(key: string): NodeRecord | undefined {
    return this.doc.nodeDataArray.find((n) => n.key === key);
  }

  nodeBadges(key: string): Violation[] {
    if (!this.validation) return [];
    return this.validation.violations.filter((v) => v.key === key);
  }

  /** Bits already taken by other PEs (for the bit picker). */
  usedIdBits(except?: string): Set<number> {
    const used = new Set<number>();
    for (const node of this.doc.nodeDataArray) {
      if (node.key === except || typeof node.id !== "string") continue;
      const value = parseInt(node.id, 16);
      if (Number.isFinite(value) && value > 0) used.add(Math.log2(value) | 0);
    }
    return used;
  }

  // -- actions --------------------------------------------------------------

  addNode(category: string, at?: { x: number; y: number }): NodeRecord {
    let index = this.doc.nodeDataArray.length + 1;
    let key = `${category} ${index}`;
    while (this.node(key)) key = `${category} ${++index}`;
    const record: NodeRecord = { category, key };
    if (at) record.loc = `${at.x} ${at.y}`;
    if (category === "label") record.text = "comment";
    else record.name = key;
    if (category === "OR") record.k = 1;
    this.doc.nodeDataArray.push(record);
    this.selection = key;
    this.dirty = true;
    return record;
  }

  /** Dragging a node touches only its loc field. */
  moveNode(key: string, x: number, y: number): void {
    const node = this.node(key);
    if (!node) return;
    node.loc = `${x} ${y}`;
    this.dirty = true;
  }

  linkNodes(from: string, to: string): void {
    if (!this.node(from) || !this.node(to) || from === to) return;
    this.doc.linkDataArray.push({ from, to, fromPort: "out", toPort: "in" });
    this.dirty = true;
  }

  deleteNode(key: string): void {
    this.doc.nodeDataArray = this.doc.nodeDataArray.filter((n) => n.key !== key);
    this.doc.linkDataArray = this.doc.linkDataArray.filter(
      (l) => l.from !== key && l.to !== key,
    );
    if (this.selection === key) this.selection = null;
    this.dirty = true;
  }

  deleteLink(index: number): void {
    this.doc.linkDataArray.splice(index, 1);
    this.dirty = true;
  }

  setProperty(key: string, field: string, value: string): void {
    const node = this.node(key);
    if (!node) return;
    if (field === "key") {
      this.renameNode(key, value);
      return;
    }
    if (value === "") {
      delete node[field];
    } else if (field === "Rel" || field === "lambdaHw" || field === "lambdaSw") {
      const numeric = Number(value);
      node[field] = Number.isFinite(numeric) ? numeric : value;
    } else if (field === "k") {
      node.k = Math.max(1, Math.round(Number(value)) || 1);
    } else {
      node[field] = value;
    }
    this.dirty = true;
  }

  /** One-hot ID entry: picking bit b writes id = 0x(1<<b). */
  setIdBit(key: string, bit: number | null): void {
    const node = this.node(key);
    if (!node) return;
    if (bit === null) delete node.id;
    else node.id = "0x" + (1 << bit).toString(16).toUpperCase();
    this.dirty = true;
  }

  renameNode(oldKey: string, newKey: string): void {
    if (!newKey || this.node(newKey)) return;
    const node = this.node(oldKey);
    if (!node) return;
    node.key = newKey;
    for (const link of this.doc.linkDataArray) {
      if (link.from === oldKey) link.from = newKey;
      if (link.to === oldKey) link.to = newKey;
    }
    if (this.selection === oldKey) this.selection = newKey;
    this.dirty = true;
  }

  select(key: string | null): void {
    this.selection = key;
  }

  // -- service round trips ----------------------------------------------------

  async validate(): Promise<ValidationSummary> {
    this.validation = await this.service.validate(this.doc);
    return this.validation;
  }

  // -- rendering ----------------------------------------------------------------

  nodePosition(node: NodeRecord): { x: number; y: number } {
    if (typeof node.loc === "string") {
      const [x, y] = node.loc.split(/\s+/).map(Number);
      if (Number.isFinite(x) && Number.isFinite(y)) return { x, y };
    }
    return { x: 0, y: 0 };
  }

  renderCanvasSvg(): string {
    const positions = new Map(this.doc.nodeDataArray.map((n) => [n.key, this.nodePosition(n)]));
    const xs = [...positions.values()].map((p) => p.x);
    const ys = [...positions.values()].map((p) => p.y);
    const minX = Math.min(0, ...xs) - 80;
    const minY = Math.min(0, ...ys) - 60;
    const width = Math.max(400, Math.max(0, ...xs) - minX + 160);
    const height = Math.max(300, Math.max(0, ...ys) - minY + 120);
    const parts: string[] = [];
    for (const link of this.doc.linkDataArray) {
      const a = positions.get(link.from);
      const b = positions.get(link.to);
      if (!a || !b) continue;
      parts.push(
        `<line class="edge" x1="${a.x + 45}" y1="${a.y}" x2="${b.x - 45}" y2="${b.y}" marker-end="url(#arrow)"></line>`,
      );
    }
    for (const node of this.doc.nodeDataArray) {
      const p = positions.get(node.key)!;
      const selected = node.key === this.selection ? " selected" : "";
      const badges = this.nodeBadges(node.key);
      const badge = badges.length
        ? `<circle class="badge" cx="38" cy="-18" r="7"><title>${badges
            .map((v) => `[${v.rule}] ${v.message}`)
            .join("\n")}</title></circle>`
        : "";
      const label = node.name ?? node.text ?? node.key;
      const idText = typeof node.id === "string" ? `<text class="pe-id" y="-26">${node.id}</text>` : "";
      parts.push(
        `<g class="node cat-${node.category}${selected}" data-key="${escapeAttr(node.key)}" transform="translate(${p.x},${p.y})">` +
          `<rect x="-45" y="-16" width="90" height="32" rx="6"></rect>` +
          `<text class="name" y="4">${escapeHtml(String(label))}</text>${idText}${badge}</g>`,
      );
    }
    return (
      `<svg class="canvas" viewBox="${minX} ${minY} ${width} ${height}">` +
      `<defs><marker id="arrow" viewBox="0 0 8 8" refX="7" refY="4" markerWidth="7" markerHeight="7" orient="auto"><path d="M0,0 L8,4 L0,8 z"></path></marker></defs>` +
      parts.join("") +
      `</svg>`
    );
  }

  renderToolboxHtml(): string {
    const buttons = TOOLBOX.map(
      (t) =>
        `<button class="tool" data-category="${t.category}" title="${escapeAttr(t.hint)}">${t.label}</button>`,
    );
    return `<div class="toolbox">${buttons.join("")}</div>`;
  }

  renderPropertyPanelHtml(): string {
    const node = this.selection ? this.node(this.selection) : undefined;
    if (!node) return `<div class="properties empty">no selection</div>`;
    const isPe = node.category === "Module";
    const rows: string[] = [
      propRow("key", node.key),
      propRow("name", String(node.name ?? node.text ?? "")),
    ];
    if (["sensor", "actuator", "Module", "DV", "MDV"].includes(node.category)) {
      rows.push(propRow("Rel", fmt(node.Rel)));
      rows.push(propRow("lambdaHw", fmt(node.lambdaHw)));
      if (isPe) rows.push(propRow("lambdaSw", fmt(node.lambdaSw)));
    }
    if (node.category === "OR") rows.push(propRow("k", fmt(node.k)));
    if (isPe) rows.push(this.renderBitPickerHtml(node));
    const badges = this.nodeBadges(node.key)
      .map((v) => `<div class="violation">[${v.rule}] ${escapeHtml(v.message)}</div>`)
      .join("");
    return `<div class="properties">${rows.join("")}${badges}</div>`;
  }

  private renderBitPickerHtml(node: NodeRecord): string {
    const used = this.usedIdBits(node.key);
    const current =
      typeof node.id === "string" && parseInt(node.id, 16) > 0
        ? Math.log2(parseInt(node.id, 16)) | 0
        : null;
    const cells: string[] = [];
    for (let bit = 0; bit < 32; bit++) {
      const classes = ["bit"];
      if (bit === current) classes.push("current");
      if (used.has(bit)) classes.push("taken");
      cells.push(`<button class="${classes.join(" ")}" data-bit="${bit}" ${used.has(bit) ? "disabled" : ""}>${bit}</button>`);
    }
    const shown = typeof node.id === "string" ? node.id : "unassigned";
    return `<div class="prop-row"><label>id (one-hot)</label><div class="bitpicker" data-field="id"><span class="id-value">${shown}</span>${cells.join("")}</div></div>`;
  }
}

function propRow(field: string, value: string): string {
  return (
    `<div class="prop-row"><label>${field}</label>` +
    `<input data-field="${field}" value="${escapeAttr(value)}"></div>`
  );
}

function fmt(value: unknown): string {
  return value === undefined || value === null ? "" : String(value);
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function escapeAttr(text: string): string {
  return escapeHtml(text).replace(/"/g, "&quot;");
}
