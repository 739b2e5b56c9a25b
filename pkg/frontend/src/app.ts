/** Browser bootstrap: wires the three panels to the DOM and the service.
 * Kept deliberately thin; behaviour lives in the panel classes. */

import { SimDashboard } from "./dashboard.js";
import { GraphEditor } from "./editor.js";
import { ReliabilityExplorer } from "./explorer.js";
import { HttpService } from "./service.js";
import type { FaultAction } from "./types.js";

const service = new HttpService("");
const editor = new GraphEditor(service);
const explorer = new ReliabilityExplorer(service);
const dashboard = new SimDashboard(service);

const $ = (selector: string) => document.querySelector(selector) as HTMLElement;

let linkFrom: string | null = null;
let dragKey: string | null = null;

function renderEditor(): void {
  $("#toolbox").innerHTML = editor.renderToolboxHtml();
  $("#canvas-holder").innerHTML = editor.renderCanvasSvg();
  $("#properties").innerHTML = editor.renderPropertyPanelHtml();
  $("#dirty").textContent = editor.dirty ? "unsaved changes" : "";
  const badge = $("#validation-badge");
  if (editor.validation) {
    badge.textContent = editor.validation.valid
      ? "valid"
      : `${editor.validation.violations.length} violations`;
    badge.className = editor.validation.valid ? "ok" : "bad";
  } else {
    badge.textContent = "";
  }
}

function renderExplorer(): void {
  $("#rank-list").innerHTML = explorer.renderListHtml();
  $("#rank-detail").innerHTML = explorer.renderDetailHtml();
  $("#curves-holder").innerHTML = explorer.renderCurvesSvg();
}

function renderDashboard(): void {
  $("#register").innerHTML = dashboard.renderRegisterHtml();
  $("#highlight").innerHTML = dashboard.renderHighlightHtml();
  $("#toggles").innerHTML = dashboard.renderTogglesHtml();
  $("#feed").innerHTML = dashboard.renderFeedHtml();
}

function wireEditor(): void {
  $("#toolbox").addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>(".tool");
    if (!button) return;
    editor.addNode(button.dataset.category!, { x: 80, y: 80 });
    renderEditor();
  });

  const holder = $("#canvas-holder");
  holder.addEventListener("mousedown", (event) => {
    const group = (event.target as HTMLElement).closest<SVGGElement & HTMLElement>(".node");
    if (!group) return;
    const key = group.dataset.key!;
    if ((event as MouseEvent).shiftKey) {
      if (linkFrom && linkFrom !== key) {
        editor.linkNodes(linkFrom, key);
        linkFrom = null;
      } else {
        linkFrom = key;
      }
    } else {
      dragKey = key;
      editor.select(key);
    }
    renderEditor();
  });
  holder.addEventListener("mousemove", (event) => {
    if (!dragKey) return;
    const svg = holder.querySelector("svg");
    if (!svg) return;
    const box = svg.getBoundingClientRect();
    const view = (svg as unknown as SVGSVGElement).viewBox.baseVal;
    const x = view.x + ((event as MouseEvent).clientX - box.left) * (view.width / box.width);
    const y = view.y + ((event as MouseEvent).clientY - box.top) * (view.height / box.height);
    editor.moveNode(dragKey, Math.round(x), Math.round(y));
    renderEditor();
  });
  window.addEventListener("mouseup", () => (dragKey = null));

  $("#properties").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    if (!input.dataset.field || !editor.selection) return;
    editor.setProperty(editor.selection, input.dataset.field, input.value);
    renderEditor();
  });
  $("#properties").addEventListener("click", (event) => {
    const bit = (event.target as HTMLElement).closest<HTMLElement>(".bit");
    if (!bit || !editor.selection) return;
    editor.setIdBit(editor.selection, Number(bit.dataset.bit));
    renderEditor();
  });

  $("#btn-delete").addEventListener("click", () => {
    if (editor.selection) editor.deleteNode(editor.selection);
    renderEditor();
  });
  $("#btn-validate").addEventListener("click", async () => {
    await editor.validate();
    renderEditor();
  });
  $("#btn-save").addEventListener("click", () => {
    const blob = new Blob([editor.saveText()], { type: "application/json" });
    const anchor = document.createElement("a");
    anchor.href = URL.createObjectURL(blob);
    anchor.download = "graph.json";
    anchor.click();
    editor.dirty = false;
    renderEditor();
  });
  ($("#file-load") as HTMLInputElement).addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    editor.loadText(await file.text());
    await editor.validate();
    renderEditor();
  });
}

function wireExplorer(): void {
  $("#btn-explore").addEventListener("click", async () => {
    const tMax = Number(($("#t-max") as HTMLInputElement).value) || 200_000;
    await explorer.explore(editor.save(), tMax, 101);
    renderExplorer();
  });
  $("#rank-list").addEventListener("click", (event) => {
    const entry = (event.target as HTMLElement).closest<HTMLElement>(".rank-entry");
    if (!entry) return;
    explorer.select(Number(entry.dataset.rank));
    renderExplorer();
  });
  $("#curves-holder").addEventListener("mousemove", (event) => {
    const svg = $("#curves-holder").querySelector("svg");
    if (!svg || !explorer.curves) return;
    const box = svg.getBoundingClientRect();
    const frac = ((event as MouseEvent).clientX - box.left - 50) / (box.width - 60);
    const grid = explorer.curves.grid;
    const t = Math.max(0, Math.min(1, frac)) * grid[grid.length - 1];
    const sample = explorer.readoutAt(t);
    if (sample) $("#readout").textContent = `t = ${sample.t} h, R = ${sample.r.toFixed(6)}`;
  });
}

function wireDashboard(): void {
  $("#btn-session").addEventListener("click", async () => {
    await dashboard.start(editor.save());
    dashboard.startPolling(renderDashboard);
    renderDashboard();
  });
  $("#toggles").addEventListener("click", async (event) => {
    const button = (event.target as HTMLElement).closest<HTMLElement>("button[data-action]");
    const row = (event.target as HTMLElement).closest<HTMLElement>(".pe-row");
    if (!button || !row) return;
    await dashboard.setHealth(row.dataset.node!, button.dataset.action as FaultAction);
    renderDashboard();
  });
}

function wireTabs(): void {
  document.querySelectorAll<HTMLElement>(".tab").forEach((tab) =>
    tab.addEventListener("click", () => {
      document.querySelectorAll(".tab").forEach((t) => t.classList.remove("active"));
      document.querySelectorAll(".panel").forEach((p) => p.classList.remove("active"));
      tab.classList.add("active");
      $(`#${tab.dataset.panel}`).classList.add("active");
    }),
  );
}

async function boot(): Promise<void> {
  wireTabs();
  wireEditor();
  wireExplorer();
  wireDashboard();
  try {
    const seed = await (await fetch("/examples/triple.json")).text();
    editor.loadText(seed);
    await editor.validate();
  } catch {
    // no bundled example served; start empty
  }
  renderEditor();
  renderExplorer();
  renderDashboard();
}

boot();
