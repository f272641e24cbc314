/** Shell: wires the scene mirror, floor plan, render view, and restyle
 * console to the service this page was loaded from.
 */

import { SceneServiceClient } from "./api.js";
import { FloorPlanEditor } from "./floorplan.js";
import { UiSceneModel } from "./model.js";
import { RenderPanel } from "./renderpanel.js";
import { StyleConsole } from "./styleconsole.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const client = new SceneServiceClient(window.location.origin);
const model = new UiSceneModel();

const canvas = el<HTMLCanvasElement>("floorplan");
const editor = new FloorPlanEditor(canvas, model);
const panel = new RenderPanel(el<HTMLImageElement>("render-img"), client, model);
const restyler = new StyleConsole(client, model, {
  promptInput: el<HTMLInputElement>("style-prompt"),
  seedInput: el<HTMLInputElement>("style-seed"),
  selectedOnly: el<HTMLInputElement>("style-selected-only"),
  startButton: el<HTMLButtonElement>("style-start"),
  progressLine: el("style-progress"),
  thumbnailStrip: el("atlas-strip"),
});

const warningBar = el("warning-bar");
const versionLabel = el("scene-version");
const selectionLabel = el("selection-label");
const contextMenu = el("context-menu");

let warningTimer: ReturnType<typeof setTimeout> | null = null;

function showWarning(message: string): void {
  warningBar.textContent = message;
  warningBar.classList.add("visible");
  if (warningTimer) clearTimeout(warningTimer);
  warningTimer = setTimeout(() => warningBar.classList.remove("visible"), 5000);
}

async function refreshScene(): Promise<void> {
  const snap = await client.fetchScene();
  model.adoptServerScene(snap.scene, snap.version);
}

model.onSceneReplaced = () => {
  versionLabel.textContent = `scene v${model.sceneVersion}`;
  editor.draw();
  void panel.refresh();
  restyler.refreshThumbnails();
};

editor.onSubmitOp = async (op) => {
  await client.postOp(op);
  await refreshScene();
};
editor.onWarning = showWarning;
editor.onSelectionChange = (id) => {
  selectionLabel.textContent = id ? `selected: ${id}` : "nothing selected";
  hideContextMenu();
};
editor.onContextMenu = (_id, x, y) => {
  contextMenu.style.left = `${x}px`;
  contextMenu.style.top = `${y}px`;
  contextMenu.classList.add("visible");
};

function hideContextMenu(): void {
  contextMenu.classList.remove("visible");
}

el("ctx-remove").addEventListener("click", () => {
  hideContextMenu();
  void editor.contextAction("remove");
});
el("ctx-clone").addEventListener("click", () => {
  hideContextMenu();
  void editor.contextAction("clone");
});
document.addEventListener("pointerdown", (ev) => {
  if (!contextMenu.contains(ev.target as Node)) hideContextMenu();
});

panel.onStatus = (text) => {
  el("render-status").textContent = text;
};
panel.attachControls(el("render-surface"));

restyler.onDone = async () => {
  await refreshScene();
};

refreshScene().catch((err) => {
  showWarning(err instanceof Error ? err.message : String(err));
});
