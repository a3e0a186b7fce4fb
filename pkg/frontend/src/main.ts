// Workbench bootstrap: project picker, board, commit/conflict flow.

import { fetchProjects } from "./api.js";
import { renderBoard } from "./board.js";
import { CommitResult, Workbench } from "./state.js";
import { PairKey } from "./types.js";

const API_BASE = "";  // served by `taxunify serve --ui`; same origin

const bench = new Workbench(API_BASE, window.localStorage);

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const header = document.createElement("header");
header.className = "topbar";
const picker = document.createElement("select");
picker.className = "project-picker";
const revisionLabel = document.createElement("span");
revisionLabel.className = "revision";
const saveButton = document.createElement("button");
saveButton.textContent = "Save mapping";
saveButton.className = "save";
const discardButton = document.createElement("button");
discardButton.textContent = "Discard edits";
discardButton.className = "discard";
const noticeBar = document.createElement("span");
noticeBar.className = "notice";
const offlineBanner = document.createElement("div");
offlineBanner.className = "offline-banner";
offlineBanner.textContent =
  "connection lost: read-only, your edits are kept locally";
header.append(picker, revisionLabel, saveButton, discardButton, noticeBar);

const boardContainer = document.createElement("main");
boardContainer.className = "board-container";
root.append(header, offlineBanner, boardContainer);

function notice(text: string): void {
  noticeBar.textContent = text;
  if (text) setTimeout(() => {
    if (noticeBar.textContent === text) noticeBar.textContent = "";
  }, 4000);
}

function render(): void {
  revisionLabel.textContent =
    bench.project ? `revision ${bench.revision}` : "";
  saveButton.disabled = !bench.canCommit();
  discardButton.disabled = !bench.dirty();
  offlineBanner.style.display = bench.offline ? "block" : "none";
  document.body.classList.toggle("read-only", bench.offline);
  renderBoard(boardContainer, bench, {
    onSelectUnified(nodeId) {
      if (bench.offline) return;
      bench.selection.unifiedNodeId =
        bench.selection.unifiedNodeId === nodeId ? null : nodeId;
      maybePair();
      render();
    },
    onSelectPrevious(schemeId, nodeId) {
      if (bench.offline) return;
      bench.selection.previousSchemeId = schemeId;
      bench.selection.previousNodeId = nodeId;
      maybePair();
      render();
    },
    onRemovePair(pair: PairKey) {
      if (bench.offline) return;
      const result = bench.removePair(pair);
      if (!result.applied && result.notice) notice(result.notice);
      render();
    },
  });
}

function maybePair(): void {
  const { unifiedNodeId, previousSchemeId, previousNodeId } = bench.selection;
  if (!unifiedNodeId || !previousSchemeId || !previousNodeId) return;
  const result = bench.addPair({
    unifiedNodeId,
    previousSchemeId,
    previousNodeId,
  });
  if (!result.applied && result.notice) notice(result.notice);
  bench.selection = {
    unifiedNodeId: null, previousSchemeId: null, previousNodeId: null,
  };
}

function conflictDialog(current: number): void {
  const overlay = document.createElement("div");
  overlay.className = "dialog-overlay";
  const dialog = document.createElement("div");
  dialog.className = "dialog";
  const text = document.createElement("p");
  text.textContent =
    `Someone else saved this project first (it is now at revision ${current}, `
    + `you loaded revision ${bench.revision}). Reload the latest mapping and `
    + "replay your pending edits on top of it?";
  const replay = document.createElement("button");
  replay.textContent = "Reload and replay my edits";
  const cancel = document.createElement("button");
  cancel.textContent = "Not now";
  dialog.append(text, replay, cancel);
  overlay.appendChild(dialog);
  document.body.appendChild(overlay);
  replay.addEventListener("click", async () => {
    overlay.remove();
    try {
      await bench.reloadAndReplay();
      notice(`replayed onto revision ${bench.revision}; review and save again`);
    } catch {
      notice("reload failed; still offline?");
    }
    render();
  });
  cancel.addEventListener("click", () => overlay.remove());
}

saveButton.addEventListener("click", async () => {
  saveButton.disabled = true;
  let result: CommitResult;
  try {
    result = await bench.commit();
  } finally {
    saveButton.disabled = false;
  }
  switch (result.kind) {
    case "committed":
      notice(`saved as revision ${result.revision}`);
      break;
    case "conflict":
      conflictDialog(result.current);
      break;
    case "rejected":
      notice("server rejected the mapping: "
        + result.violations.map((violation) => violation.code).join(", "));
      break;
    case "offline":
      notice("connection lost; edits kept locally");
      break;
    case "invalid":
      notice(result.notice);
      break;
    case "clean":
      notice("nothing to save");
      break;
  }
  render();
});

discardButton.addEventListener("click", () => {
  bench.discardEdits();
  render();
});

picker.addEventListener("change", async () => {
  try {
    await bench.load(picker.value);
    notice(bench.dirty() ? "restored your unsaved edits" : "");
  } catch {
    notice("failed to load project");
  }
  render();
});

window.addEventListener("resize", render);

async function start(): Promise<void> {
  try {
    const projects = await fetchProjects(API_BASE);
    for (const summary of projects) {
      const option = document.createElement("option");
      option.value = summary.id;
      option.textContent = `${summary.id} (rev ${summary.revision})`;
      picker.appendChild(option);
    }
    const first = projects[0];
    if (first) {
      picker.value = first.id;
      await bench.load(first.id);
    }
  } catch {
    offlineBanner.style.display = "block";
  }
  render();
}

void start();
