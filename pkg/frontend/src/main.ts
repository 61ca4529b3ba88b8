/** Studio entry point: DOM wiring around StudioState and StudioClient. */

import { drawAgents, drawGrid } from "./canvas.js";
import { StudioClient, type SocketFactory } from "./client.js";
import { monitorRows } from "./monitors.js";
import { PaintStroke, cellAt } from "./paint.js";
import type { Tool } from "./protocol.js";
import { StudioState } from "./state.js";

const CELL_SIZES = [10, 12, 16, 20];

const state = new StudioState();
const stroke = new PaintStroke();
const browserSocket: SocketFactory = (url) =>
  new WebSocket(url) as unknown as ReturnType<SocketFactory>;
const client = new StudioClient(browserSocket);

let cellSizeIndex = 1;
let dirty = true;

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

const canvas = $("world") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;

function cellSize(): number {
  return CELL_SIZES[cellSizeIndex] ?? 12;
}

function resizeCanvas(): void {
  canvas.width = state.grid.width * cellSize();
  canvas.height = state.grid.height * cellSize();
  dirty = true;
}

function render(): void {
  if (dirty) {
    drawGrid(ctx, state.grid, cellSize());
    if (state.latest) {
      drawAgents(ctx, state.latest.agents, cellSize());
    }
    renderMonitors();
    renderPlot();
    renderModeLine();
    dirty = false;
  }
  requestAnimationFrame(render);
}

function renderMonitors(): void {
  const rows = monitorRows(state.latest);
  const parent = $("monitors");
  parent.innerHTML = "";
  for (const row of rows) {
    const div = document.createElement("div");
    div.className = "monitor";
    div.innerHTML = `<span>${row.label}</span><b>${row.value}</b>`;
    parent.appendChild(div);
  }
}

function renderPlot(): void {
  const w = 260;
  const h = 120;
  ($("plot-panicked") as unknown as SVGPolylineElement).setAttribute(
    "points",
    state.plot.polyline("panicked", w, h),
  );
  ($("plot-alerted") as unknown as SVGPolylineElement).setAttribute(
    "points",
    state.plot.polyline("alerted", w, h),
  );
  ($("plot-calm") as unknown as SVGPolylineElement).setAttribute(
    "points",
    state.plot.polyline("calm", w, h),
  );
}

function renderModeLine(): void {
  $("mode-line").textContent = state.sessionId
    ? `session ${state.sessionId.slice(0, 8)} · ${state.mode}`
    : client.isConnected()
      ? "connected · no session"
      : "disconnected";
  $("run-btn").textContent = state.mode === "running" ? "Pause" : "Run";
}

function toast(code: string, detail: string): void {
  const parent = $("toasts");
  const div = document.createElement("div");
  div.className = "toast";
  div.textContent = `${code}: ${detail}`;
  parent.appendChild(div);
  setTimeout(() => div.remove(), 4000);
}

client.onEvent = (event) => {
  state.apply(event);
  if (event.type === "error") {
    toast(event.code, event.detail);
  }
  if (event.type === "session") {
    resizeCanvas();
  }
  dirty = true;
};
client.onOpen = () => {
  state.connected = true;
  client.send({ type: "create_session" });
  dirty = true;
};
client.onClose = () => {
  state.connected = false;
  state.sessionId = null;
  toast("closed", "connection lost; session paused server-side");
  dirty = true;
};

// -- controls -----------------------------------------------------------------

function selectTool(tool: Tool): void {
  state.tool = tool;
  for (const id of ["tool-structure", "tool-exit", "tool-authority_post"]) {
    $(id).classList.toggle("active", id === `tool-${tool}`);
  }
}

$("tool-structure").addEventListener("click", () => selectTool("structure"));
$("tool-exit").addEventListener("click", () => selectTool("exit"));
$("tool-authority_post").addEventListener("click", () =>
  selectTool("authority_post"),
);

$("setup-btn").addEventListener("click", () => {
  client.send({
    type: "setup",
    population: Number(($("population") as HTMLInputElement).value),
    authorities: Number(($("authorities") as HTMLInputElement).value),
    seed: Number(($("seed") as HTMLInputElement).value),
    deadline: Number(($("deadline") as HTMLInputElement).value),
  });
});

$("run-btn").addEventListener("click", () => {
  client.send({ type: state.mode === "running" ? "pause" : "run" });
});

$("step-btn").addEventListener("click", () => {
  client.send({ type: "step", n: Number(($("step-n") as HTMLInputElement).value) || 1 });
});

$("clear-btn").addEventListener("click", () => {
  const scope = ($("clear-scope") as HTMLSelectElement).value as "turtles" | "all";
  client.send({ type: "clear", scope });
});

$("preset").addEventListener("change", () => {
  const name = ($("preset") as HTMLSelectElement).value;
  if (name) client.send({ type: "load_preset", name });
});

$("zoom-in").addEventListener("click", () => {
  cellSizeIndex = Math.min(CELL_SIZES.length - 1, cellSizeIndex + 1);
  resizeCanvas();
});
$("zoom-out").addEventListener("click", () => {
  cellSizeIndex = Math.max(0, cellSizeIndex - 1);
  resizeCanvas();
});

const urlInput = $("server-url") as HTMLInputElement;
urlInput.addEventListener("keydown", (event) => {
  if (event.key === "Enter") {
    client.connect(urlInput.value);
  }
});

for (const id of ["population", "authorities"]) {
  $(id).addEventListener("input", () => {
    $(`${id}-value`).textContent = ($(id) as HTMLInputElement).value;
  });
}

// -- painting -----------------------------------------------------------------

function paintAt(event: PointerEvent): void {
  const rect = canvas.getBoundingClientRect();
  const cell = cellAt(
    event.clientX - rect.left,
    event.clientY - rect.top,
    cellSize(),
    state.grid.width,
    state.grid.height,
  );
  if (!cell) return;
  const msg = stroke.visit(cell.x, cell.y);
  if (msg) client.send(msg);
}

canvas.addEventListener("pointerdown", (event) => {
  canvas.setPointerCapture(event.pointerId);
  // shift or secondary button erases; tool buttons paint
  const erase = event.shiftKey || event.button === 2;
  stroke.begin(erase ? "erase" : state.tool);
  paintAt(event);
});
canvas.addEventListener("pointermove", (event) => {
  if (stroke.isActive()) paintAt(event);
});
canvas.addEventListener("pointerup", () => stroke.end());
canvas.addEventListener("pointercancel", () => stroke.end());
canvas.addEventListener("contextmenu", (event) => event.preventDefault());

resizeCanvas();
selectTool("structure");
client.connect(urlInput.value);
requestAnimationFrame(render);
