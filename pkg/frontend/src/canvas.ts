/** Canvas rendering of the grid and agents. Pure draw calls, no state. */

import type { GridBuffer } from "./grid.js";
import type { AgentPayload, PatchKindName } from "./protocol.js";

export const PATCH_COLORS: Record<PatchKindName, string> = {
  empty: "#111418",
  structure: "#8a8f98",
  exit: "#d63ad6",
  authority_post: "#e8933a",
  hazard: "#c0392b",
};

const AGENT_COLORS: Record<string, string> = {
  green: "#3ddc84",
  yellow: "#f5d445",
  red: "#ff5a52",
  orange: "#ff9f1a",
};

export function drawGrid(
  ctx: CanvasRenderingContext2D,
  grid: GridBuffer,
  cellSize: number,
): void {
  ctx.fillStyle = PATCH_COLORS.empty;
  ctx.fillRect(0, 0, grid.width * cellSize, grid.height * cellSize);
  for (let y = 0; y < grid.height; y++) {
    for (let x = 0; x < grid.width; x++) {
      const kind = grid.kindAt(x, y);
      if (kind === "empty") continue;
      ctx.fillStyle = PATCH_COLORS[kind];
      ctx.fillRect(x * cellSize, y * cellSize, cellSize, cellSize);
    }
  }
  ctx.strokeStyle = "rgba(255,255,255,0.06)";
  ctx.lineWidth = 1;
  for (let x = 0; x <= grid.width; x++) {
    ctx.beginPath();
    ctx.moveTo(x * cellSize + 0.5, 0);
    ctx.lineTo(x * cellSize + 0.5, grid.height * cellSize);
    ctx.stroke();
  }
  for (let y = 0; y <= grid.height; y++) {
    ctx.beginPath();
    ctx.moveTo(0, y * cellSize + 0.5);
    ctx.lineTo(grid.width * cellSize, y * cellSize + 0.5);
    ctx.stroke();
  }
}

export function drawAgents(
  ctx: CanvasRenderingContext2D,
  agents: AgentPayload[],
  cellSize: number,
): void {
  const radius = Math.max(2.5, cellSize * 0.36);
  for (const agent of agents) {
    const cx = (agent.x + 0.5) * cellSize;
    const cy = (agent.y + 0.5) * cellSize;
    ctx.beginPath();
    if (agent.kind === "authority") {
      // authorities draw as diamonds
      ctx.moveTo(cx, cy - radius);
      ctx.lineTo(cx + radius, cy);
      ctx.lineTo(cx, cy + radius);
      ctx.lineTo(cx - radius, cy);
      ctx.closePath();
    } else {
      ctx.arc(cx, cy, radius, 0, Math.PI * 2);
    }
    ctx.fillStyle = AGENT_COLORS[agent.color] ?? agent.color;
    ctx.globalAlpha = agent.status === "failed" ? 0.45 : 1.0;
    ctx.fill();
    ctx.globalAlpha = 1.0;
    if (agent.guided) {
      // guided citizens carry a distinct outline ring
      ctx.strokeStyle = "#7fd4ff";
      ctx.lineWidth = Math.max(1.5, cellSize * 0.12);
      ctx.stroke();
    }
  }
}
