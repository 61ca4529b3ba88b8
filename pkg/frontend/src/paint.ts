/** Drag-to-paint: one set_patch per newly entered cell while the pointer is
 * held. Cells recolor only when the server's snapshot ack comes back. */

import { toolKind, type ClientMessage, type Tool } from "./protocol.js";

export class PaintStroke {
  private visited = new Set<string>();
  private active = false;
  private tool: Tool = "structure";

  begin(tool: Tool): void {
    this.active = true;
    this.tool = tool;
    this.visited.clear();
  }

  /** Returns the message to send for this cell, or null if already painted
   * in this stroke (idempotent per cell per stroke). */
  visit(x: number, y: number): ClientMessage | null {
    if (!this.active) return null;
    const key = `${x},${y}`;
    if (this.visited.has(key)) return null;
    this.visited.add(key);
    return { type: "set_patch", x, y, kind: toolKind(this.tool) };
  }

  end(): void {
    this.active = false;
    this.visited.clear();
  }

  isActive(): boolean {
    return this.active;
  }
}

/** Map a pointer position inside the canvas to a patch coordinate. */
export function cellAt(
  pixelX: number,
  pixelY: number,
  cellSize: number,
  width: number,
  height: number,
): { x: number; y: number } | null {
  const x = Math.floor(pixelX / cellSize);
  const y = Math.floor(pixelY / cellSize);
  if (x < 0 || y < 0 || x >= width || y >= height) return null;
  return { x, y };
}
