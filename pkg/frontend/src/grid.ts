/** Client-side mirror of the drawn world. Only server events mutate it:
 * the studio computes no world state of its own. */

import type { PatchChange, PatchKindName } from "./protocol.js";

export class GridBuffer {
  width: number;
  height: number;
  private cells: PatchKindName[];

  constructor(width = 61, height = 61) {
    this.width = width;
    this.height = height;
    this.cells = new Array(width * height).fill("empty");
  }

  kindAt(x: number, y: number): PatchKindName {
    const kind = this.cells[y * this.width + x];
    if (kind === undefined) {
      throw new RangeError(`(${x}, ${y}) outside ${this.width}x${this.height}`);
    }
    return kind;
  }

  resize(width: number, height: number): void {
    this.width = width;
    this.height = height;
    this.cells = new Array(width * height).fill("empty");
  }

  /** Apply a snapshot's patch delta; reset repaints from a blank grid. */
  apply(changes: PatchChange[], reset: boolean): void {
    if (reset) {
      this.cells.fill("empty");
    }
    for (const [x, y, kind] of changes) {
      if (x >= 0 && x < this.width && y >= 0 && y < this.height) {
        this.cells[y * this.width + x] = kind;
      }
    }
  }

  nonEmptyCount(): number {
    let count = 0;
    for (const kind of this.cells) {
      if (kind !== "empty") count += 1;
    }
    return count;
  }
}
