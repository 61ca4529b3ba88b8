/** Studio state: a reducer over server events. Every displayed value comes
 * from the most recent snapshot; nothing is simulated locally. */

import { GridBuffer } from "./grid.js";
import { PlotBuffer } from "./plot.js";
import type {
  ServerEvent,
  SessionMode,
  SnapshotEvent,
  Tool,
} from "./protocol.js";

export interface Toast {
  code: string;
  detail: string;
}

export class StudioState {
  connected = false;
  sessionId: string | null = null;
  mode: SessionMode = "editing";
  tool: Tool = "structure";
  population = 15;
  authorities = 0;
  grid = new GridBuffer();
  plot = new PlotBuffer();
  latest: SnapshotEvent | null = null;
  toasts: Toast[] = [];
  lastError: Toast | null = null;

  apply(event: ServerEvent): void {
    switch (event.type) {
      case "session":
        this.sessionId = event.session_id;
        this.mode = event.mode;
        if (
          event.width !== this.grid.width ||
          event.height !== this.grid.height
        ) {
          this.grid.resize(event.width, event.height);
        }
        break;
      case "snapshot":
        this.mode = event.mode;
        this.grid.apply(event.patches_changed, event.reset);
        this.latest = event;
        if (event.stats !== null && event.tick !== null) {
          this.plot.append({
            tick: event.tick,
            panicked: event.stats.pct_panicked,
            alerted: event.stats.pct_alerted,
            calm: event.stats.pct_calm,
          });
        }
        if (event.tick === 0) {
          // fresh setup restarts the plot from its initial distribution
          this.plot.reset();
          if (event.stats !== null) {
            this.plot.append({
              tick: 0,
              panicked: event.stats.pct_panicked,
              alerted: event.stats.pct_alerted,
              calm: event.stats.pct_calm,
            });
          }
        }
        break;
      case "ended":
        this.mode = "ended";
        this.plot.freeze();
        break;
      case "error":
        this.lastError = { code: event.code, detail: event.detail };
        this.toasts.push(this.lastError);
        if (this.toasts.length > 8) this.toasts.shift();
        break;
      case "ok":
        if (event.op === "run") this.mode = "running";
        if (event.op === "pause") this.mode = "paused";
        break;
    }
  }

  canEdit(): boolean {
    return this.mode === "editing" || this.mode === "paused";
  }
}
