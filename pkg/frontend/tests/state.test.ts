import { describe, expect, it } from "vitest";

import type { SnapshotEvent, StatsPayload } from "../src/protocol.js";
import { StudioState } from "../src/state.js";

function stats(overrides: Partial<StatsPayload> = {}): StatsPayload {
  return {
    total_citizens: 15,
    active: 15,
    successful_escapes: 0,
    failed_evacuations: 0,
    total_contagions: 0,
    pct_panicked: 20,
    pct_alerted: 50,
    pct_calm: 30,
    duration: null,
    ...overrides,
  };
}

function snapshot(overrides: Partial<SnapshotEvent> = {}): SnapshotEvent {
  return {
    type: "snapshot",
    tick: 1,
    mode: "paused",
    agents: [],
    stats: stats(),
    patches_changed: [],
    reset: false,
    ...overrides,
  };
}

describe("studio state reducer", () => {
  it("adopts session geometry", () => {
    const state = new StudioState();
    state.apply({
      type: "session",
      session_id: "abc",
      width: 31,
      height: 21,
      mode: "editing",
      tick_rate: 20,
    });
    expect(state.sessionId).toBe("abc");
    expect(state.grid.width).toBe(31);
    expect(state.grid.height).toBe(21);
  });

  it("applies patch deltas and resets", () => {
    const state = new StudioState();
    state.apply(snapshot({ patches_changed: [[2, 3, "exit"]] }));
    expect(state.grid.kindAt(2, 3)).toBe("exit");
    state.apply(snapshot({ patches_changed: [[1, 1, "structure"]], reset: true }));
    expect(state.grid.kindAt(1, 1)).toBe("structure");
    expect(state.grid.kindAt(2, 3)).toBe("empty"); // reset repainted
  });

  it("renders only snapshot data: latest wins", () => {
    const state = new StudioState();
    state.apply(snapshot({ tick: 3, stats: stats({ active: 10 }) }));
    state.apply(snapshot({ tick: 4, stats: stats({ active: 9 }) }));
    expect(state.latest?.stats?.active).toBe(9);
    expect(state.latest?.tick).toBe(4);
  });

  it("tracks mode through ok acks and ended", () => {
    const state = new StudioState();
    state.apply(snapshot({ tick: 0 }));
    state.apply({ type: "ok", op: "run" });
    expect(state.mode).toBe("running");
    state.apply({ type: "ok", op: "pause" });
    expect(state.mode).toBe("paused");
    state.apply({ type: "ended", tick: 30, stats: stats({ duration: 30 }) });
    expect(state.mode).toBe("ended");
    expect(state.canEdit()).toBe(false);
  });

  it("plot grows per tick and freezes on ended", () => {
    const state = new StudioState();
    state.apply(snapshot({ tick: 0 }));
    state.apply(snapshot({ tick: 1 }));
    state.apply(snapshot({ tick: 2 }));
    expect(state.plot.points.map((p) => p.tick)).toEqual([0, 1, 2]);
    state.apply({ type: "ended", tick: 2, stats: stats() });
    state.apply(snapshot({ tick: 3 }));
    expect(state.plot.points.length).toBe(3); // frozen
  });

  it("a fresh setup restarts the plot", () => {
    const state = new StudioState();
    state.apply(snapshot({ tick: 5 }));
    state.apply(snapshot({ tick: 0, stats: stats({ pct_calm: 31 }) }));
    expect(state.plot.points.length).toBe(1);
    expect(state.plot.points[0]?.tick).toBe(0);
    expect(state.plot.frozen).toBe(false);
  });

  it("collects error toasts", () => {
    const state = new StudioState();
    state.apply({ type: "error", code: "NoExit", detail: "world needs an exit" });
    expect(state.lastError?.code).toBe("NoExit");
    expect(state.toasts.length).toBe(1);
  });
});
