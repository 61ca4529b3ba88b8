import { describe, expect, it } from "vitest";

import { monitorRows } from "../src/monitors.js";
import type { SnapshotEvent } from "../src/protocol.js";

function snapshotWith(stats: Partial<SnapshotEvent["stats"]> & object): SnapshotEvent {
  return {
    type: "snapshot",
    tick: 12,
    mode: "running",
    agents: [],
    stats: {
      total_citizens: 15,
      active: 15,
      successful_escapes: 0,
      failed_evacuations: 0,
      total_contagions: 0,
      pct_panicked: 0,
      pct_alerted: 0,
      pct_calm: 0,
      duration: null,
      ...stats,
    },
    patches_changed: [],
    reset: false,
  };
}

describe("monitors", () => {
  it("shows eight monitors straight from the snapshot", () => {
    const rows = monitorRows(
      snapshotWith({
        active: 15,
        successful_escapes: 3,
        failed_evacuations: 1,
        total_contagions: 42,
        pct_panicked: 0,
        pct_alerted: 33.333333,
        pct_calm: 66.666667,
      }),
    );
    expect(rows.length).toBe(8);
    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r.value]));
    expect(byLabel["Active citizens"]).toBe("15");
    expect(byLabel["Successful escapes"]).toBe("3");
    expect(byLabel["Failed evacuations"]).toBe("1");
    expect(byLabel["Emotional contagions"]).toBe("42");
    // 10 calm / 5 alerted / 0 panicked of 15 active
    expect(byLabel["% calm"]).toBe("66.7%");
    expect(byLabel["% alerted"]).toBe("33.3%");
    expect(byLabel["% panicked"]).toBe("0.0%");
    expect(byLabel["Tick (s)"]).toBe("12");
  });

  it("renders dashes before the first snapshot", () => {
    const rows = monitorRows(null);
    expect(rows.every((r) => r.value === "-")).toBe(true);
  });
});
