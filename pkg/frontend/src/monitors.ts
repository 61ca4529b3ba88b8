/** The eight monitors, formatted straight from snapshot stats. */

import type { SnapshotEvent } from "./protocol.js";

export interface MonitorRow {
  label: string;
  value: string;
}

function pct(value: number): string {
  return `${value.toFixed(1)}%`;
}

export function monitorRows(snapshot: SnapshotEvent | null): MonitorRow[] {
  const stats = snapshot?.stats ?? null;
  const tick = snapshot?.tick ?? null;
  return [
    { label: "Active citizens", value: stats ? String(stats.active) : "-" },
    {
      label: "Successful escapes",
      value: stats ? String(stats.successful_escapes) : "-",
    },
    {
      label: "Failed evacuations",
      value: stats ? String(stats.failed_evacuations) : "-",
    },
    {
      label: "Emotional contagions",
      value: stats ? String(stats.total_contagions) : "-",
    },
    { label: "% panicked", value: stats ? pct(stats.pct_panicked) : "-" },
    { label: "% alerted", value: stats ? pct(stats.pct_alerted) : "-" },
    { label: "% calm", value: stats ? pct(stats.pct_calm) : "-" },
    { label: "Tick (s)", value: tick === null ? "-" : String(tick) },
  ];
}
