/** Rolling history of the three state percentages for the live plot. */

export interface PlotPoint {
  tick: number;
  panicked: number;
  alerted: number;
  calm: number;
}

export class PlotBuffer {
  readonly capacity: number;
  points: PlotPoint[] = [];
  frozen = false;

  constructor(capacity = 2000) {
    this.capacity = capacity;
  }

  append(point: PlotPoint): void {
    if (this.frozen) return;
    const last = this.points[this.points.length - 1];
    if (last && point.tick <= last.tick) {
      // resyncs can replay the current tick; keep the newest value
      this.points.pop();
    }
    this.points.push(point);
    if (this.points.length > this.capacity) {
      this.points.shift();
    }
  }

  freeze(): void {
    this.frozen = true;
  }

  reset(): void {
    this.points = [];
    this.frozen = false;
  }

  /** Scale one series into an SVG-style polyline string for a w x h box. */
  polyline(series: "panicked" | "alerted" | "calm", w: number, h: number): string {
    const n = this.points.length;
    if (n === 0) return "";
    const first = this.points[0]!.tick;
    const last = this.points[n - 1]!.tick;
    const span = Math.max(1, last - first);
    return this.points
      .map((p) => {
        const x = ((p.tick - first) / span) * w;
        const y = h - (p[series] / 100) * h;
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
  }
}
