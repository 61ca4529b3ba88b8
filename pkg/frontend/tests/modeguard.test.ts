/** The mode-guard flow with a mocked socket: painting while the run is live
 * gets a BadState error back; the UI surfaces it and the grid is unchanged. */
import { describe, expect, it } from "vitest";

import { StudioClient, type SocketLike } from "../src/client.js";
import { PaintStroke } from "../src/paint.js";
import { StudioState } from "../src/state.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;
  onmessage: ((event: { data: unknown }) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.onclose?.();
  }

  serverSays(event: object): void {
    this.onmessage?.({ data: JSON.stringify(event) });
  }
}

function connected(): { state: StudioState; client: StudioClient; socket: FakeSocket } {
  const socket = new FakeSocket();
  const client = new StudioClient(() => socket);
  const state = new StudioState();
  client.onEvent = (event) => state.apply(event);
  client.onOpen = () => client.send({ type: "create_session" });
  client.connect("ws://example");
  socket.onopen?.();
  socket.serverSays({
    type: "session",
    session_id: "s1",
    width: 61,
    height: 61,
    mode: "editing",
    tick_rate: 20,
  });
  return { state, client, socket };
}

describe("mode guard", () => {
  it("surfaces BadState and leaves the grid untouched", () => {
    const { state, client, socket } = connected();
    // a painted wall acknowledged by the server while editing
    client.send({ type: "set_patch", x: 1, y: 1, kind: "structure" });
    socket.serverSays({
      type: "snapshot",
      tick: null,
      mode: "editing",
      agents: [],
      stats: null,
      patches_changed: [[1, 1, "structure"]],
      reset: false,
    });
    expect(state.grid.kindAt(1, 1)).toBe("structure");

    socket.serverSays({ type: "ok", op: "run" });
    expect(state.mode).toBe("running");
    expect(state.canEdit()).toBe(false);

    // painting during the run: message goes out, server rejects it
    const stroke = new PaintStroke();
    stroke.begin("structure");
    const msg = stroke.visit(5, 5);
    expect(msg).not.toBeNull();
    client.send(msg!);
    socket.serverSays({
      type: "error",
      code: "BadState",
      detail: "set_patch only in editing or paused, not running",
    });

    expect(state.lastError?.code).toBe("BadState");
    expect(state.toasts.length).toBe(1);
    expect(state.grid.kindAt(5, 5)).toBe("empty"); // cell never recolored
  });

  it("recolors only on server acknowledgment", () => {
    const { state, client, socket } = connected();
    client.send({ type: "set_patch", x: 9, y: 9, kind: "exit" });
    // no ack yet: optimistic recoloring is forbidden
    expect(state.grid.kindAt(9, 9)).toBe("empty");
    socket.serverSays({
      type: "snapshot",
      tick: null,
      mode: "editing",
      agents: [],
      stats: null,
      patches_changed: [[9, 9, "exit"]],
      reset: false,
    });
    expect(state.grid.kindAt(9, 9)).toBe("exit");
  });

  it("records outbound traffic for the happy path", () => {
    const { client, socket } = connected();
    client.send({ type: "setup", population: 15, seed: 7 });
    client.send({ type: "step", n: 1 });
    const types = socket.sent.map((raw) => JSON.parse(raw).type);
    expect(types).toEqual(["create_session", "setup", "step"]);
  });
});
