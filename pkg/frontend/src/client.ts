/** Socket wrapper: sends typed messages, feeds parsed events to a handler.
 * The socket is injectable so tests can drive the client without a network. */

import {
  encodeMessage,
  parseEvent,
  type ClientMessage,
  type ServerEvent,
} from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export class StudioClient {
  private socket: SocketLike | null = null;
  private readonly factory: SocketFactory;
  readonly sent: ClientMessage[] = [];
  onEvent: (event: ServerEvent) => void = () => {};
  onOpen: () => void = () => {};
  onClose: () => void = () => {};

  constructor(factory: SocketFactory) {
    this.factory = factory;
  }

  connect(url: string): void {
    this.disconnect();
    const socket = this.factory(url);
    this.socket = socket;
    socket.onopen = () => this.onOpen();
    socket.onclose = () => {
      if (this.socket === socket) this.socket = null;
      this.onClose();
    };
    socket.onmessage = (event) => {
      this.onEvent(parseEvent(String(event.data)));
    };
  }

  disconnect(): void {
    if (this.socket) {
      const socket = this.socket;
      this.socket = null;
      socket.close();
    }
  }

  isConnected(): boolean {
    return this.socket !== null;
  }

  send(msg: ClientMessage): boolean {
    if (!this.socket) return false;
    this.socket.send(encodeMessage(msg));
    this.sent.push(msg);
    if (this.sent.length > 200) this.sent.shift();
    return true;
  }
}
