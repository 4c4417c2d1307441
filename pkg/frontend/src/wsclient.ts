// Fire-and-forget WebSocket sender with a bounded offline buffer and
// exponential reconnect backoff. While disconnected, up to BUFFER_LIMIT words
// queue up; overflow drops the oldest so that what eventually flushes is the
// freshest input.

export const BUFFER_LIMIT = 60;
const BASE_DELAY_MS = 250;
const MAX_DELAY_MS = 8000;

export type SocketStatus = "connecting" | "open" | "reconnecting" | "closed";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onclose: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export interface SocketHooks {
  onStatus?: (status: SocketStatus) => void;
  onReply?: (text: string) => void; // server error replies, for the panel
  schedule?: (fn: () => void, delayMs: number) => void;
}

export class ReconnectingSender {
  status: SocketStatus = "connecting";
  dropped = 0;
  private socket: SocketLike | null = null;
  private buffer: string[] = [];
  private attempt = 0;
  private stopped = false;
  private readonly schedule: (fn: () => void, delayMs: number) => void;

  constructor(
    private url: string,
    private factory: SocketFactory,
    private hooks: SocketHooks = {},
  ) {
    this.schedule = hooks.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    this.connect();
  }

  private setStatus(status: SocketStatus): void {
    this.status = status;
    this.hooks.onStatus?.(status);
  }

  private connect(): void {
    if (this.stopped) return;
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      this.attempt = 0;
      this.setStatus("open");
      const queued = this.buffer;
      this.buffer = [];
      for (const payload of queued) socket.send(payload);
    };
    socket.onmessage = (event) => {
      if (typeof event.data === "string") this.hooks.onReply?.(event.data);
    };
    socket.onclose = () => {
      if (this.stopped) return;
      this.socket = null;
      this.setStatus("reconnecting");
      const delay = Math.min(BASE_DELAY_MS * 2 ** this.attempt, MAX_DELAY_MS);
      this.attempt++;
      this.schedule(() => this.connect(), delay);
    };
  }

  /** Queue or transmit one payload; capture never blocks on the network. */
  send(payload: string): void {
    if (this.status === "open" && this.socket) {
      this.socket.send(payload);
      return;
    }
    if (this.buffer.length >= BUFFER_LIMIT) {
      this.buffer.shift();
      this.dropped++;
    }
    this.buffer.push(payload);
  }

  get buffered(): number {
    return this.buffer.length;
  }

  close(): void {
    this.stopped = true;
    this.setStatus("closed");
    this.socket?.close();
  }
}
