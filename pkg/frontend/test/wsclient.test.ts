import { describe, expect, it } from "vitest";

import {
  BUFFER_LIMIT,
  ReconnectingSender,
  SocketLike,
  SocketStatus,
} from "../src/wsclient.js";

class FakeSocket implements SocketLike {
  sent: string[] = [];
  closed = false;
  onopen: (() => void) | null = null;
  onclose: (() => void) | null = null;
  onmessage: ((event: { data: unknown }) => void) | null = null;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
  }
}

class Harness {
  sockets: FakeSocket[] = [];
  statuses: SocketStatus[] = [];
  replies: string[] = [];
  pending: Array<{ fn: () => void; delayMs: number }> = [];
  sender: ReconnectingSender;

  constructor() {
    this.sender = new ReconnectingSender(
      "ws://test/input",
      () => {
        const socket = new FakeSocket();
        this.sockets.push(socket);
        return socket;
      },
      {
        onStatus: (s) => this.statuses.push(s),
        onReply: (r) => this.replies.push(r),
        schedule: (fn, delayMs) => this.pending.push({ fn, delayMs }),
      },
    );
  }

  get socket(): FakeSocket {
    return this.sockets[this.sockets.length - 1];
  }

  runPending(): void {
    const batch = this.pending.splice(0);
    for (const item of batch) item.fn();
  }
}

describe("reconnecting sender", () => {
  it("sends straight through while open", () => {
    const h = new Harness();
    h.socket.onopen!();
    h.sender.send("payload");
    expect(h.socket.sent).toEqual(["payload"]);
  });

  it("buffers while down and flushes in order on reconnect", () => {
    const h = new Harness();
    h.socket.onopen!();
    h.socket.onclose!();
    h.sender.send("a");
    h.sender.send("b");
    expect(h.sender.buffered).toBe(2);
    h.runPending(); // reconnect attempt creates a second socket
    h.socket.onopen!();
    expect(h.socket.sent).toEqual(["a", "b"]);
    expect(h.sender.buffered).toBe(0);
  });

  it("drops the oldest beyond the buffer limit", () => {
    const h = new Harness();
    h.socket.onclose!();
    for (let i = 0; i < BUFFER_LIMIT + 5; i++) h.sender.send(`w${i}`);
    expect(h.sender.buffered).toBe(BUFFER_LIMIT);
    expect(h.sender.dropped).toBe(5);
    h.runPending();
    h.socket.onopen!();
    expect(h.socket.sent[0]).toBe("w5");
    expect(h.socket.sent).toHaveLength(BUFFER_LIMIT);
  });

  it("reports reconnecting immediately on close", () => {
    const h = new Harness();
    h.socket.onopen!();
    expect(h.sender.status).toBe("open");
    h.socket.onclose!();
    expect(h.sender.status).toBe("reconnecting");
    expect(h.statuses).toEqual(["open", "reconnecting"]);
  });

  it("backs off exponentially", () => {
    const h = new Harness();
    const delays: number[] = [];
    for (let i = 0; i < 7; i++) {
      h.socket.onclose!();
      delays.push(h.pending[h.pending.length - 1].delayMs);
      h.runPending();
    }
    expect(delays).toEqual([250, 500, 1000, 2000, 4000, 8000, 8000]);
  });

  it("resets backoff after a successful open", () => {
    const h = new Harness();
    h.socket.onclose!();
    h.runPending();
    h.socket.onclose!();
    expect(h.pending[h.pending.length - 1].delayMs).toBe(500);
    h.runPending();
    h.socket.onopen!();
    h.socket.onclose!();
    expect(h.pending[h.pending.length - 1].delayMs).toBe(250);
  });

  it("passes server replies to the hook", () => {
    const h = new Harness();
    h.socket.onopen!();
    h.socket.onmessage!({ data: '{"error":"EmptySentence"}' });
    expect(h.replies).toEqual(['{"error":"EmptySentence"}']);
  });

  it("close() stops reconnecting", () => {
    const h = new Harness();
    h.socket.onopen!();
    h.sender.close();
    expect(h.sender.status).toBe("closed");
    expect(h.socket.closed).toBe(true);
    const sockets = h.sockets.length;
    h.runPending();
    expect(h.sockets.length).toBe(sockets);
  });
});
