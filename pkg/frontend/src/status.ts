// Live operator panel: connection badge, scan counters, per-control
// indicators, and the last word that went on the wire.

import { ScanCounters } from "./scanner.js";
import { SocketStatus } from "./wsclient.js";

const DPAD_ARROWS: Record<number, string> = {
  1: "↙", 2: "↓", 3: "↘",
  4: "←", 5: "·", 6: "→",
  7: "↖", 8: "↑", 9: "↗",
};

export class StatusPanel {
  private badge: HTMLElement;
  private counters: HTMLElement;
  private buttons: HTMLElement[] = [];
  private dpad: HTMLElement;
  private axes: HTMLElement;
  private lastSent: HTMLElement;
  private replies: HTMLElement;

  constructor(root: HTMLElement) {
    root.innerHTML = `
      <div class="row">
        <span id="badge" class="badge">connecting</span>
        <span id="counters"></span>
      </div>
      <div class="row">
        <span id="dpad" class="dpad">·</span>
        <span id="buttons"></span>
      </div>
      <div class="row"><span id="axes"></span></div>
      <div class="row">last sent: <code id="last-sent">(nothing yet)</code></div>
      <div class="row" id="replies"></div>
    `;
    this.badge = root.querySelector("#badge")!;
    this.counters = root.querySelector("#counters")!;
    this.dpad = root.querySelector("#dpad")!;
    this.axes = root.querySelector("#axes")!;
    this.lastSent = root.querySelector("#last-sent")!;
    this.replies = root.querySelector("#replies")!;
    const buttonRow = root.querySelector("#buttons")!;
    for (let i = 1; i <= 12; i++) {
      const el = document.createElement("span");
      el.className = "btn";
      el.textContent = String(i);
      buttonRow.appendChild(el);
      this.buttons.push(el as HTMLElement);
    }
  }

  setStatus(status: SocketStatus): void {
    this.badge.textContent = status;
    this.badge.className = `badge badge-${status}`;
  }

  setCounters(c: ScanCounters, buffered: number): void {
    this.counters.textContent =
      `frames ${c.framesScanned} · sent ${c.messagesSent}` +
      (buffered > 0 ? ` · buffered ${buffered}` : "");
  }

  setGamepad(dpad: number, pressed: Set<number>, ang: number[]): void {
    this.dpad.textContent = DPAD_ARROWS[dpad] ?? "?";
    this.buttons.forEach((el, i) => {
      el.classList.toggle("lit", pressed.has(i + 1));
    });
    this.axes.textContent = `ang [${ang.join(", ")}]`;
  }

  setLastSent(json: string | null): void {
    this.lastSent.textContent = json ?? "(nothing yet)";
  }

  showReply(text: string): void {
    this.replies.textContent = `server: ${text}`;
  }
}
