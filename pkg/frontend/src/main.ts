// Browser entry point: polls devices once per display frame (nominally
// 60 fps), runs the change-only scanner, and streams one-word sentences to
// the middleware's /input WebSocket.

import {
  ChangeOnlyScanner,
  GamepadSnapshot,
  KeyboardSnapshot,
  MouseSnapshot,
  gamepadWordFromSnapshot,
  keyboardWordFromSnapshot,
  mouseWordFromSnapshot,
} from "./scanner.js";
import { KEY_NAMES } from "./words.js";
import { StatusPanel } from "./status.js";
import { ReconnectingSender } from "./wsclient.js";

// Shortcuts the browser owns; capturing them would fight the page itself.
export const RESERVED_KEYS = ["f5", "f11", "f12", "tab"];

const MODIFIER_BITS: Record<string, number> = {
  ControlLeft: 0, ShiftLeft: 1, AltLeft: 2, MetaLeft: 3,
  ControlRight: 4, ShiftRight: 5, AltRight: 6, MetaRight: 7,
};

function keyNameFromEvent(event: KeyboardEvent): string | null {
  const key = event.key.toLowerCase();
  const name = key === " " ? "space" :
    key === "arrowup" ? "up" : key === "arrowdown" ? "down" :
    key === "arrowleft" ? "left" : key === "arrowright" ? "right" :
    key === "control" ? "ctrl" : key;
  if (RESERVED_KEYS.includes(name)) return null;
  return KEY_NAMES.includes(name) ? name : null;
}

function run(): void {
  const params = new URLSearchParams(location.search);
  const device = params.get("device") ?? "pad0";
  const port = params.get("port") ?? "8765";
  const host = params.get("host") ?? (location.hostname || "127.0.0.1");
  const url = `ws://${host}:${port}/input?device=${encodeURIComponent(device)}`;

  const panel = new StatusPanel(document.getElementById("panel")!);
  const sender = new ReconnectingSender(url, (u) => new WebSocket(u) as never, {
    onStatus: (status) => panel.setStatus(status),
    onReply: (text) => panel.showReply(text),
  });
  const scanner = new ChangeOnlyScanner((payload) => sender.send(payload));

  const keyboard: KeyboardSnapshot = { keys: new Set(), mods: new Set() };
  const mouse: MouseSnapshot = { buttons: new Set(), dx: 0, dy: 0 };

  window.addEventListener("keydown", (event) => {
    const bit = MODIFIER_BITS[event.code];
    if (bit !== undefined) keyboard.mods.add(bit);
    const name = keyNameFromEvent(event);
    if (name) {
      keyboard.keys.add(name);
      event.preventDefault();
    }
  });
  window.addEventListener("keyup", (event) => {
    const bit = MODIFIER_BITS[event.code];
    if (bit !== undefined) keyboard.mods.delete(bit);
    const name = keyNameFromEvent(event);
    if (name) keyboard.keys.delete(name);
  });
  window.addEventListener("blur", () => {
    keyboard.keys.clear();
    keyboard.mods.clear();
    mouse.buttons.clear();
    scanner.release("keyboard");
    scanner.release("mouse");
  });

  const capture = document.getElementById("capture")!;
  const MOUSE_BUTTON_MAP: Record<number, number> = { 0: 1, 2: 2, 1: 3 };
  capture.addEventListener("contextmenu", (event) => event.preventDefault());
  capture.addEventListener("mousedown", (event) => {
    const mapped = MOUSE_BUTTON_MAP[event.button];
    if (mapped) mouse.buttons.add(mapped);
  });
  window.addEventListener("mouseup", (event) => {
    const mapped = MOUSE_BUTTON_MAP[event.button];
    if (mapped) mouse.buttons.delete(mapped);
  });
  capture.addEventListener("mousemove", (event) => {
    mouse.dx += event.movementX;
    mouse.dy += event.movementY;
  });

  const frame = (): void => {
    const pads = navigator.getGamepads ? navigator.getGamepads() : [];
    const pad = [...pads].find((p) => p !== null);
    if (pad) {
      const snapshot: GamepadSnapshot = {
        buttons: pad.buttons.map((b) => b.pressed),
        axes: [...pad.axes],
      };
      const word = gamepadWordFromSnapshot(snapshot);
      scanner.scanFrame("gamepad", word);
      panel.setGamepad(word.dpad, new Set(word.btn), word.ang);
    }
    scanner.scanFrame("keyboard", keyboardWordFromSnapshot(keyboard));
    scanner.scanFrame("mouse", mouseWordFromSnapshot(mouse));
    mouse.dx = 0;
    mouse.dy = 0;
    panel.setCounters(scanner.counters, sender.buffered);
    panel.setLastSent(scanner.lastSentJson);
    window.requestAnimationFrame(frame);
  };
  window.requestAnimationFrame(frame);
}

run();
