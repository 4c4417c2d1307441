// Change-only input scanner. Each display frame it converts raw device
// snapshots to control words, compares against the last state it sent, and
// emits a single hold word (dur: -1) only when something changed. A constant
// input over any number of frames therefore costs at most one message.

import {
  ControlWord,
  GamepadWord,
  KeyboardWord,
  MouseWord,
  serializeSentence,
} from "./words.js";

export const AXIS_DEAD_ZONE = 4; // counts; suppresses analog jitter near center

// standard-mapping button indices that represent the direction pad
const DPAD_UP = 12;
const DPAD_DOWN = 13;
const DPAD_LEFT = 14;
const DPAD_RIGHT = 15;

export interface GamepadSnapshot {
  buttons: boolean[]; // standard mapping; 0..11 are face/shoulder buttons
  axes: number[]; // floats in [-1, 1]
}

export interface KeyboardSnapshot {
  keys: Set<string>; // names already normalized to the key table
  mods: Set<number>; // modifier bit positions 0..7
}

export interface MouseSnapshot {
  buttons: Set<number>; // 1 = left, 2 = right, 3 = middle
  dx: number; // movement counts accumulated since the last frame, raw
  dy: number;
}

/** Round half away from zero, then clamp to the axis range. */
export function quantizeAxis(value: number): number {
  const scaled = value * 127;
  const rounded = scaled >= 0 ? Math.floor(scaled + 0.5) : Math.ceil(scaled - 0.5);
  const clamped = Math.max(-127, Math.min(127, rounded));
  return Math.abs(clamped) <= AXIS_DEAD_ZONE ? 0 : clamped;
}

export function dpadFromButtons(buttons: boolean[]): number {
  const up = buttons[DPAD_UP] ?? false;
  const down = buttons[DPAD_DOWN] ?? false;
  const left = buttons[DPAD_LEFT] ?? false;
  const right = buttons[DPAD_RIGHT] ?? false;
  const row = up && !down ? 1 : down && !up ? -1 : 0;
  const col = right && !left ? 1 : left && !right ? -1 : 0;
  return 5 + col + 3 * row;
}

export function gamepadWordFromSnapshot(snap: GamepadSnapshot): GamepadWord {
  const btn: number[] = [];
  for (let i = 0; i < Math.min(12, snap.buttons.length); i++) {
    if (snap.buttons[i]) btn.push(i + 1);
  }
  const ang = [0, 0, 0, 0] as [number, number, number, number];
  for (let i = 0; i < 4; i++) {
    ang[i] = quantizeAxis(snap.axes[i] ?? 0);
  }
  return { dpad: dpadFromButtons(snap.buttons), btn, dur: -1, ang };
}

export function keyboardWordFromSnapshot(snap: KeyboardSnapshot): KeyboardWord {
  return {
    key: [...snap.keys].slice(0, 6), // boot-protocol rollover limit
    mod: [...snap.mods],
    dur: -1,
  };
}

export function mouseWordFromSnapshot(snap: MouseSnapshot): MouseWord {
  const clamp = (v: number) => Math.max(-127, Math.min(127, Math.round(v)));
  return { btn: [...snap.buttons], mov: [clamp(snap.dx), clamp(snap.dy)], dur: -1 };
}

function neutralOf(kind: DeviceKind): ControlWord {
  switch (kind) {
    case "gamepad":
      return { dpad: 5, btn: [], dur: -1, ang: [0, 0, 0, 0] };
    case "mouse":
      return { btn: [], mov: [0, 0], dur: -1 };
    case "keyboard":
      return { key: [], mod: [], dur: -1 };
  }
}

export type DeviceKind = "gamepad" | "mouse" | "keyboard";

export interface ScanCounters {
  framesScanned: number;
  messagesSent: number;
}

/**
 * Per-kind change detector. Feed it one word per scanned frame; it calls
 * `send` with the canonical one-word sentence only when the state asserted
 * differs from the last one sent. Mouse movement is event-like, so a word
 * with nonzero mov always sends, and the remembered state zeroes mov.
 */
export class ChangeOnlyScanner {
  readonly counters: ScanCounters = { framesScanned: 0, messagesSent: 0 };
  private lastSentByKind = new Map<DeviceKind, string>();
  lastSentJson: string | null = null;

  constructor(private send: (payload: string) => void) {}

  scanFrame(kind: DeviceKind, word: ControlWord): boolean {
    this.counters.framesScanned++;
    const movSends = "mov" in word && (word.mov[0] !== 0 || word.mov[1] !== 0);
    const remembered = movSends
      ? serializeSentence({ ...word, mov: [0, 0] } as ControlWord)
      : serializeSentence(word);
    // before anything is sent, the middleware assumes the device is neutral
    const previous =
      this.lastSentByKind.get(kind) ?? serializeSentence(neutralOf(kind));
    if (!movSends && previous === remembered) {
      return false;
    }
    const payload = serializeSentence(word);
    this.lastSentByKind.set(kind, remembered);
    this.lastSentJson = payload;
    this.counters.messagesSent++;
    this.send(payload);
    return true;
  }

  /** Assert neutral for a kind (device unplugged, window blurred). */
  release(kind: DeviceKind): boolean {
    return this.scanFrame(kind, neutralOf(kind));
  }
}
