// Control-word wire contract: the JSON shapes the middleware's /input
// WebSocket accepts. Serialization here mirrors the server's canonical form
// (fixed key order, compact, sets ascending) so payloads are byte-stable.

export interface GamepadWord {
  dpad: number; // numeric-keypad direction code, 5 = neutral
  btn: number[]; // pressed buttons, 1..16
  dur: number; // frames at 60 fps, or -1 = hold until superseded
  ang: [number, number, number, number]; // axes, -127..127
}

export interface MouseWord {
  btn: number[]; // 1 = left, 2 = right, 3 = middle
  mov: [number, number]; // relative counts, -127..127
  dur: number;
}

export interface KeyboardWord {
  key: string[]; // names from KEY_NAMES
  mod: number[]; // modifier bit positions 0..7
  dur: number;
}

export type ControlWord = GamepadWord | MouseWord | KeyboardWord;

export const KEY_NAMES: string[] = (() => {
  const names: string[] = [];
  for (let c = 97; c <= 122; c++) names.push(String.fromCharCode(c));
  for (let d = 0; d <= 9; d++) names.push(String(d));
  for (let f = 1; f <= 12; f++) names.push(`f${f}`);
  names.push(
    "enter", "space", "tab", "escape", "backspace",
    "up", "down", "left", "right", "shift", "ctrl", "alt",
  );
  return names;
})();

const KEY_CODES = new Map(KEY_NAMES.map((name, i) => [name, i + 1]));

function isInt(v: unknown): v is number {
  return typeof v === "number" && Number.isInteger(v);
}

function validDur(dur: unknown): boolean {
  return isInt(dur) && (dur === -1 || (dur >= 1 && dur <= 32767));
}

function intSetOk(values: unknown, lo: number, hi: number): boolean {
  return (
    Array.isArray(values) &&
    values.every((v) => isInt(v) && v >= lo && v <= hi) &&
    new Set(values).size === values.length
  );
}

function axesOk(values: unknown, count: number): boolean {
  return (
    Array.isArray(values) &&
    values.length === count &&
    values.every((v) => isInt(v) && v >= -127 && v <= 127)
  );
}

/** Returns null when the object is a valid word, else a short reason. */
export function validateWord(obj: unknown): string | null {
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    return "not an object";
  }
  const word = obj as Record<string, unknown>;
  const discriminators = ["dpad", "mov", "key"].filter((k) => k in word);
  if (discriminators.length !== 1) {
    return `matches ${discriminators.length} word kinds`;
  }
  if (!validDur(word.dur ?? 1)) return "bad dur";
  switch (discriminators[0]) {
    case "dpad":
      if (!isInt(word.dpad) || word.dpad < 1 || word.dpad > 9) return "bad dpad";
      if (!intSetOk(word.btn ?? [], 1, 16)) return "bad btn";
      if (!axesOk(word.ang ?? [0, 0, 0, 0], 4)) return "bad ang";
      return null;
    case "mov":
      if (!axesOk(word.mov, 2)) return "bad mov";
      if (!intSetOk(word.btn ?? [], 1, 3)) return "bad btn";
      return null;
    default: {
      const keys = word.key;
      if (!Array.isArray(keys) || keys.length > 6) return "bad key";
      if (!keys.every((k) => typeof k === "string" && KEY_CODES.has(k))) return "bad key";
      if (new Set(keys).size !== keys.length) return "bad key";
      if (!intSetOk(word.mod ?? [], 0, 7)) return "bad mod";
      return null;
    }
  }
}

function ascending(values: Iterable<number>): number[] {
  return [...values].sort((a, b) => a - b);
}

/** Canonical compact JSON, field order matching the server's serializer. */
export function serializeWord(word: ControlWord): string {
  if ("dpad" in word) {
    return (
      `{"dpad":${word.dpad},"btn":[${ascending(word.btn).join(",")}],` +
      `"dur":${word.dur},"ang":[${word.ang.join(",")}]}`
    );
  }
  if ("mov" in word) {
    return (
      `{"btn":[${ascending(word.btn).join(",")}],` +
      `"mov":[${word.mov.join(",")}],"dur":${word.dur}}`
    );
  }
  const keys = [...word.key].sort((a, b) => KEY_CODES.get(a)! - KEY_CODES.get(b)!);
  return (
    `{"key":[${keys.map((k) => `"${k}"`).join(",")}],` +
    `"mod":[${ascending(word.mod).join(",")}],"dur":${word.dur}}`
  );
}

/** A one-word sentence: the unit this scanner puts on the wire. */
export function serializeSentence(word: ControlWord): string {
  return `[${serializeWord(word)}]`;
}
