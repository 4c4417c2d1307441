import { describe, expect, it } from "vitest";

import { KEY_NAMES, serializeSentence, serializeWord, validateWord } from "../src/words.js";

describe("validation", () => {
  it("accepts the canonical examples", () => {
    expect(validateWord({ dpad: 5, btn: [1], dur: 2, ang: [0, 0, 0, 0] })).toBeNull();
    expect(validateWord({ btn: [], mov: [0, 0], dur: 1 })).toBeNull();
    expect(validateWord({ key: ["a"], mod: [0], dur: -1 })).toBeNull();
  });

  it("rejects out-of-range and malformed words", () => {
    expect(validateWord({ dpad: 0 })).toBe("bad dpad");
    expect(validateWord({ dpad: 5, btn: [17] })).toBe("bad btn");
    expect(validateWord({ dpad: 5, ang: [0, 0, 0] })).toBe("bad ang");
    expect(validateWord({ dpad: 5, dur: 0 })).toBe("bad dur");
    expect(validateWord({ mov: [0] })).toBe("bad mov");
    expect(validateWord({ key: ["nosuch"] })).toBe("bad key");
    expect(validateWord({ key: ["a", "a"] })).toBe("bad key");
    expect(validateWord({})).toBe("matches 0 word kinds");
    expect(validateWord({ dpad: 5, mov: [0, 0] })).toBe("matches 2 word kinds");
    expect(validateWord([1, 2])).toBe("not an object");
  });
});

describe("canonical serialization", () => {
  it("matches the server's field order and compact form", () => {
    expect(serializeWord({ dpad: 5, btn: [1], dur: 2, ang: [0, 0, 0, 0] }))
      .toBe('{"dpad":5,"btn":[1],"dur":2,"ang":[0,0,0,0]}');
    expect(serializeWord({ btn: [2, 1], mov: [-3, 4], dur: -1 }))
      .toBe('{"btn":[1,2],"mov":[-3,4],"dur":-1}');
    expect(serializeWord({ key: ["space", "a"], mod: [1, 0], dur: 1 }))
      .toBe('{"key":["a","space"],"mod":[0,1],"dur":1}');
  });

  it("wraps one word per sentence", () => {
    expect(serializeSentence({ dpad: 5, btn: [], dur: -1, ang: [0, 0, 0, 0] }))
      .toBe('[{"dpad":5,"btn":[],"dur":-1,"ang":[0,0,0,0]}]');
  });

  it("serialized output stays valid", () => {
    const words = [
      { dpad: 9, btn: [16, 1], dur: 32767, ang: [-127, 127, 0, 1] as [number, number, number, number] },
      { btn: [3], mov: [127, -127] as [number, number], dur: 1 },
      { key: ["f1", "alt"], mod: [7], dur: -1 },
    ];
    for (const word of words) {
      expect(validateWord(JSON.parse(serializeWord(word)))).toBeNull();
    }
  });

  it("key table has 60 entries in wire order", () => {
    expect(KEY_NAMES).toHaveLength(60);
    expect(KEY_NAMES[0]).toBe("a");
    expect(KEY_NAMES[25]).toBe("z");
    expect(KEY_NAMES[26]).toBe("0");
    expect(KEY_NAMES[36]).toBe("f1");
    expect(KEY_NAMES[59]).toBe("alt");
  });
});
