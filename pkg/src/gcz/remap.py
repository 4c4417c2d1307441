"""Pure word-level remapping of buttons, direction pad, and analog axes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SchemaError
from .words import AXIS_MAX, AXIS_MIN, DPAD_NEUTRAL, GamepadWord

PASS = "pass"
DROP = "drop"


@dataclass(frozen=True)
class ButtonMapping:
    """Partial button renumbering with an explicit unmapped policy.

    With policy ``pass`` the map must be injective and every target must be
    in the domain, so no two pressed buttons can ever land on one output.
    """

    table: dict[int, int]
    policy: str = PASS

    def __post_init__(self):
        if self.policy not in (PASS, DROP):
            raise SchemaError(f"policy must be 'pass' or 'drop', got {self.policy!r}")
        for src, dst in self.table.items():
            if not (1 <= src <= 16 and 1 <= dst <= 16):
                raise SchemaError(f"button map entry {src}->{dst} outside 1..16")
        if self.policy == PASS:
            targets = list(self.table.values())
            if len(set(targets)) != len(targets):
                raise SchemaError("pass-policy button map must be injective")
            stray = set(targets) - set(self.table)
            if stray:
                raise SchemaError(
                    f"pass-policy targets {sorted(stray)} collide with passed-through buttons"
                )

    def apply(self, btn: frozenset[int]) -> frozenset[int]:
        out = {self.table[b] for b in btn if b in self.table}
        if self.policy == PASS:
            out |= {b for b in btn if b not in self.table}
        return frozenset(out)

    def inverse(self) -> "ButtonMapping":
        return ButtonMapping({dst: src for src, dst in self.table.items()}, self.policy)


@dataclass(frozen=True)
class DpadMapping:
    """Total direction remap on keypad codes 1..9; neutral (5) stays fixed."""

    table: dict[int, int]

    def __post_init__(self):
        full = {d: d for d in range(1, 10)}
        for src, dst in self.table.items():
            if not (1 <= src <= 9 and 1 <= dst <= 9):
                raise SchemaError(f"dpad map entry {src}->{dst} outside 1..9")
            full[src] = dst
        if full[DPAD_NEUTRAL] != DPAD_NEUTRAL:
            raise SchemaError("dpad map must fix neutral (5 -> 5)")
        object.__setattr__(self, "table", full)

    def apply(self, dpad: int) -> int:
        return self.table[dpad]

    def inverse(self) -> "DpadMapping":
        return DpadMapping({dst: src for src, dst in self.table.items()})


# keypad left<->right mirror, handy for facing-direction flips
MIRROR_HORIZONTAL = {1: 3, 3: 1, 4: 6, 6: 4, 7: 9, 9: 7}


def _clamp(v: int) -> int:
    return max(AXIS_MIN, min(AXIS_MAX, v))


def _round_half_away(x: Fraction) -> int:
    if x >= 0:
        return int((2 * x + 1) // 2)
    return -int((2 * -x + 1) // 2)


def as_scale(value) -> Fraction:
    """Accept int, float, Fraction, or 'n/d' strings from config."""
    if isinstance(value, bool) or not isinstance(value, (int, float, str, Fraction)):
        raise SchemaError(f"scale {value!r} is not a number or fraction string")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"scale {value!r} is not a number or fraction string") from exc


@dataclass(frozen=True)
class AngTransform:
    """Per-axis affine transform with clamping, after an axis permutation.

    Output axis i reads input axis perm[i] through that axis's scale/offset;
    rounding is half-away-from-zero, results clamp to the axis range.
    """

    scale: tuple[Fraction, Fraction, Fraction, Fraction] = (Fraction(1),) * 4
    offset: tuple[int, int, int, int] = (0, 0, 0, 0)
    perm: tuple[int, int, int, int] = (0, 1, 2, 3)

    def __post_init__(self):
        object.__setattr__(self, "scale", tuple(as_scale(s) for s in self.scale))
        object.__setattr__(self, "offset", tuple(self.offset))
        object.__setattr__(self, "perm", tuple(self.perm))
        if len(self.scale) != 4 or len(self.offset) != 4:
            raise SchemaError("scale and offset need exactly 4 entries")
        if sorted(self.perm) != [0, 1, 2, 3]:
            raise SchemaError(f"perm {list(self.perm)} is not a permutation of 0..3")
        if not all(isinstance(o, int) and not isinstance(o, bool) for o in self.offset):
            raise SchemaError("offsets must be integers")

    def apply(self, ang: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
        out = []
        for i in range(4):
            j = self.perm[i]
            out.append(_clamp(_round_half_away(self.scale[j] * ang[j] + self.offset[j])))
        return tuple(out)


def remap_button(word: GamepadWord, mapping: ButtonMapping) -> GamepadWord:
    return GamepadWord(dpad=word.dpad, btn=mapping.apply(word.btn), ang=word.ang, dur=word.dur)


def remap_dpad(word: GamepadWord, mapping: DpadMapping) -> GamepadWord:
    return GamepadWord(dpad=mapping.apply(word.dpad), btn=word.btn, ang=word.ang, dur=word.dur)


def remap_ang(word: GamepadWord, transform: AngTransform) -> GamepadWord:
    return GamepadWord(dpad=word.dpad, btn=word.btn, ang=transform.apply(word.ang), dur=word.dur)
