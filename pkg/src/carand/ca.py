"""Elementary cellular automata: rule tables, lattices and evolution.

A neighborhood ``(l, c, r)`` is read as the integer ``4*l + 2*c + r`` and the
rule's output for that neighborhood is bit ``4*l + 2*c + r`` of the rule
number, which is Wolfram's numbering (rule 30 reads ``00011110`` from
``111`` down to ``000``).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

CYCLIC = "cyclic"
FIXED_ZERO = "fixed-zero"
BOUNDARIES = (CYCLIC, FIXED_ZERO)


class WolframClass(str, Enum):
    FIXED = "1"
    PERIODIC = "2"
    CHAOTIC = "3"
    COMPLEX = "4"
    UNCLASSIFIED = "unclassified"


# Rules that stay class 3/4 from a single-cell seed.
SIMPLE_SEED_RULES = (30, 45, 75, 79, 86, 89, 101, 110, 124, 135, 137, 149, 193)

# Class-3 rules from disordered initial conditions.
CLASS3_RULES = (
    18, 22, 30, 45, 54, 60, 73, 75, 86, 89, 90, 101, 102, 105, 106, 109, 110,
    120, 122, 124, 126, 129, 135, 137, 146, 147, 149, 150, 151, 153, 161, 165,
    169, 182, 183, 193, 195, 225,
)

# Class-3 subclasses: random deposition, directed percolation, compact
# directed percolation, Domany-Kinzel (symmetric / asymmetric).
SUBCLASSES = {
    30: ("RD",),
    54: ("DKCA-asym",),
    73: ("CDP",),
    110: ("DP", "DKCA-sym"),
}

# The rules whose corpora make up the approve/reject matrix.
REPRESENTATIVE_RULES = (30, 54, 73, 110)


@dataclass(frozen=True)
class RuleTable:
    number: int
    outputs: tuple[int, ...]

    def __post_init__(self):
        if len(self.outputs) != 8 or any(b not in (0, 1) for b in self.outputs):
            raise ValueError("a rule table needs exactly 8 binary outputs")
        if to_number(self.outputs) != self.number:
            raise ValueError(f"outputs do not encode rule {self.number}")

    @property
    def lookup(self) -> np.ndarray:
        return np.array(self.outputs, dtype=np.uint8)

    def wolfram_code(self) -> str:
        """Outputs for neighborhoods 111, 110, ..., 000, e.g. '00011110' for rule 30."""
        return "".join(str(b) for b in reversed(self.outputs))

    def mirror(self) -> RuleTable:
        """The left-right reflected rule (30 <-> 86)."""
        out = [0] * 8
        for i, b in enumerate(self.outputs):
            l, c, r = (i >> 2) & 1, (i >> 1) & 1, i & 1
            out[4 * r + 2 * c + l] = b
        return RuleTable(to_number(out), tuple(out))


def to_number(outputs) -> int:
    return sum(int(b) << i for i, b in enumerate(outputs))


def rule_from_number(number: int) -> RuleTable:
    if not isinstance(number, (int, np.integer)) or not 0 <= number <= 255:
        raise ValueError(f"rule number must be an integer in 0..255, got {number!r}")
    number = int(number)
    return RuleTable(number, tuple((number >> i) & 1 for i in range(8)))


@dataclass(frozen=True)
class RuleMetadata:
    number: int
    wolfram_class: WolframClass
    subclasses: tuple[str, ...] = ()
    simple_seed_complex: bool = False


def rule_metadata(number: int) -> RuleMetadata:
    rule_from_number(number)  # range check
    if number in CLASS3_RULES:
        cls = WolframClass.CHAOTIC
    else:
        cls = WolframClass.UNCLASSIFIED
    return RuleMetadata(
        number=number,
        wolfram_class=cls,
        subclasses=SUBCLASSES.get(number, ()),
        simple_seed_complex=number in SIMPLE_SEED_RULES,
    )


@dataclass(frozen=True, eq=False)
class Lattice:
    """One row of binary cells. The cell array is read-only."""

    cells: np.ndarray
    boundary: str = CYCLIC

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.uint8).reshape(-1)
        if cells.size < 3:
            raise ValueError("lattice width must be at least 3")
        if np.any(cells > 1):
            raise ValueError("lattice cells must be 0 or 1")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}")
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_string(cls, text: str, boundary: str = CYCLIC) -> Lattice:
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"), boundary)

    @classmethod
    def single_seed(cls, width: int, boundary: str = CYCLIC) -> Lattice:
        cells = np.zeros(width, dtype=np.uint8)
        cells[width // 2] = 1
        return cls(cells, boundary)

    @property
    def width(self) -> int:
        return self.cells.size

    def __str__(self):
        return "".join("01"[b] for b in self.cells)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.boundary == other.boundary and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.boundary, self.cells.tobytes()))


def _neighborhoods(rows: np.ndarray, boundary: str) -> np.ndarray:
    """Neighborhood codes 4l+2c+r for every cell along the last axis."""
    if boundary == CYCLIC:
        left = np.roll(rows, 1, axis=-1)
        right = np.roll(rows, -1, axis=-1)
    else:
        left = np.zeros_like(rows)
        right = np.zeros_like(rows)
        left[..., 1:] = rows[..., :-1]
        right[..., :-1] = rows[..., 1:]
    return (left << 2) | (rows << 1) | right


def step_rows(rows: np.ndarray, rule: RuleTable, boundary: str = CYCLIC) -> np.ndarray:
    """Advance a stack of rows (any leading shape) by one synchronous step."""
    return rule.lookup[_neighborhoods(np.asarray(rows, dtype=np.uint8), boundary)]


def evolve_rows(initial: np.ndarray, rule: RuleTable, steps: int,
                boundary: str = CYCLIC) -> np.ndarray:
    """Evolve raw rows; returns an array with a new axis of length steps+1 before the cell axis.

    ``initial`` may be one row ``(w,)`` or a batch ``(k, w)``; the result is
    ``(steps+1, w)`` or ``(k, steps+1, w)``.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    initial = np.asarray(initial, dtype=np.uint8)
    out = np.empty(initial.shape[:-1] + (steps + 1, initial.shape[-1]), dtype=np.uint8)
    out[..., 0, :] = initial
    row = initial
    for t in range(1, steps + 1):
        row = step_rows(row, rule, boundary)
        out[..., t, :] = row
    return out


def step(state: Lattice, rule: RuleTable) -> Lattice:
    return Lattice(step_rows(state.cells, rule, state.boundary), state.boundary)


def evolve(initial: Lattice, rule: RuleTable, steps: int) -> list[Lattice]:
    rows = evolve_rows(initial.cells, rule, steps, initial.boundary)
    return [Lattice(r, initial.boundary) for r in rows]
