"""Auxiliary-operator sets for the built-in elementary tasks and a small
text grammar (``bitflip:3``, ``shor:3x3@2``, ...) for naming them."""

from __future__ import annotations

import re
from dataclasses import dataclass

from forge.aux_ops import AuxOps
from forge.concat import build_next_level, concatenate_levels, staircase
from forge.pauli import PauliString

KINDS = ("bitflip", "phaseflip", "shor", "ring5", "dejmps", "dfs", "wire")


def _single(m: int, q: int, letter: str) -> PauliString:
    return PauliString.single(m, q, letter)


def _all(m: int, letter: str) -> PauliString:
    return PauliString.from_str(letter * m)


def bitflip(m: int) -> AuxOps:
    """Repetition code against bit flips: |0> -> |0...0>, |1> -> |1...1>."""
    if m < 2:
        raise ValueError("repetition codes need m >= 2")
    return AuxOps(tuple(_single(m, q, "Z") for q in range(m)), (_all(m, "X"),), "input")


def phaseflip(m: int) -> AuxOps:
    """Repetition code in the X basis: |0> -> |+...+>, |1> -> |-...->."""
    if m < 2:
        raise ValueError("repetition codes need m >= 2")
    return AuxOps(tuple(_single(m, q, "X") for q in range(m)), (_all(m, "Z"),), "input")


def generalized_shor(m1: int, m2: int) -> AuxOps:
    """Phase-flip code on m1 blocks, each block a bit-flip code of size m2.

    K: X on a whole block. F: one Z per block, starting from the first member
    of every block and moving one block member at a time (last block first).
    """
    if m1 < 2 or m2 < 2:
        raise ValueError("generalized Shor code needs m1, m2 >= 2")
    n = m1 * m2
    block = "X" * m2
    ks = tuple(PauliString.from_str("I" * (m2 * j) + block + "I" * (m2 * (m1 - 1 - j))) for j in range(m1))

    def f_op(members):
        return PauliString(0, sum(1 << (m2 * k + i) for k, i in enumerate(members)), n)

    fs = [f_op([0] * m1)]
    for k in reversed(range(m1)):
        for i in range(1, m2):
            members = [0] * m1
            members[k] = i
            fs.append(f_op(members))
    return AuxOps(ks, tuple(fs), "input")


def shor_by_concatenation(m1: int, m2: int) -> AuxOps:
    return build_next_level(phaseflip(m1), bitflip(m2))


_RING = ["XZIIZ", "ZXZII", "IZXZI", "IIZXZ", "ZIIZX"]


def cluster_ring() -> AuxOps:
    """Five-qubit ring code; the input is joined to every ring vertex."""
    return AuxOps.from_strings(_RING, ["ZZZZZ"], "input")


def dejmps(side: str = "alice") -> AuxOps:
    """One DEJMPS purification round at one party (two inputs, one output)."""
    if side == "alice":
        return AuxOps.from_strings(["-YI", "-IY"], ["-ZZ"], "output")
    if side == "bob":
        # derived from the dense resource state; the G_0 branch changes sign
        return AuxOps.from_strings(["+YI", "+IY"], ["-ZZ"], "output")
    raise ValueError(f"unknown party {side!r}")


def dfs() -> AuxOps:
    """Decoherence-free-subspace encoder |0> -> |01>, |1> -> |10>."""
    return AuxOps.from_strings(["ZI", "-IZ"], ["XX"], "input")


def wire() -> AuxOps:
    """Identity channel; its resource is a Bell pair."""
    return AuxOps.from_strings(["Z"], ["X"], "input")


# ---- text grammar --------------------------------------------------------

_SPEC_RE = re.compile(r"^(?P<kind>[a-z]+[0-9]*)(?::(?P<arg>[A-Za-z0-9x]+))?(?:@(?P<levels>\d+))?$")


@dataclass(frozen=True)
class CodeSpec:
    kind: str
    params: tuple = ()
    levels: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.levels < 0:
            raise ValueError("levels must be nonnegative")

    @classmethod
    def parse(cls, text: str) -> CodeSpec:
        m = _SPEC_RE.match(text.strip())
        if not m:
            raise ValueError(f"cannot parse task spec {text!r}")
        kind, arg = m["kind"], m["arg"]
        levels = int(m["levels"]) if m["levels"] is not None else 1
        if kind in ("bitflip", "phaseflip"):
            if arg is None or not arg.isdigit():
                raise ValueError(f"{kind} needs a size, e.g. {kind}:3")
            params = (int(arg),)
        elif kind == "shor":
            parts = (arg or "").split("x")
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ValueError("shor needs block sizes, e.g. shor:3x3")
            params = (int(parts[0]), int(parts[1]))
        elif kind == "dejmps":
            params = (arg or "alice",)
        else:
            if arg is not None:
                raise ValueError(f"{kind} takes no parameter")
            params = ()
        return cls(kind, params, levels)

    def __str__(self) -> str:
        arg = ""
        if self.kind == "shor":
            arg = f":{self.params[0]}x{self.params[1]}"
        elif self.params:
            arg = f":{self.params[0]}"
        suffix = "" if self.levels == 1 else f"@{self.levels}"
        return f"{self.kind}{arg}{suffix}"

    def base(self) -> AuxOps:
        return {
            "bitflip": lambda: bitflip(*self.params),
            "phaseflip": lambda: phaseflip(*self.params),
            "shor": lambda: generalized_shor(*self.params),
            "ring5": cluster_ring,
            "dejmps": lambda: dejmps(*self.params),
            "dfs": dfs,
            "wire": wire,
        }[self.kind]()

    def build(self) -> AuxOps:
        base = self.base()
        if self.levels == 0:
            return wire().with_side(base.side)
        return concatenate_levels(base, self.levels)

    def correctable_errors(self, n: int) -> list[PauliString]:
        """Errors the decoder corrects, in the order they are tried."""
        letters = {"bitflip": "X", "phaseflip": "Z", "shor": "XYZ", "ring5": "XYZ"}.get(self.kind, "")
        return [PauliString.single(n, q, c) for c in letters for q in range(n)]


def parse(text: str) -> AuxOps:
    return CodeSpec.parse(text).build()
