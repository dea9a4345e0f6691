"""Auxiliary operator sets K and F of a single-input or single-output resource.

A resource ``|+>|G_0> + |->|G_1>`` with a distinguished qubit is described by
operators K (``K|G_i> = |G_{i+1}>``) and F (``F|G_i> = (-1)^i |G_i>``) on the
remaining qubits. Its stabilizers are ``Z (x) K`` and ``X (x) F``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from forge.pauli import PauliString, commutes, multiply, tensor
from forge.stabilizer import StabilizerTableau, TableauError

SIDES = ("input", "output")
_Z = PauliString.from_str("Z")
_X = PauliString.from_str("X")


class NotSplittableError(ValueError):
    """The distinguished qubit is not entangled with the rest."""


@dataclass(frozen=True)
class AuxOps:
    k_set: tuple[PauliString, ...]
    f_set: tuple[PauliString, ...]
    side: str = "input"
    m: int = -1

    def __post_init__(self):
        object.__setattr__(self, "k_set", tuple(self.k_set))
        object.__setattr__(self, "f_set", tuple(self.f_set))
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        ops = self.k_set + self.f_set
        m = self.m if self.m >= 0 else (ops[0].n if ops else 0)
        object.__setattr__(self, "m", m)
        if any(p.n != m for p in ops):
            raise ValueError("auxiliary operators act on differing qubit counts")

    @classmethod
    def from_strings(cls, k_set: Sequence[str], f_set: Sequence[str], side: str = "input") -> AuxOps:
        return cls(
            tuple(PauliString.from_str(s) for s in k_set),
            tuple(PauliString.from_str(s) for s in f_set),
            side,
        )

    @property
    def complete(self) -> bool:
        return len(self.k_set) + len(self.f_set) == self.m + 1

    @property
    def n_qubits(self) -> int:
        return self.m + 1

    @property
    def roles(self) -> tuple[str, ...]:
        other = "output" if self.side == "input" else "input"
        return (self.side,) + (other,) * self.m

    def with_side(self, side: str) -> AuxOps:
        """Same state, read as an encoder (``input``) or decoder (``output``)."""
        return AuxOps(self.k_set, self.f_set, side, self.m)

    def generators(self) -> list[PauliString]:
        return [tensor(_Z, k) for k in self.k_set] + [tensor(_X, f) for f in self.f_set]

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "k_set": [str(k) for k in self.k_set],
            "f_set": [str(f) for f in self.f_set],
        }

    @classmethod
    def from_dict(cls, d: dict) -> AuxOps:
        return cls.from_strings(d["k_set"], d["f_set"], d.get("side", "input"))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def __str__(self) -> str:
        k = ", ".join(map(str, self.k_set))
        f = ", ".join(map(str, self.f_set))
        return f"AuxOps[{self.side}](K={{{k}}}, F={{{f}}})"


def to_stabilizers(a: AuxOps) -> StabilizerTableau:
    """Tableau with the distinguished qubit first: Z(x)K rows, then X(x)F rows."""
    try:
        return StabilizerTableau(tuple(a.generators()), a.m + 1, a.roles).validate()
    except TableauError as exc:
        raise TableauError(f"inconsistent auxiliary operators: {exc}") from exc


def from_stabilizers(t: StabilizerTableau, distinguished: int = 0, side: str | None = None) -> AuxOps:
    """Bring generators into Z(x)K / X(x)F form on ``distinguished`` and strip it.

    The first generator with X or Y there becomes the single X-type row; the
    first remaining one with Z becomes the Z pivot that fixes up Y rows and
    rows acting trivially on the distinguished qubit.
    """
    d = distinguished
    gens = list(t.generators)
    xpiv = next((k for k, g in enumerate(gens) if (g.x >> d) & 1), None)
    if xpiv is None:
        raise NotSplittableError(f"no generator acts with X or Y on qubit {d}")
    for k, g in enumerate(gens):
        if k != xpiv and (g.x >> d) & 1:
            gens[k] = multiply(gens[xpiv], g)
    zpiv = next((k for k, g in enumerate(gens) if k != xpiv and (g.z >> d) & 1), None)
    if zpiv is None:
        raise NotSplittableError(f"qubit {d} is not entangled with the rest")
    if (gens[xpiv].z >> d) & 1:
        gens[xpiv] = multiply(gens[xpiv], gens[zpiv])
    for k, g in enumerate(gens):
        if k not in (xpiv, zpiv) and not ((g.z >> d) & 1):
            gens[k] = multiply(g, gens[zpiv])

    rest = [q for q in range(t.n) if q != d]
    k_set, f_set = [], []
    for g in gens:
        letter = g.letter(d)
        stripped = g.restrict(rest).with_phase(g.phase)
        (k_set if letter == "Z" else f_set).append(stripped)
    if side is None:
        side = t.roles[d] if t.roles[d] in SIDES else "input"
    return AuxOps(tuple(k_set), tuple(f_set), side, t.n - 1)


def anticommutation_ok(a: AuxOps) -> bool:
    """Every K anticommutes with every F."""
    return all(not commutes(k, f) for k in a.k_set for f in a.f_set)


def _conjugate(p: PauliString) -> PauliString:
    # Y* = -Y and (i^k)* = i^k (-1)^k
    return p.times_phase(2 * (p.n_y + p.phase))


def adjoint(a: AuxOps) -> AuxOps:
    """Resource of the adjoint map: complex-conjugate state, sides swapped.

    The decoder of an encoder is its adjoint on the code space.
    """
    other = "output" if a.side == "input" else "input"
    return AuxOps(tuple(map(_conjugate, a.k_set)), tuple(map(_conjugate, a.f_set)), other, a.m)
