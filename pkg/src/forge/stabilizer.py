"""Stabilizer generator sets: validation, canonical form, group equality."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from forge import gf2
from forge.pauli import DimensionError, PauliString, commutes, multiply

ROLES = ("input", "output", "virtual")


class TableauError(ValueError):
    """Generators that do not form a valid stabilizer description."""


@dataclass(frozen=True)
class StabilizerTableau:
    generators: tuple[PauliString, ...]
    n: int
    roles: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        roles = tuple(self.roles) if self.roles else ("output",) * self.n
        if len(roles) != self.n or any(r not in ROLES for r in roles):
            raise TableauError(f"bad roles {roles!r} for {self.n} qubits")
        object.__setattr__(self, "roles", roles)
        for g in self.generators:
            if g.n != self.n:
                raise DimensionError(f"generator {g} is not on {self.n} qubits")

    @classmethod
    def from_strings(cls, gens: Sequence[str], roles: Sequence[str] = ()) -> StabilizerTableau:
        ps = [PauliString.from_str(g) for g in gens]
        n = ps[0].n if ps else len(roles)
        return cls(tuple(ps), n, tuple(roles))

    @property
    def full_rank(self) -> bool:
        return len(self.generators) == self.n and is_independent(self.generators)

    def validate(self) -> StabilizerTableau:
        """Raise :class:`TableauError` unless the invariants hold; return self."""
        for g in self.generators:
            if not g.is_hermitian():
                raise TableauError(f"non-Hermitian generator {g}")
        for a_idx, a in enumerate(self.generators):
            for b in self.generators[a_idx + 1:]:
                if not commutes(a, b):
                    raise TableauError(f"{a} and {b} anticommute")
        if not is_independent(self.generators):
            raise TableauError("generators are dependent")
        if len(self.generators) > self.n:
            raise TableauError("more generators than qubits")
        return self

    def qubits_with_role(self, role: str) -> list[int]:
        return [q for q, r in enumerate(self.roles) if r == role]

    def permute(self, order: Sequence[int]) -> StabilizerTableau:
        """New tableau whose qubit ``k`` is old qubit ``order[k]``."""
        gens = []
        for g in self.generators:
            gens.append(g.restrict(order).with_phase(g.phase))
        return StabilizerTableau(tuple(gens), self.n, tuple(self.roles[q] for q in order))

    def to_dict(self) -> dict:
        return {"n": self.n, "roles": list(self.roles), "generators": [str(g) for g in self.generators]}

    @classmethod
    def from_dict(cls, d: dict) -> StabilizerTableau:
        gens = tuple(PauliString.from_str(g) for g in d["generators"])
        return cls(gens, int(d["n"]), tuple(d.get("roles") or ()))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> StabilizerTableau:
        return cls.from_dict(json.loads(text))

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.generators)


def _col_bit(p: PauliString, col: int) -> int:
    if col < p.n:
        return (p.x >> col) & 1
    return (p.z >> (col - p.n)) & 1


def rref(gens: Sequence[PauliString], n: int) -> list[PauliString]:
    """Reduced row echelon form over the (x|z) columns, phases by multiplication."""
    rows = list(gens)
    r = 0
    for col in range(2 * n):
        pivot = next((k for k in range(r, len(rows)) if _col_bit(rows[k], col)), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for k in range(len(rows)):
            if k != r and _col_bit(rows[k], col):
                rows[k] = multiply(rows[r], rows[k])
        r += 1
        if r == len(rows):
            break
    return [g for g in rows if not g.is_identity()]


def canonicalize(t: StabilizerTableau) -> StabilizerTableau:
    return StabilizerTableau(tuple(rref(t.generators, t.n)), t.n, t.roles)


def is_independent(gens: Sequence[PauliString]) -> bool:
    gens = list(gens)
    if not gens:
        return True
    if len({g.n for g in gens}) != 1:
        raise DimensionError("generators on different qubit counts")
    return gf2.rank([g.symplectic() for g in gens]) == len(gens)


def group_equal(a: StabilizerTableau, b: StabilizerTableau) -> bool:
    if a.n != b.n:
        raise DimensionError(f"{a.n} vs {b.n} qubits")
    return rref(a.generators, a.n) == rref(b.generators, b.n)


def in_group(p: PauliString, gens: Sequence[PauliString]) -> int | None:
    """Return +1/-1 if ``+-p`` lies in the group, None if neither does.

    Also returns None when only ``+-i p`` is reachable.
    """
    combo = gf2.solve([g.symplectic() for g in gens], p.symplectic())
    if combo is None:
        return None
    acc = PauliString.identity(p.n)
    for k in combo:
        acc = multiply(acc, gens[k])
    rel = (acc.phase - p.phase) % 4
    return {0: 1, 2: -1}.get(rel)


def from_graph(adjacency, roles: Sequence[str] = ()) -> StabilizerTableau:
    """Graph-state generators K_a = X_a prod_{b ~ a} Z_b."""
    adj = np.asarray(adjacency, dtype=int) % 2
    n = adj.shape[0]
    if adj.shape != (n, n):
        raise TableauError("adjacency must be square")
    if np.any(adj != adj.T):
        raise TableauError("adjacency is not symmetric")
    if np.any(np.diag(adj)):
        raise TableauError("adjacency has self-loops")
    gens = []
    for a in range(n):
        z = sum(1 << b for b in range(n) if adj[a, b])
        gens.append(PauliString(1 << a, z, n))
    return StabilizerTableau(tuple(gens), n, tuple(roles))
