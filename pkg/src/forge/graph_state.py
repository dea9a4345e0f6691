"""Local-Clifford reduction of stabilizer states to graph states, the DEJMPS
graph rule, and graph export."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from forge.pauli import PauliString, multiply, tensor_all
from forge.stabilizer import StabilizerTableau, TableauError, from_graph, group_equal

_P1 = {s: PauliString.from_str(s) for s in ("+X", "-X", "+Y", "-Y", "+Z", "-Z")}


@dataclass(frozen=True)
class LocalClifford:
    """Single-qubit Clifford, stored as its conjugation action C P C^dagger.

    ``img_x`` and ``img_z`` are the signed one-qubit images of X and Z.
    """

    img_x: PauliString = _P1["+X"]
    img_z: PauliString = _P1["+Z"]

    def __post_init__(self):
        for p in (self.img_x, self.img_z):
            if p.n != 1 or not p.is_hermitian() or p.is_identity():
                raise ValueError(f"bad Pauli image {p}")
        if self.img_x.unsigned() == self.img_z.unsigned():
            raise ValueError("images of X and Z must anticommute")

    @classmethod
    def from_images(cls, x: str, z: str) -> LocalClifford:
        return cls(PauliString.from_str(x), PauliString.from_str(z))

    @classmethod
    def gate(cls, name: str) -> LocalClifford:
        return cls.from_images(*_GATES[name])

    @property
    def matrix(self) -> np.ndarray:
        """GF(2) symplectic matrix; column 0 is the (x, z) image of X, column 1 of Z."""
        return np.array([[self.img_x.x, self.img_z.x], [self.img_x.z, self.img_z.z]], dtype=np.uint8)

    @property
    def signs(self) -> tuple[int, int]:
        """Sign bits of the X and Z images (1 means negative)."""
        return (self.img_x.phase // 2, self.img_z.phase // 2)

    def image(self, letter: str) -> PauliString:
        if letter == "I":
            return PauliString.identity(1)
        if letter == "X":
            return self.img_x
        if letter == "Z":
            return self.img_z
        # Y = i X Z
        return multiply(self.img_x, self.img_z).times_phase(1)

    def conjugate(self, p: PauliString) -> PauliString:
        """C p C^dagger for a one-qubit Pauli, keeping its phase."""
        return self.image(p.letter(0)).times_phase(p.phase)

    def then(self, other: LocalClifford) -> LocalClifford:
        """Apply ``self`` first, then ``other``."""
        return LocalClifford(other.conjugate(self.img_x), other.conjugate(self.img_z))

    def inverse(self) -> LocalClifford:
        for c in _all_cliffords():
            if self.then(c) == IDENTITY:
                return c
        raise AssertionError("unreachable: single-qubit Clifford group is finite")

    @property
    def is_identity(self) -> bool:
        return self == IDENTITY

    @property
    def name(self) -> str:
        """Shortest gate word (time order) among I, H, S, Sdg, X, Y, Z."""
        return _names()[self]

    def to_dict(self) -> dict:
        return {"x": str(self.img_x), "z": str(self.img_z)}

    @classmethod
    def from_dict(cls, d: dict) -> LocalClifford:
        return cls.from_images(d["x"], d["z"])

    def __str__(self) -> str:
        return self.name


_GATES = {
    "H": ("+Z", "+X"),
    "S": ("+Y", "+Z"),
    "Sdg": ("-Y", "+Z"),
    "X": ("+X", "-Z"),
    "Y": ("-X", "-Z"),
    "Z": ("-X", "+Z"),
}
IDENTITY = LocalClifford()


@lru_cache(maxsize=None)
def _names() -> dict[LocalClifford, str]:
    names = {IDENTITY: "I"}
    queue = deque([IDENTITY])
    while queue:
        c = queue.popleft()
        for g in _GATES:
            nxt = c.then(LocalClifford.gate(g))
            if nxt not in names:
                names[nxt] = g if c == IDENTITY else f"{names[c]} {g}"
                queue.append(nxt)
    return names


def _all_cliffords() -> list[LocalClifford]:
    return list(_names())


def apply_local(cliffords: Sequence[LocalClifford], p: PauliString) -> PauliString:
    """Conjugate ``p`` by the tensor product of per-qubit Cliffords."""
    if len(cliffords) != p.n:
        raise ValueError("one local Clifford per qubit required")
    parts = [c.image(p.letter(q)) for q, c in enumerate(cliffords)]
    return tensor_all(parts).times_phase(p.phase)


def apply_local_tableau(cliffords: Sequence[LocalClifford], t: StabilizerTableau) -> StabilizerTableau:
    return StabilizerTableau(tuple(apply_local(cliffords, g) for g in t.generators), t.n, t.roles)


@dataclass(frozen=True, eq=False)
class GraphState:
    """Graph adjacency plus the local Cliffords mapping the graph state onto a
    target state: target = (tensor of local_cliffords) |G>."""

    adjacency: np.ndarray
    local_cliffords: tuple[LocalClifford, ...] = ()
    roles: tuple[str, ...] = ()

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=np.uint8) % 2
        n = adj.shape[0] if adj.ndim == 2 else 0
        if adj.shape != (n, n):
            raise TableauError("adjacency must be square")
        if np.any(adj != adj.T) or np.any(np.diag(adj)):
            raise TableauError("adjacency must be symmetric with zero diagonal")
        adj.setflags(write=False)
        object.__setattr__(self, "adjacency", adj)
        if not self.local_cliffords:
            object.__setattr__(self, "local_cliffords", (IDENTITY,) * n)
        if not self.roles:
            object.__setattr__(self, "roles", ("output",) * n)
        if len(self.local_cliffords) != n or len(self.roles) != n:
            raise ValueError("local_cliffords and roles must have one entry per vertex")

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphState):
            return NotImplemented
        return (np.array_equal(self.adjacency, other.adjacency)
                and self.local_cliffords == other.local_cliffords and self.roles == other.roles)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in range(a + 1, self.n) if self.adjacency[a, b]]

    def degree(self, v: int) -> int:
        return int(self.adjacency[v].sum())

    def neighbors(self, v: int) -> list[int]:
        return [int(b) for b in np.flatnonzero(self.adjacency[v])]

    def graph_tableau(self) -> StabilizerTableau:
        return from_graph(self.adjacency, self.roles)

    def tableau(self) -> StabilizerTableau:
        """Stabilizers of the target state (graph generators after local Cliffords)."""
        return apply_local_tableau(self.local_cliffords, self.graph_tableau())

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges()],
            "roles": list(self.roles),
            "local_cliffords": [c.to_dict() for c in self.local_cliffords],
        }

    @classmethod
    def from_dict(cls, d: dict) -> GraphState:
        adj = np.zeros((d["n"], d["n"]), dtype=np.uint8)
        for a, b in d["edges"]:
            adj[a, b] = adj[b, a] = 1
        return cls(adj, tuple(LocalClifford.from_dict(c) for c in d["local_cliffords"]), tuple(d["roles"]))


# ---- conversion ----------------------------------------------------------

def _eliminate(rows: list[PauliString], cols: Sequence[int], bit) -> list[int]:
    """Gauss-Jordan on selected bit columns in place; returns pivot columns.

    Pivoted rows are moved to the front in pivot order.
    """
    pivots = []
    r = 0
    for c in cols:
        hit = next((i for i in range(r, len(rows)) if bit(rows[i], c)), None)
        if hit is None:
            continue
        rows[r], rows[hit] = rows[hit], rows[r]
        for i in range(len(rows)):
            if i != r and bit(rows[i], c):
                rows[i] = multiply(rows[i], rows[r])
        pivots.append(c)
        r += 1
    return pivots


def to_graph(t: StabilizerTableau) -> GraphState:
    """Find a graph state and local Cliffords reproducing the state of ``t``.

    The X-block is row reduced; for the X-free rows the Z-parts are reduced
    with pivots taken from the highest qubit index down, and a Hadamard on
    each pivot makes the X-block invertible. Y and sign defects on the
    diagonal are then removed by S and Z.
    """
    n = t.n
    if not t.full_rank:
        raise TableauError("to_graph needs a full-rank tableau")
    t.validate()
    rows = list(t.generators)
    xbit = lambda p, c: (p.x >> c) & 1
    zbit = lambda p, c: (p.z >> c) & 1
    k = len(_eliminate(rows, range(n), xbit))
    zrows = rows[k:]
    hadamard = _eliminate(zrows, range(n - 1, -1, -1), zbit)

    U = [LocalClifford.gate("H") if q in hadamard else IDENTITY for q in range(n)]
    rows = [apply_local(U, g) for g in rows]
    piv = _eliminate(rows, range(n), xbit)
    if len(piv) != n:
        raise AssertionError("X-block not invertible after Hadamards")

    layer = [LocalClifford.gate("S") if rows[a].letter(a) == "Y" else IDENTITY for a in range(n)]
    rows = [apply_local(layer, g) for g in rows]
    U = [u.then(c) for u, c in zip(U, layer)]
    layer = [LocalClifford.gate("Z") if rows[a].phase == 2 else IDENTITY for a in range(n)]
    rows = [apply_local(layer, g) for g in rows]
    U = [u.then(c) for u, c in zip(U, layer)]

    adj = np.array([[(rows[a].z >> b) & 1 for b in range(n)] for a in range(n)], dtype=np.uint8)
    for a, r in enumerate(rows):
        if r.phase != 0 or r.x != 1 << a:
            raise AssertionError(f"reduction left a non-graph generator {r}")
    g = GraphState(adj, tuple(u.inverse() for u in U), t.roles)
    if not group_equal(g.tableau(), t):
        raise AssertionError("local Cliffords do not reproduce the input group")
    return g


# ---- DEJMPS rule ---------------------------------------------------------

def _join(a: np.ndarray, b: np.ndarray, full: bool) -> np.ndarray:
    na, nb = len(a), len(b)
    out = np.zeros((na + nb, na + nb), dtype=np.uint8)
    out[:na, :na] = a
    out[na:, na:] = b
    if full:
        out[:na, na:] = 1
        out[na:, :na] = 1
    return out


def _with_hub(inputs: np.ndarray) -> np.ndarray:
    m = len(inputs)
    out = np.ones((m + 1, m + 1), dtype=np.uint8)
    out[1:, 1:] = inputs
    out[0, 0] = 0
    return out


def dejmps_graph(n_rounds: int) -> np.ndarray:
    """Adjacency of the graph rule for ``n_rounds`` of DEJMPS; vertex 0 is the output.

    Two rounds ahead: drop the output, join two copies of the input graph
    completely, place a disjoint duplicate beside it, then attach a new
    output to every input.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be at least 1")
    if n_rounds == 1:
        q = np.zeros((2, 2), dtype=np.uint8)
    elif n_rounds == 2:
        edge = np.array([[0, 1], [1, 0]], dtype=np.uint8)
        q = _join(edge, edge, full=False)
    else:
        q = dejmps_graph(n_rounds - 2)[1:, 1:]
        g1 = _join(q, q, full=True)
        q = _join(g1, g1, full=False)
    return _with_hub(q)


# ---- structure helpers ---------------------------------------------------

def is_bipartite(adjacency) -> bool:
    adj = np.asarray(adjacency)
    color = [-1] * len(adj)
    for s in range(len(adj)):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in np.flatnonzero(adj[v]):
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def star_center(adjacency) -> int | None:
    """Centre of a star graph (one vertex adjacent to all, no other edges)."""
    adj = np.asarray(adjacency)
    n = len(adj)
    if n < 2:
        return None
    deg = adj.sum(axis=1)
    if adj.sum() // 2 != n - 1:
        return None
    centres = [v for v in range(n) if deg[v] == n - 1]
    if n == 2:
        return 0
    return centres[0] if len(centres) == 1 else None


def components(adjacency, removed: Sequence[int] = ()) -> list[list[int]]:
    adj = np.asarray(adjacency)
    gone = set(removed)
    seen: set[int] = set()
    out = []
    for s in range(len(adj)):
        if s in gone or s in seen:
            continue
        comp, queue = [], deque([s])
        seen.add(s)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in np.flatnonzero(adj[v]):
                w = int(w)
                if w not in gone and w not in seen:
                    seen.add(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def induced(adjacency, vertices: Sequence[int]) -> np.ndarray:
    adj = np.asarray(adjacency)
    idx = list(vertices)
    return adj[np.ix_(idx, idx)]


# ---- export --------------------------------------------------------------

_COLORS = {"input": "red", "output": "blue", "virtual": "gray"}


def to_dot(g: GraphState) -> str:
    lines = ["graph G {", "  node [style=filled];"]
    for v in range(g.n):
        label = g.local_cliffords[v].name
        extra = "" if label == "I" else f', xlabel="{label}"'
        lines.append(f"  q{v} [fillcolor={_COLORS[g.roles[v]]}{extra}];")
    lines += [f"  q{a} -- q{b};" for a, b in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_graphml(g: GraphState) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="role" for="node" attr.name="role" attr.type="string"/>',
        '  <key id="lc" for="node" attr.name="local_clifford" attr.type="string"/>',
        '  <graph id="G" edgedefault="undirected">',
    ]
    for v in range(g.n):
        out.append(f'    <node id="q{v}"><data key="role">{g.roles[v]}</data>'
                   f'<data key="lc">{escape(g.local_cliffords[v].name)}</data></node>')
    for i, (a, b) in enumerate(g.edges()):
        out.append(f'    <edge id="e{i}" source="q{a}" target="q{b}"/>')
    out += ["  </graph>", "</graphml>"]
    return "\n".join(out) + "\n"


def export(g: GraphState, fmt: str = "dot") -> str:
    if fmt == "dot":
        return to_dot(g)
    if fmt == "graphml":
        return to_graphml(g)
    if fmt == "json":
        return json.dumps(g.to_dict(), indent=2) + "\n"
    raise ValueError(f"unknown export format {fmt!r}")


def from_json(text: str) -> GraphState:
    return GraphState.from_dict(json.loads(text))
