"""Composite tasks built from elementary resources, plus the Pauli bookkeeping
that turns read-in Bell outcomes into corrections."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from forge import gf2
from forge.aux_ops import AuxOps, adjoint, to_stabilizers
from forge.codes import CodeSpec, dejmps
from forge.concat import build_next_level, concatenate_levels, couple
from forge.graph_state import GraphState, to_graph
from forge.pauli import PauliFactor, PauliString, commutes, multiply, product, tensor_all
from forge.stabilizer import StabilizerTableau

# Bell outcome (i, j): the state (id (x) sigma_{i,j}) |phi+>
PHI_PLUS, PSI_PLUS, PHI_MINUS, PSI_MINUS = (0, 0), (0, 1), (1, 0), (1, 1)
OUTCOME_NAMES = {PHI_PLUS: "phi+", PSI_PLUS: "psi+", PHI_MINUS: "phi-", PSI_MINUS: "psi-"}
Outcome = tuple[int, int]


class PlanError(ValueError):
    """Malformed composition plan."""


class NotPropagatable(ValueError):
    """The input Pauli has no partner on the outputs in the stabilizer group."""


def outcome_pauli(outcomes: Sequence[Outcome]) -> PauliString:
    """sigma_{i1,j1} (x) ... (x) sigma_{im,jm} for an outcome pattern."""
    return tensor_all(PauliString.from_str(PauliFactor(i, j).letter) for i, j in outcomes)


def _hermitian(p: PauliString) -> PauliString:
    return p if p.is_hermitian() else p.times_phase(1)


# ---- encoding / decoding ------------------------------------------------

def encode_correction(outcome: Outcome, aux: AuxOps) -> PauliString:
    """Output correction for one read-in outcome of a single-input encoder."""
    if aux.side != "input":
        raise ValueError("encode_correction needs a single-input resource")
    i, j = outcome
    p = PauliString.identity(aux.m)
    if j:
        p = multiply(p, aux.f_set[0])
    if i:
        p = multiply(p, aux.k_set[0])
    return _hermitian(p)


@dataclass(frozen=True)
class DecodeResult:
    correction: PauliString
    error: PauliString | None = None
    uncorrectable: bool = False

    @property
    def letter(self) -> str:
        return self.correction.letter(0)


def code_stabilizers(aux: AuxOps) -> list[PauliString]:
    """Generators of the code stabilizer: pairwise K and pairwise F products."""
    gens = [multiply(aux.k_set[0], k) for k in aux.k_set[1:]]
    gens += [multiply(aux.f_set[0], f) for f in aux.f_set[1:]]
    return gens


def logical_class(p: PauliString, aux: AuxOps) -> str | None:
    """Logical letter of ``p`` if it normalizes the code, else None."""
    if not all(commutes(p, s) for s in code_stabilizers(aux)):
        return None
    a = 0 if commutes(p, aux.k_set[0]) else 1  # X_L component
    b = 0 if commutes(p, aux.f_set[0]) else 1  # Z_L component
    return PauliFactor(b, a).letter


def decode_correction(outcomes: Sequence[Outcome], aux: AuxOps,
                      errors: Iterable[PauliString] = ()) -> DecodeResult:
    """Classify a read-in pattern at a single-output decoder.

    The pattern's Pauli is tried against the identity and then each
    correctable error in turn; the first one bringing it into the normalizer
    fixes the logical correction. Otherwise the identity is returned with the
    uncorrectable flag set.
    """
    if len(outcomes) != aux.m:
        raise ValueError(f"expected {aux.m} outcomes, got {len(outcomes)}")
    p = outcome_pauli(outcomes)
    for e in itertools.chain([None], errors):
        letter = logical_class(p if e is None else multiply(p, e), aux)
        if letter is not None:
            return DecodeResult(PauliString.from_str(letter), e)
    return DecodeResult(PauliString.identity(1), None, True)


# ---- byproduct propagation ----------------------------------------------

def propagate_byproduct(t: StabilizerTableau, p_in: PauliString) -> PauliString:
    """P_out with P_in (x) P_out in the group of ``t`` (inputs and outputs by role).

    The returned phase makes the product exactly a group element, so the
    byproduct P_in on the inputs acts like P_out on the outputs.
    """
    ins = t.qubits_with_role("input")
    outs = t.qubits_with_role("output")
    if p_in.n != len(ins):
        raise ValueError(f"expected a Pauli on {len(ins)} inputs")
    rows = [g.restrict(ins).symplectic() for g in t.generators]
    sol = gf2.solve(rows, p_in.symplectic())
    if sol is None:
        raise NotPropagatable(f"{p_in} has no output partner")
    g = product([t.generators[k] for k in sol], t.n)
    out = g.restrict(outs).with_phase(g.phase)
    # fold the phase of the input letters into the output part
    lhs = g.restrict(ins)
    return out.times_phase(p_in.phase - lhs.phase)


def propagate_chain(stages: Sequence[StabilizerTableau], p_in: PauliString) -> PauliString:
    p = p_in
    for t in stages:
        p = propagate_byproduct(t, p)
    return p


@dataclass(frozen=True)
class PurificationVerdict:
    keep: bool
    correction: PauliString | None = None


def classify_purification(t: StabilizerTableau, outcomes: Sequence[Outcome]) -> PurificationVerdict:
    """Keep when the read-in byproduct propagates to the outputs; discard otherwise."""
    try:
        return PurificationVerdict(True, propagate_byproduct(t, outcome_pauli(outcomes)))
    except NotPropagatable:
        return PurificationVerdict(False)


@dataclass(frozen=True)
class CorrectionTable:
    entries: dict

    @classmethod
    def for_tableau(cls, t: StabilizerTableau, max_inputs: int = 6) -> CorrectionTable:
        """All outcome patterns (single-qubit ones only above ``max_inputs``)."""
        m = len(t.qubits_with_role("input"))
        if m <= max_inputs:
            patterns = itertools.product([PHI_PLUS, PSI_PLUS, PHI_MINUS, PSI_MINUS], repeat=m)
        else:
            patterns = [tuple(o if q == k else PHI_PLUS for q in range(m))
                        for k in range(m) for o in (PSI_PLUS, PHI_MINUS, PSI_MINUS)]
            patterns = [(PHI_PLUS,) * m] + patterns
        entries = {}
        for pat in patterns:
            v = classify_purification(t, pat)
            entries[tuple(pat)] = v.correction if v.keep else "discard"
        return cls(entries)

    def to_dict(self) -> dict:
        return {" ".join(OUTCOME_NAMES[o] for o in k): str(v) for k, v in self.entries.items()}


# ---- pipelines -----------------------------------------------------------

def decoder(spec: str | CodeSpec | AuxOps) -> AuxOps:
    aux = _aux(spec)
    return aux if aux.side == "output" else adjoint(aux)


def encoder(spec: str | CodeSpec | AuxOps) -> AuxOps:
    aux = _aux(spec)
    return aux if aux.side == "input" else adjoint(aux)


def _aux(spec) -> AuxOps:
    if isinstance(spec, AuxOps):
        return spec
    if isinstance(spec, str):
        spec = CodeSpec.parse(spec)
    return spec.build()


def purification_tower(rounds: int, party: str = "alice") -> AuxOps:
    return concatenate_levels(dejmps(party), rounds)


def switcher(from_code, to_code) -> StabilizerTableau:
    """Decode one code and re-encode into another."""
    return couple(decoder(from_code), encoder(to_code))


def syndrome_readout(code) -> StabilizerTableau:
    return switcher(code, code)


def repeater(left: AuxOps, right: AuxOps) -> StabilizerTableau:
    """Entanglement swapping between two single-output towers."""
    return couple(left, right, swap=True)


def logical_epp(code, rounds: int = 1, party: str = "alice") -> StabilizerTableau:
    """Purification of encoded pairs: decode every tower input, re-encode the output."""
    inner = build_next_level(purification_tower(rounds, party), decoder(code))
    return couple(inner, encoder(code))


# ---- plans ---------------------------------------------------------------

@dataclass(frozen=True)
class PlanNode:
    id: str
    spec: str
    side: str | None = None

    def __post_init__(self):
        if self.side not in (None, "input", "output"):
            raise PlanError(f"node side must be 'input' or 'output', not {self.side!r}")

    def aux(self) -> AuxOps:
        a = _aux(self.spec)
        if self.side is not None and self.side != a.side:
            a = adjoint(a)
        return a


@dataclass(frozen=True)
class PlanEdge:
    kind: str
    a: str
    b: str


EDGE_KINDS = ("concatenate", "couple", "swap")


@dataclass
class CompositionPlan:
    """Nodes are task specs; ``concatenate`` puts the inner task on every
    non-distinguished qubit of the outer one, ``couple``/``swap`` Bell-link
    two distinguished qubits (at most one such link per plan)."""

    nodes: list[PlanNode] = field(default_factory=list)
    edges: list[PlanEdge] = field(default_factory=list)

    @classmethod
    def from_dict(cls, d: dict) -> CompositionPlan:
        nodes = [PlanNode(n["id"], n["spec"], n.get("side")) for n in d.get("nodes", [])]
        edges = []
        for e in d.get("edges", []):
            kind = e.get("kind")
            if kind == "concatenate":
                edges.append(PlanEdge(kind, e["outer"], e["inner"]))
            elif kind in ("couple", "swap"):
                edges.append(PlanEdge(kind, e["from"], e["to"]))
            else:
                raise PlanError(f"unknown edge kind {kind!r}")
        return cls(nodes, edges)

    @classmethod
    def from_json(cls, text: str) -> CompositionPlan:
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        edges = []
        for e in self.edges:
            if e.kind == "concatenate":
                edges.append({"kind": e.kind, "outer": e.a, "inner": e.b})
            else:
                edges.append({"kind": e.kind, "from": e.a, "to": e.b})
        nodes = [{"id": n.id, "spec": n.spec, **({"side": n.side} if n.side else {})} for n in self.nodes]
        return {"nodes": nodes, "edges": edges}

    def _check(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise PlanError("duplicate node id")
        known = set(ids)
        for e in self.edges:
            if e.a not in known or e.b not in known:
                raise PlanError(f"edge refers to unknown node: {e}")
        links = [e for e in self.edges if e.kind != "concatenate"]
        if len(links) > 1:
            raise PlanError("a plan may contain at most one couple/swap edge")
        inner_of: dict[str, str] = {}
        for e in self.edges:
            if e.kind == "concatenate":
                if e.a in inner_of:
                    raise PlanError(f"node {e.a} has two inner tasks")
                inner_of[e.a] = e.b
        for start in inner_of:
            seen, cur = set(), start
            while cur in inner_of:
                if cur in seen:
                    raise PlanError("concatenation cycle")
                seen.add(cur)
                cur = inner_of[cur]
        return inner_of, links

    def resolve(self, node_id: str) -> AuxOps:
        inner_of, _ = self._check()
        by_id = {n.id: n for n in self.nodes}

        def go(nid):
            a = by_id[nid].aux()
            if nid in inner_of:
                a = build_next_level(a, go(inner_of[nid]))
            return a

        return go(node_id)

    def roots(self) -> list[str]:
        inner_of, links = self._check()
        inners = set(inner_of.values())
        return [n.id for n in self.nodes if n.id not in inners]

    def build(self) -> StabilizerTableau:
        _, links = self._check()
        if links:
            e = links[0]
            return couple(self.resolve(e.a), self.resolve(e.b), swap=e.kind == "swap")
        roots = self.roots()
        if len(roots) != 1:
            raise PlanError("a plan without couple edges needs exactly one root node")
        return to_stabilizers(self.resolve(roots[0]))


def build(plan: CompositionPlan) -> tuple[StabilizerTableau, GraphState]:
    t = plan.build()
    return t, to_graph(t)
