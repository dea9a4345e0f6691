"""Recurrences for concatenated resources and Bell coupling of resources.

Concatenating a task ``O`` (the *outer* resource, m non-distinguished qubits)
with copies of ``O'`` (the *inner* resource) on each of those qubits replaces
every single-qubit factor sigma_{i,j} of an outer K or F by the block
``F'^j K'^i`` built from the inner sets, with the prefactor picking up
``i**(i*j)`` per replaced factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from forge import gf2
from forge.aux_ops import AuxOps
from forge.pauli import PauliString, factor_decompose, multiply, tensor, tensor_all
from forge.stabilizer import StabilizerTableau, _col_bit, rref

_Z = PauliString.from_str("Z")
_X = PauliString.from_str("X")

# per replaced slot: (index into inner.k_set, index into inner.f_set)
Choice = Sequence[tuple[int, int]]


class InsufficientAuxError(ValueError):
    """The inner resource lacks the K or F operators a replacement needs."""


class CompositionError(ValueError):
    """Resources whose distinguished sides cannot be joined this way."""


class HermiticityError(AssertionError):
    """A recurrence produced a non-Hermitian stabilizer (indicates a bug)."""


@dataclass(frozen=True)
class RecurrenceInput:
    outer: AuxOps
    inner: AuxOps

    def __post_init__(self):
        if self.outer.side != self.inner.side:
            raise CompositionError(
                f"cannot concatenate a single-{self.outer.side} resource with a single-{self.inner.side} one"
            )


def substitute(op: PauliString, inner: AuxOps, slots: Sequence[int] | None = None,
               choice: Choice | Callable[[int], tuple[int, int]] | None = None) -> PauliString:
    """Replace the factors of ``op`` on ``slots`` by inner-resource blocks.

    ``choice`` picks which K/F element sits in each replaced slot (all first
    elements by default). Untouched slots keep their single-qubit letter.
    """
    a, factors = factor_decompose(op)
    slots = range(op.n) if slots is None else sorted(slots)
    slot_set = set(slots)
    pick = _chooser(choice, slots)
    phase = op.phase
    blocks = []
    for pos, f in enumerate(factors):
        if pos not in slot_set:
            blocks.append(PauliString.from_str(f.letter))
            continue
        kidx, fidx = pick(pos)
        block = PauliString.identity(inner.m)
        if f.j:
            if not inner.f_set:
                raise InsufficientAuxError("inner resource has no F operator")
            block = multiply(block, inner.f_set[fidx])
        if f.i:
            if not inner.k_set:
                raise InsufficientAuxError("inner resource has no K operator")
            block = multiply(block, inner.k_set[kidx])
        phase += f.i * f.j
        blocks.append(block)
    out = tensor_all(blocks)
    return out.times_phase(phase)


def _chooser(choice, slots):
    if choice is None:
        return lambda pos: (0, 0)
    if callable(choice):
        return choice
    table = dict(zip(slots, choice))
    return lambda pos: table[pos]


def extend_k(outer_k: PauliString, inner: AuxOps, choose=None) -> PauliString:
    """K of the concatenated resource from one outer K (all slots replaced)."""
    return substitute(outer_k, inner, None, choose)


def extend_f(outer_f: PauliString, inner: AuxOps, choose=None) -> PauliString:
    """F of the concatenated resource from one outer F (all slots replaced)."""
    return substitute(outer_f, inner, None, choose)


def recurrence_vectors(op: PauliString) -> tuple[list[int], list[int], complex]:
    """(K-exponents, F-exponents, prefactor c) of one outer operator.

    For a K operator these are gamma, delta; for an F operator epsilon, eta.
    """
    a, factors = factor_decompose(op)
    k_exp = [f.i for f in factors]
    f_exp = [f.j for f in factors]
    c = a * (1j) ** sum(f.i * f.j for f in factors)
    return k_exp, f_exp, complex(c)


def staircase(op: PauliString, inner: AuxOps, slots: Sequence[int] | None = None) -> list[PauliString]:
    """Replacements of ``op`` with every slot pinned to the first inner
    element except one slot that runs through the alternatives.

    The last slot varies first, then the one before it, and so on. A Y factor
    contributes both a K and an F alternative run.
    """
    _, factors = factor_decompose(op)
    slots = list(range(op.n)) if slots is None else sorted(slots)
    out = [substitute(op, inner, slots)]
    for pos in reversed(slots):
        f = factors[pos]
        runs = []
        if f.j:
            runs += [(0, b) for b in range(1, len(inner.f_set))]
        if f.i:
            runs += [(b, 0) for b in range(1, len(inner.k_set))]
        for alt in runs:
            out.append(substitute(op, inner, slots, lambda p, pos=pos, alt=alt: alt if p == pos else (0, 0)))
    return out


def _select(k_cands: list[PauliString], f_cands: list[PauliString], target: int):
    rows = [tensor(_Z, k).symplectic() for k in k_cands] + [tensor(_X, f).symplectic() for f in f_cands]
    keep = gf2.independent_subset(rows)
    if len(keep) != target:
        raise AssertionError(f"selected {len(keep)} independent operators, expected {target}")
    nk = len(k_cands)
    ks = tuple(k_cands[i] for i in keep if i < nk)
    fs = tuple(f_cands[i - nk] for i in keep if i >= nk)
    for p in ks + fs:
        if not p.is_hermitian():
            raise HermiticityError(f"recurrence produced non-Hermitian operator {p}")
    return ks, fs


def replace_slots(outer: AuxOps, inner: AuxOps, slots: Sequence[int], reduce: bool = True) -> AuxOps:
    """Project the given outer qubits onto inner resources (one Bell link each).

    With ``reduce`` the F operators are rewritten by :func:`reduce_f`;
    otherwise they are the raw recurrence products.
    """
    RecurrenceInput(outer, inner)
    if not inner.complete or not outer.complete:
        raise ValueError("both resources must be complete descriptions")
    slots = sorted(set(slots))
    m_new = outer.m + len(slots) * (inner.m - 1)
    k_cands = [p for k in outer.k_set for p in staircase(k, inner, slots)]
    f_cands = [p for f in outer.f_set for p in staircase(f, inner, slots)]
    ks, fs = _select(k_cands, f_cands, m_new + 1)
    out = AuxOps(ks, fs, outer.side, m_new)
    return reduce_f(out) if reduce else out


def reduce_f(a: AuxOps) -> AuxOps:
    """Pick F representatives with the fewest X/Y factors.

    X (x) F stays a stabilizer when F is multiplied by a product of two K's,
    so each F is reduced (x-columns first) against the span of K_0 K_j.
    """
    if len(a.k_set) < 2 or not a.f_set:
        return a
    basis = rref([multiply(a.k_set[0], k) for k in a.k_set[1:]], a.m)
    fs = []
    for f in a.f_set:
        for row in basis:
            col = next(c for c in range(2 * a.m) if _col_bit(row, c))
            if _col_bit(f, col):
                f = multiply(f, row)
        fs.append(f)
    return AuxOps(a.k_set, tuple(fs), a.side, a.m)


def build_next_level(r: RecurrenceInput | AuxOps, inner: AuxOps | None = None, *, reduce: bool = True) -> AuxOps:
    """Concatenate: inner resource on every non-distinguished outer qubit."""
    if inner is not None:
        r = RecurrenceInput(r, inner)
    return replace_slots(r.outer, r.inner, range(r.outer.m), reduce)


def project_one(outer: AuxOps, inner: AuxOps, slot: int) -> AuxOps:
    """A single Bell projection of outer qubit ``slot`` onto one inner copy."""
    return replace_slots(outer, inner, [slot])


def concatenate_levels(base: AuxOps, levels: int, inner: AuxOps | None = None) -> AuxOps:
    """``levels``-fold tower: level n+1 is ``base`` with level n on each slot."""
    cur = base if inner is None else inner
    start = 1 if inner is None else 0
    for _ in range(start, levels):
        cur = build_next_level(base, cur)
    return cur


def couple(a: AuxOps, b: AuxOps, *, swap: bool = False) -> StabilizerTableau:
    """Bell-link the distinguished qubit of ``a`` with that of ``b``.

    ``a`` must be single-output and ``b`` single-input, unless ``swap`` is set
    (entanglement swapping between two single-output resources). Qubits of
    ``a`` come first. Generators: staircase of K_a (x) K_b and F_a (x) F_b.
    """
    if swap:
        if a.side != "output" or b.side != "output":
            raise CompositionError("entanglement swapping joins two single-output resources")
    elif a.side != "output" or b.side != "input":
        raise CompositionError("couple needs a single-output then a single-input resource")
    gens = []
    for sa, sb in ((a.k_set, b.k_set), (a.f_set, b.f_set)):
        if not sa or not sb:
            raise InsufficientAuxError("coupling needs non-empty K and F sets on both sides")
        gens += [tensor(sa[0], q) for q in sb]
        gens += [tensor(p, sb[0]) for p in sa[1:]]
    keep = gf2.independent_subset([g.symplectic() for g in gens])
    n = a.m + b.m
    if len(keep) != n:
        raise AssertionError(f"coupling produced {len(keep)} independent stabilizers, expected {n}")
    roles_a = a.roles[1:]
    roles_b = b.roles[1:]
    return StabilizerTableau(tuple(gens[i] for i in keep), n, roles_a + roles_b).validate()


def tensor_staircase(ops: Sequence[PauliString], m: int) -> list[PauliString]:
    """m-fold tensor products of ``ops``: all slots on ops[0], then one slot
    at a time (last first) running through the others."""
    out = [tensor_all([ops[0]] * m)]
    for slot in reversed(range(m)):
        for alt in ops[1:]:
            out.append(tensor_all([alt if q == slot else ops[0] for q in range(m)]))
    return out


# ---- closed-form counts --------------------------------------------------

def staircase_count(n_ops: int, m_slots: int) -> int:
    """Independent tensor products from n independent operators in m slots."""
    return n_ops * m_slots - m_slots + 1


def level_count(m_outer: int, m_inner: int) -> int:
    """|K| + |F| after one concatenation level."""
    return m_outer * m_inner + 1


def coupling_count(n_out: int, m_in: int) -> int:
    return n_out + m_in


def single_projection_count(m_qubits: int, n_qubits: int) -> int:
    """Stabilizers after one Bell projection of an M- and an N-qubit resource."""
    return m_qubits + n_qubits - 2


def count_check(kind: str, *sizes: int) -> int:
    table = {
        "staircase": staircase_count,
        "level": level_count,
        "coupling": coupling_count,
        "projection": single_projection_count,
    }
    return table[kind](*sizes)
