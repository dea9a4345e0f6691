"""Dense state-vector oracle.

Everything here is built from amplitudes: Jamiolkowski states of circuits or
codeword pairs, Bell projections between registers, and projector products
for stabilizer groups. Qubit 0 is the most significant index bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from forge.pauli import PauliString
from forge.stabilizer import StabilizerTableau, in_group, is_independent

MAX_QUBITS = 14

_SQ = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

# index of (id (x) sigma_{i,j})|phi+> in the Bell basis, keyed by (i, j)
BELL_NAMES = {(0, 0): "phi+", (0, 1): "psi+", (1, 0): "phi-", (1, 1): "psi-"}


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DenseState:
    amplitudes: np.ndarray
    n: int

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.n,):
            raise ValueError("amplitude vector does not match qubit count")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> DenseState:
        return DenseState(self.amplitudes / self.norm, self.n)

    def permute(self, order: Sequence[int]) -> DenseState:
        """Qubit ``k`` of the result is qubit ``order[k]`` of this state."""
        t = self.amplitudes.reshape((2,) * self.n).transpose(list(order))
        return DenseState(t.reshape(-1).copy(), self.n)


def _cap(n: int, cap: int | None) -> None:
    if n > (MAX_QUBITS if cap is None else cap):
        raise CapExceeded(f"{n} qubits exceeds the dense cap")


def ket(*vectors) -> DenseState:
    v = np.array([1.0 + 0j])
    for a in vectors:
        v = np.kron(v, np.asarray(a, dtype=complex))
    return DenseState(v, int(round(np.log2(v.size))))


def tensor(*states: DenseState) -> DenseState:
    v = np.array([1.0 + 0j])
    for s in states:
        v = np.kron(v, s.amplitudes)
    return DenseState(v, sum(s.n for s in states))


def pauli_matrix(p: PauliString) -> np.ndarray:
    m = np.array([[1.0 + 0j]])
    for q in range(p.n):
        m = np.kron(m, _SQ[p.letter(q)])
    return p.sign * m


def apply_pauli(p: PauliString, v: np.ndarray) -> np.ndarray:
    n = p.n
    idx = np.arange(2**n)
    xmask = sum(1 << (n - 1 - q) for q in range(n) if (p.x >> q) & 1)
    zmask = sum(1 << (n - 1 - q) for q in range(n) if (p.z >> q) & 1)
    # letters = i^{#Y} X^x Z^z
    coeff = p.sign * (1j) ** p.n_y
    zsign = 1 - 2 * (np.bitwise_count(idx & zmask).astype(np.int64) % 2)
    return coeff * (zsign * v)[idx ^ xmask]


def expectation_ok(p: PauliString, s: DenseState, tol: float = 1e-10) -> bool:
    return np.linalg.norm(apply_pauli(p, s.amplitudes) - s.amplitudes) < tol * max(1.0, s.norm)


def state_of(t: StabilizerTableau, cap: int | None = None) -> DenseState:
    """Unique common +1 eigenstate of a full-rank tableau."""
    _cap(t.n, cap)
    if len(t.generators) != t.n or not is_independent(t.generators):
        raise ValueError("state_of needs n independent generators")
    dim = 2**t.n
    for ref in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[ref] = 1.0
        for g in t.generators:
            v = 0.5 * (v + apply_pauli(g, v))
        nrm = np.linalg.norm(v)
        if nrm > 1e-6:
            return DenseState(v / nrm, t.n)
    raise ValueError("generators have no common +1 eigenstate")


def fidelity_up_to_phase(a: DenseState, b: DenseState) -> float:
    if a.n != b.n:
        return 0.0
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2 / (a.norm**2 * b.norm**2))


def jamiolkowski(op: np.ndarray) -> DenseState:
    """(id_A (x) O_B) applied to |phi+>^{(x) n}; input qubits A first, outputs after."""
    op = np.asarray(op, dtype=complex)
    dout, din = op.shape
    n_in, n_out = int(round(np.log2(din))), int(round(np.log2(dout)))
    # sum_a |a>_A (x) O|a>_B / sqrt(din)
    amp = op.T.reshape(-1) / np.sqrt(din)
    return DenseState(amp, n_in + n_out)


def jamiolkowski_code(zero_l: np.ndarray, one_l: np.ndarray) -> DenseState:
    """(|0>|0_L> + |1>|1_L>)/sqrt(2) with the logical qubit first."""
    enc = np.stack([np.asarray(zero_l, complex), np.asarray(one_l, complex)], axis=1)
    return jamiolkowski(enc)


def jamiolkowski_decoder(zero_l: np.ndarray, one_l: np.ndarray) -> DenseState:
    """Resource of |0><0_L| + |1><1_L| with the logical output qubit first."""
    dec = np.stack([np.conj(zero_l), np.conj(one_l)], axis=0).astype(complex)
    s = jamiolkowski(dec)
    m = s.n - 1
    return s.permute([m] + list(range(m)))


def bell_project(s: DenseState, qa: int, qb: int, outcome=(0, 0)) -> tuple[DenseState, float]:
    """Contract qubits ``qa, qb`` with (id (x) sigma_{i,j})|phi+>.

    Returns the unnormalized remaining state and its norm.
    """
    if qa == qb:
        raise ValueError("Bell projection needs two distinct qubits")
    sigma = pauli_matrix(PauliString.from_str("IXZY"[outcome[1] + 2 * outcome[0]]))
    # <bell| = sum_{ab} conj((id (x) sigma)|phi+>)_{ab} <ab|
    vec = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        vec[a, :] = sigma[:, a] / np.sqrt(2)
    t = s.amplitudes.reshape((2,) * s.n)
    rest = [q for q in range(s.n) if q not in (qa, qb)]
    t = np.transpose(t, [qa, qb] + rest).reshape(4, -1)
    out = np.conj(vec).reshape(-1) @ t
    res = DenseState(out.reshape(-1), s.n - 2)
    return res, res.norm


def contract(states: Sequence[DenseState], links: Sequence[tuple[tuple[int, int], tuple[int, int]]],
             cap: int | None = None) -> tuple[DenseState, list[tuple[int, int]]]:
    """Tensor ``states`` and project every linked pair onto |phi+>.

    ``links`` are pairs of (state index, qubit) addresses. Projections happen as
    soon as both ends are present, so the register stays small. Returns the
    normalized state and the surviving (state, qubit) labels in order.
    """
    labels: list[tuple[int, int]] = []
    cur = DenseState(np.array([1.0 + 0j]), 0)
    pending = list(links)
    for si, st in enumerate(states):
        cur = tensor(cur, st)
        labels += [(si, q) for q in range(st.n)]
        _cap(cur.n, cap)
        still = []
        for a, b in pending:
            if a in labels and b in labels:
                cur, _ = bell_project(cur, labels.index(a), labels.index(b))
                labels = [lab for lab in labels if lab not in (a, b)]
            else:
                still.append((a, b))
        pending = still
    if pending:
        raise ValueError(f"unresolved links {pending}")
    if cur.norm < 1e-12:
        raise ValueError("projection annihilated the state")
    return cur.normalized(), labels


def contract_ordered(states: Sequence[DenseState], links, order: Sequence[tuple[int, int]],
                     cap: int | None = None) -> DenseState:
    """``contract`` followed by reordering the survivors as ``order``."""
    st, labels = contract(states, links, cap)
    if sorted(order) != sorted(labels):
        raise ValueError("order must list exactly the surviving qubits")
    return st.permute([labels.index(lab) for lab in order])


def stabilizers_of(s: DenseState, tol: float = 1e-9) -> StabilizerTableau:
    """Brute-force the Hermitian Pauli stabilizers of a small state (n <= 6)."""
    if s.n > 6:
        raise CapExceeded("brute-force stabilizer search is limited to 6 qubits")
    v = s.normalized().amplitudes
    gens: list[PauliString] = []
    for letters in itertools.product("IXYZ", repeat=s.n):
        body = "".join(letters)
        if set(body) == {"I"}:
            continue
        for sign in "+-":
            p = PauliString.from_str(sign + body)
            if np.linalg.norm(apply_pauli(p, v) - v) < tol:
                if in_group(p, gens) is None:
                    gens.append(p)
                break
    return StabilizerTableau(tuple(gens), s.n)


def g_branches(s: DenseState) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized |G_0>, |G_1> with |psi> = |+>|G_0> + |->|G_1> (qubit 0 split)."""
    t = s.amplitudes.reshape(2, -1)
    plus = (t[0] + t[1]) / np.sqrt(2)
    minus = (t[0] - t[1]) / np.sqrt(2)
    return plus, minus


def alpha(s_outer: DenseState, k_bits: Sequence[int], i: int) -> complex:
    """Connecting function <phi+|^{(x)m} |k^x> |G_i> for an outer state.

    Qubit 0 of ``s_outer`` is the distinguished one; the pairs are
    (fresh qubit l carrying |k_l^x>, outer qubit l + 1).
    """
    m = s_outer.n - 1
    g = g_branches(s_outer)[i].reshape((2,) * m) if m else g_branches(s_outer)[i]
    xs = [np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)]
    amp = g
    for l in range(m):
        # <phi+|_{(k_l, out_l)} = sum_a <a|<a| / sqrt 2, ket |k^x> has real entries
        amp = np.tensordot(xs[k_bits[l]] / np.sqrt(2), amp, axes=([0], [0]))
    return complex(amp)


# ---- elementary task resources built from circuits and codewords ----------

def basis(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def _kron(*ms):
    out = np.array([[1.0 + 0j]])
    for m in ms:
        out = np.kron(out, m)
    return out


def dejmps_resource(side: str = "alice") -> DenseState:
    """Jamiolkowski state of one DEJMPS round at one party, output qubit first.

    Circuit: R_x rotation on both local qubits (sign depends on party), CNOT
    from the kept pair onto the sacrificed pair, and the target projected on |0>.
    """
    sgn = -1 if side == "alice" else 1
    rot = (np.eye(2) + sgn * 1j * _SQ["X"]) / np.sqrt(2)
    proj = _kron(np.eye(2), basis("0")[None, :])
    op = proj @ CNOT @ _kron(rot, rot)
    s = jamiolkowski(op)  # (in1, in2, out)
    return s.permute([2, 0, 1]).normalized()


def graph_state(adjacency) -> DenseState:
    """|G> = prod CZ |+>^n, built gate by gate."""
    adj = np.asarray(adjacency)
    n = adj.shape[0]
    _cap(n, None)
    v = np.ones(2**n, dtype=complex) / np.sqrt(2**n)
    idx = np.arange(2**n)
    for a in range(n):
        for b in range(a + 1, n):
            if adj[a, b]:
                ba = (idx >> (n - 1 - a)) & 1
                bb = (idx >> (n - 1 - b)) & 1
                v = v * (1 - 2 * (ba & bb))
    return DenseState(v, n)


def repetition_codewords(m: int, basis_name: str = "z") -> tuple[np.ndarray, np.ndarray]:
    if basis_name == "z":
        return basis("0" * m), basis("1" * m)
    plus = np.array([1, 1]) / np.sqrt(2)
    minus = np.array([1, -1]) / np.sqrt(2)
    return _kron(*[plus[:, None]] * m)[:, 0], _kron(*[minus[:, None]] * m)[:, 0]


def shor_codewords(m1: int, m2: int) -> tuple[np.ndarray, np.ndarray]:
    ghz_p = (basis("0" * m2) + basis("1" * m2)) / np.sqrt(2)
    ghz_m = (basis("0" * m2) - basis("1" * m2)) / np.sqrt(2)
    return _kron(*[ghz_p[:, None]] * m1)[:, 0], _kron(*[ghz_m[:, None]] * m1)[:, 0]


def dfs_codewords() -> tuple[np.ndarray, np.ndarray]:
    return basis("01"), basis("10")
