"""Exact n-qubit Pauli arithmetic.

A :class:`PauliString` is stored as two int bitsets (bit ``q`` is qubit ``q``,
qubit 0 printed leftmost) plus a phase exponent. The phase is attached to the
letter form: the operator is ``i**phase_exp`` times the tensor product of the
letters I, X, Y, Z. Hermitian operators therefore have an even exponent, and
``-YI`` has ``phase_exp == 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

_LETTERS = "IXZY"  # index = x + 2*z
_PREFIXES = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PHASE_OF_PREFIX = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PHASE_VALUE = (1, 1j, -1, -1j)


class DimensionError(ValueError):
    """Raised when Pauli operators on different qubit counts are combined."""


class PauliFactor(NamedTuple):
    """Single-qubit factor sigma_{i,j}: ``i`` is the Z bit, ``j`` the X bit."""

    i: int
    j: int

    @property
    def letter(self) -> str:
        return _LETTERS[self.j + 2 * self.i]


def popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    x: int
    z: int
    n: int
    phase: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bits set outside the register")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- construction -------------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(0, 0, n)

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        """Parse ``'-YI'``, ``'+iXZ'`` or ``'XX'``."""
        s = text.strip()
        body_start = 0
        while body_start < len(s) and s[body_start] in "+-i":
            body_start += 1
        prefix, body = s[:body_start], s[body_start:]
        if prefix not in _PHASE_OF_PREFIX:
            raise ValueError(f"bad phase prefix {prefix!r} in {text!r}")
        x = z = 0
        for q, ch in enumerate(body):
            if ch not in "IXYZ":
                raise ValueError(f"bad Pauli letter {ch!r} in {text!r}")
            k = _LETTERS.index(ch)
            x |= (k & 1) << q
            z |= (k >> 1) << q
        return cls(x, z, len(body), _PHASE_OF_PREFIX[prefix])

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, phase: int = 0) -> PauliString:
        k = _LETTERS.index(letter)
        return cls((k & 1) << qubit, (k >> 1) << qubit, n, phase)

    @classmethod
    def from_factors(cls, a: complex, factors: Iterable[PauliFactor]) -> PauliString:
        factors = list(factors)
        x = z = 0
        for q, f in enumerate(factors):
            x |= f.j << q
            z |= f.i << q
        return cls(x, z, len(factors), _PHASE_VALUE.index(complex(a)))

    # -- queries ------------------------------------------------------------
    def letter(self, q: int) -> str:
        return _LETTERS[((self.x >> q) & 1) + 2 * ((self.z >> q) & 1)]

    @property
    def n_y(self) -> int:
        return popcount(self.x & self.z)

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    @property
    def support(self) -> int:
        return self.x | self.z

    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    def is_identity(self) -> bool:
        """True when the Pauli part is trivial (any phase)."""
        return self.x == 0 and self.z == 0

    @property
    def sign(self) -> complex:
        return _PHASE_VALUE[self.phase]

    def symplectic(self) -> int:
        """Row vector ``x | z << n`` used for GF(2) elimination."""
        return self.x | (self.z << self.n)

    # -- arithmetic ---------------------------------------------------------
    def _xz_phase(self) -> int:
        # i^p * prod(letters) == i^(p + #Y) * X^x Z^z
        return (self.phase + self.n_y) % 4

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.x, self.z, self.n, self.phase + 2)

    def with_phase(self, phase: int) -> PauliString:
        return PauliString(self.x, self.z, self.n, phase)

    def times_phase(self, k: int) -> PauliString:
        """Multiply by ``i**k``."""
        return PauliString(self.x, self.z, self.n, self.phase + k)

    def unsigned(self) -> PauliString:
        return PauliString(self.x, self.z, self.n, 0)

    def restrict(self, qubits: Iterable[int]) -> PauliString:
        """Letters on ``qubits`` (in the given order), phase dropped."""
        qubits = list(qubits)
        x = z = 0
        for k, q in enumerate(qubits):
            x |= ((self.x >> q) & 1) << k
            z |= ((self.z >> q) & 1) << k
        return PauliString(x, z, len(qubits))

    def embed(self, n: int, qubits: Iterable[int]) -> PauliString:
        """Place this operator on ``qubits`` of an ``n``-qubit register."""
        x = z = 0
        for k, q in enumerate(qubits):
            x |= ((self.x >> k) & 1) << q
            z |= ((self.z >> k) & 1) << q
        return PauliString(x, z, n, self.phase)

    def __str__(self) -> str:
        letters = "".join(self.letter(q) for q in range(self.n))
        return _PREFIXES[self.phase] + letters

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"


def _check(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise DimensionError(f"{a.n}-qubit and {b.n}-qubit operators")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a @ b``."""
    _check(a, b)
    # X^x1 Z^z1 X^x2 Z^z2 = (-1)^(z1.x2) X^(x1^x2) Z^(z1^z2)
    p = a._xz_phase() + b._xz_phase() + 2 * popcount(a.z & b.x)
    x, z = a.x ^ b.x, a.z ^ b.z
    return PauliString(x, z, a.n, p - popcount(x & z))


def product(ops: Iterable[PauliString], n: int | None = None) -> PauliString:
    ops = list(ops)
    if not ops:
        if n is None:
            raise ValueError("empty product needs an explicit qubit count")
        return PauliString.identity(n)
    acc = ops[0]
    for p in ops[1:]:
        acc = multiply(acc, p)
    return acc


def commutes(a: PauliString, b: PauliString) -> bool:
    _check(a, b)
    return (popcount(a.x & b.z) + popcount(a.z & b.x)) % 2 == 0


def tensor(a: PauliString, b: PauliString) -> PauliString:
    return PauliString(a.x | (b.x << a.n), a.z | (b.z << a.n), a.n + b.n, a.phase + b.phase)


def tensor_all(ops: Iterable[PauliString]) -> PauliString:
    acc = PauliString.identity(0)
    for p in ops:
        acc = tensor(acc, p)
    return acc


def factor_decompose(p: PauliString) -> tuple[complex, list[PauliFactor]]:
    """Split into a prefactor ``a`` in {1, i, -1, -i} and per-qubit sigma_{i,j}."""
    factors = [PauliFactor((p.z >> q) & 1, (p.x >> q) & 1) for q in range(p.n)]
    return p.sign, factors


def bell_transfer_sign(f: PauliFactor) -> int:
    """Sign in (sigma (x) id)|phi+> = sign * (id (x) sigma)|phi+>."""
    return -1 if f.i and f.j else 1


def xbasis_action(f: PauliFactor, k: int) -> tuple[complex, int]:
    """sigma_{i,j}|k^x> = (-i)^(ij) (-1)^(kj) |(k xor i)^x>."""
    phase = (-1j) ** (f.i * f.j) * (-1) ** (k * f.j)
    return phase, k ^ f.i
