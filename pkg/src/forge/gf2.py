"""GF(2) row reduction on int bitsets."""

from __future__ import annotations


def rank(rows: list[int]) -> int:
    basis: dict[int, int] = {}
    for r in rows:
        r = reduce(r, basis)
        if r:
            basis[r.bit_length() - 1] = r
    return len(basis)


def reduce(v: int, basis: dict[int, int]) -> int:
    """Reduce ``v`` against a basis keyed by leading (highest) bit."""
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return v
        v ^= basis[top]
    return 0


def solve(rows: list[int], target: int) -> list[int] | None:
    """Indices of ``rows`` whose XOR equals ``target``; None if unreachable."""
    basis: dict[int, tuple[int, int]] = {}  # lead bit -> (vector, combination mask)
    for idx, r in enumerate(rows):
        combo = 1 << idx
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = (r, combo)
                break
            br, bc = basis[top]
            r ^= br
            combo ^= bc
    combo = 0
    v = target
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return None
        br, bc = basis[top]
        v ^= br
        combo ^= bc
    return [i for i in range(len(rows)) if (combo >> i) & 1]


def independent_subset(rows: list[int]) -> list[int]:
    """Greedy, order-preserving indices of a maximal independent subset."""
    basis: dict[int, int] = {}
    keep = []
    for idx, r in enumerate(rows):
        r = reduce(r, basis)
        if r:
            basis[r.bit_length() - 1] = r
            keep.append(idx)
    return keep
