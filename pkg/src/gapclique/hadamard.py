"""Hadamard code over F_p with the BLR linearity tester and 2-query decoders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .algebra import PrimeField, vadd
from .errors import ShapeError
from .pltdc import (
    DecoderSpec,
    ParallelWord,
    Target,
    TesterSpec,
    check_target,
    parallel_encode,
)


@dataclass(frozen=True)
class HadamardCode:
    field: PrimeField
    k: int

    @property
    def n(self) -> int:
        return self.field.p ** self.k

    def positions(self) -> List[Tuple[int, ...]]:
        return list(self.field.points(self.k))

    def encode_lane(self, x: Sequence[int]) -> List[int]:
        if len(x) != self.k:
            raise ShapeError(f"message has length {len(x)}, expected {self.k}")
        p = self.field.p
        return [sum(a * b for a, b in zip(pt, x)) % p for pt in self.field.points(self.k)]

    def unit(self, i: int) -> Tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.k))


def had_encode(code: HadamardCode, messages: Sequence[Sequence[int]]) -> ParallelWord:
    if any(len(msg) != code.k for msg in messages):
        raise ShapeError(f"every lane must have length {code.k}")
    return parallel_encode(code.encode_lane, messages, code.positions())


def had_tester(code: HadamardCode) -> TesterSpec:
    """BLR: r <-> (a, b), a most significant; check f(a) + f(b) = f(a + b)."""
    F, k, n = code.field, code.k, code.n
    p = F.p

    def queries(r):
        ia, ib = divmod(r, n)
        a, b = F.point_at(ia, k), F.point_at(ib, k)
        return (ia, ib, F.point_index(vadd(p, a, b)))

    def accept(r, blocks):
        fa, fb, fab = blocks
        return all((x + y - z) % p == 0 for x, y, z in zip(fa, fb, fab))

    return TesterSpec(n * n, 3, queries, accept, name="blr")


def had_decoder(code: HadamardCode, target: Target) -> DecoderSpec:
    """Randomness a in F^k; query a and a + e_i (+ e_j); output the difference."""
    check_target(target, code.k)
    F, k = code.field, code.k
    p = F.p
    shift = code.unit(target.i)
    if target.is_pair:
        shift = vadd(p, shift, code.unit(target.j))

    def queries(r):
        a = F.point_at(r, k)
        return (r, F.point_index(vadd(p, a, shift)))

    def reconstruct(r, blocks):
        first, second = blocks
        return tuple((y - x) % p for x, y in zip(first, second))

    return DecoderSpec(code.n, target, queries, reconstruct, name=f"hadamard[{target}]")
