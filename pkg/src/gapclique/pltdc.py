"""Parallel words, tester/decoder specs, and their exhaustive or sampled estimators.

A word of an l-parallelized code is a sequence of ``n`` blocks, one per
position of an explicit index space.  A block is a tuple of ``l`` rows, one
per lane; what a row looks like (an int, a tuple of derivative values, ...)
is up to the base code.

Randomness is always an integer in ``[0, R)``.  Codes that draw several field
elements per test decode that integer with ``mixed_radix`` (first component
most significant).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, InvalidTarget, ParameterError, ShapeError

EXHAUSTIVE_BUDGET = 10 ** 7

Block = Tuple[Any, ...]


def mixed_radix(r: int, radices: Sequence[int]) -> Tuple[int, ...]:
    """Decode ``r`` into digits, the first radix being the most significant."""
    out = [0] * len(radices)
    for i in range(len(radices) - 1, -1, -1):
        r, out[i] = divmod(r, radices[i])
    return tuple(out)


def mixed_radix_encode(digits: Sequence[int], radices: Sequence[int]) -> int:
    r = 0
    for d, b in zip(digits, radices):
        r = r * b + d
    return r


@dataclass(frozen=True)
class ParallelWord:
    """``n`` blocks of ``ell`` rows indexed by an enumerable position domain."""

    index: Tuple[Hashable, ...]
    blocks: Tuple[Block, ...]
    ell: int
    lookup: Dict[Hashable, int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.index) != len(self.blocks):
            raise ShapeError(f"{len(self.index)} positions but {len(self.blocks)} blocks")
        for pos, b in enumerate(self.blocks):
            if len(b) != self.ell:
                raise ShapeError(f"block {pos} has {len(b)} rows, expected {self.ell}")
        if self.lookup is None:
            object.__setattr__(self, "lookup", {key: i for i, key in enumerate(self.index)})

    @property
    def n(self) -> int:
        return len(self.blocks)

    def __getitem__(self, pos: int) -> Block:
        return self.blocks[pos]

    def at(self, key: Hashable) -> Block:
        return self.blocks[self.lookup[key]]

    def lane(self, j: int) -> Tuple[Any, ...]:
        return tuple(b[j] for b in self.blocks)

    def with_blocks(self, blocks) -> "ParallelWord":
        return ParallelWord(self.index, tuple(blocks), self.ell, self.lookup)


def parallel_encode(base_encoder: Callable[[Sequence[Any]], Sequence[Any]],
                    messages: Sequence[Sequence[Any]],
                    index: Sequence[Hashable]) -> ParallelWord:
    """Apply ``base_encoder`` to every lane and zip the codewords position-wise."""
    if not messages:
        raise ShapeError("need at least one lane")
    k = len(messages[0])
    if any(len(msg) != k for msg in messages):
        raise ShapeError("ragged message table")
    lanes = [tuple(base_encoder(msg)) for msg in messages]
    n = len(index)
    if any(len(c) != n for c in lanes):
        raise ShapeError(f"base encoder must return {n} symbols")
    blocks = tuple(tuple(c[i] for c in lanes) for i in range(n))
    return ParallelWord(tuple(index), blocks, len(messages))


def corrupt(w: ParallelWord, edits: Dict[int, Block]) -> ParallelWord:
    blocks = list(w.blocks)
    for pos, blk in edits.items():
        if not 0 <= pos < w.n:
            raise ShapeError(f"position {pos} outside [0, {w.n})")
        blk = tuple(blk)
        if len(blk) != w.ell:
            raise ShapeError(f"replacement block has {len(blk)} rows, expected {w.ell}")
        blocks[pos] = blk
    return w.with_blocks(blocks)


def relative_distance(u: ParallelWord, w: ParallelWord) -> Fraction:
    if u.n != w.n:
        raise ShapeError("words have different lengths")
    if u.n == 0:
        return Fraction(0)
    return Fraction(sum(a != b for a, b in zip(u.blocks, w.blocks)), u.n)


# -- targets -----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Target:
    """chi_i (``j is None``) or psi_{i,j}; indices are 0-based."""

    i: int
    j: Optional[int] = None

    def __post_init__(self):
        if self.i < 0 or (self.j is not None and self.j <= self.i):
            raise InvalidTarget(f"invalid target indices ({self.i}, {self.j})")

    @property
    def is_pair(self):
        return self.j is not None

    def value(self, message: Sequence[int], p: int) -> int:
        if self.j is None:
            return message[self.i] % p
        return (message[self.i] + message[self.j]) % p

    def __str__(self):
        if self.j is None:
            return f"chi_{self.i + 1}"
        return f"psi_{self.i + 1},{self.j + 1}"


def chi(i: int) -> Target:
    return Target(i)


def psi(i: int, j: int) -> Target:
    if i == j:
        raise InvalidTarget(f"psi needs two different indices, got {i} twice")
    return Target(i, j)


def all_targets(k: int) -> List[Target]:
    """chi_1..chi_k then psi_{1,2}..psi_{k-1,k}."""
    return [chi(i) for i in range(k)] + [psi(i, j) for i in range(k) for j in range(i + 1, k)]


def check_target(target: Target, k: int):
    hi = target.j if target.is_pair else target.i
    if hi >= k:
        raise InvalidTarget(f"target {target} out of range for message length {k}")


# -- specs -------------------------------------------------------------------

@dataclass(frozen=True)
class TesterSpec:
    randomness_size: int
    q: int
    queries: Callable[[int], Sequence[int]]
    accept: Callable[[int, Sequence[Block]], bool]
    name: str = "tester"

    def run(self, w: ParallelWord, r: int) -> bool:
        return bool(self.accept(r, [w.blocks[pos] for pos in self.queries(r)]))


@dataclass(frozen=True)
class DecoderSpec:
    randomness_size: int
    target: Target
    queries: Callable[[int], Sequence[int]]
    reconstruct: Callable[[int, Sequence[Block]], Tuple[int, ...]]
    name: str = "decoder"


@dataclass(frozen=True)
class PltdcParams:
    q: int
    R_T: int
    R_D: int
    delta_T: Fraction
    delta_D: Fraction
    eps_T: Fraction
    eps_D: Fraction

    def __post_init__(self):
        if not (0 < self.delta_T <= self.delta_D < 1):
            raise ParameterError("need 0 < delta_T <= delta_D < 1")
        if not (0 < self.eps_T < 1 and 0 < self.eps_D < 1):
            raise ParameterError("need 0 < eps_T, eps_D < 1")


def run_decode(decoder: DecoderSpec, w: ParallelWord, r: int) -> Tuple[int, ...]:
    if not 0 <= r < decoder.randomness_size:
        raise ParameterError(f"randomness {r} outside [0, {decoder.randomness_size})")
    return tuple(decoder.reconstruct(r, [w.blocks[pos] for pos in decoder.queries(r)]))


# -- estimators --------------------------------------------------------------

@dataclass(frozen=True)
class Estimate:
    """``count`` hits out of ``total`` draws; exact when every draw was enumerated."""

    count: int
    total: int
    exact: bool

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.total) if self.total else Fraction(0)

    def __float__(self):
        return float(self.fraction)


def _draws(R: int, mode: str, samples: Optional[int], seed: Optional[int], budget: int):
    if mode == "exhaustive":
        if R > budget:
            raise BudgetExceeded(f"randomness space {R} exceeds budget {budget}",
                                 needed=R, budget=budget)
        return range(R), True
    if mode == "sampled":
        if samples is None or seed is None:
            raise ParameterError("sampled mode needs both samples and seed")
        rng = random.Random(seed)
        return [rng.randrange(R) for _ in range(samples)], False
    raise ParameterError(f"unknown mode {mode!r}")


def estimate_rejection(tester: TesterSpec, w: ParallelWord, mode: str = "exhaustive",
                       samples: Optional[int] = None, seed: Optional[int] = None,
                       budget: int = EXHAUSTIVE_BUDGET) -> Estimate:
    draws, exact = _draws(tester.randomness_size, mode, samples, seed, budget)
    rejected = 0
    total = 0
    for r in draws:
        total += 1
        if not tester.run(w, r):
            rejected += 1
    return Estimate(rejected, total, exact)


def estimate_decode_success(decoder: DecoderSpec, w: ParallelWord, expected: Sequence[int],
                            mode: str = "exhaustive", samples: Optional[int] = None,
                            seed: Optional[int] = None,
                            budget: int = EXHAUSTIVE_BUDGET) -> Estimate:
    draws, exact = _draws(decoder.randomness_size, mode, samples, seed, budget)
    expected = tuple(expected)
    ok = 0
    total = 0
    for r in draws:
        total += 1
        if run_decode(decoder, w, r) == expected:
            ok += 1
    return Estimate(ok, total, exact)


@dataclass
class SmoothnessReport:
    ok: bool
    expected: Optional[Fraction]
    counts: List[int]
    reason: str = ""

    def __bool__(self):
        return self.ok


def query_counts(decoder: DecoderSpec, n: int, budget: int = EXHAUSTIVE_BUDGET) -> List[int]:
    if decoder.randomness_size > budget:
        raise BudgetExceeded(f"randomness space {decoder.randomness_size} exceeds budget {budget}",
                             needed=decoder.randomness_size, budget=budget)
    counts = [0] * n
    for r in range(decoder.randomness_size):
        for pos in decoder.queries(r):
            counts[pos] += 1
    return counts


def check_smoothness(decoder: DecoderSpec, n: int,
                     budget: int = EXHAUSTIVE_BUDGET) -> SmoothnessReport:
    """Every position must be queried exactly 2 * R_D / n times."""
    counts = query_counts(decoder, n, budget)
    total = 2 * decoder.randomness_size
    if total % n:
        return SmoothnessReport(False, Fraction(total, n), counts,
                                f"2*R_D = {total} is not divisible by n = {n}")
    want = total // n
    bad = [pos for pos, c in enumerate(counts) if c != want]
    if bad:
        return SmoothnessReport(False, Fraction(want), counts,
                                f"{len(bad)} positions off the expected count {want}")
    return SmoothnessReport(True, Fraction(want), counts)


def coverage_min(tester: TesterSpec, s: int, mode: str = "exhaustive",
                 samples: Optional[int] = None, seed: Optional[int] = None,
                 budget: int = EXHAUSTIVE_BUDGET) -> int:
    """Smallest number of positions touched by ``s`` distinct randomness values.

    Sampled mode only sees ``samples`` subsets, so its answer is an upper bound.
    """
    R = tester.randomness_size
    if not 1 <= s <= R:
        raise ParameterError(f"subset size {s} outside [1, {R}]")
    var = [frozenset(tester.queries(r)) for r in range(R)]
    if mode == "exhaustive":
        total = comb(R, s)
        if total > budget:
            raise BudgetExceeded(f"C({R}, {s}) = {total} subsets exceed budget {budget}",
                                 needed=total, budget=budget)
        subsets = itertools.combinations(range(R), s)
    elif mode == "sampled":
        if samples is None or seed is None:
            raise ParameterError("sampled mode needs both samples and seed")
        rng = random.Random(seed)
        subsets = (rng.sample(range(R), s) for _ in range(samples))
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    best = None
    for sub in subsets:
        size = len(frozenset().union(*(var[r] for r in sub)))
        if best is None or size < best:
            best = size
    return best
