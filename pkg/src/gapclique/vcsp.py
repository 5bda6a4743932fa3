"""Vector 2CSP instances and the hash embedding of partitioned k-Clique into them.

Variables x_1..x_k range over F^d; constraints are x_i in S_i and
x_i + x_j in S_ij.  Indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import PrimeField
from .errors import (
    BudgetExceeded,
    ConstructionFailed,
    DimensionError,
    GraphFormatError,
    ParameterError,
    ParseError,
)
from .graph import PartitionedGraph

Vec = Tuple[int, ...]
SOLVE_BUDGET = 10 ** 6


@dataclass(frozen=True)
class Vector2Csp:
    k: int
    p: int
    dim: int
    unary: Tuple[Tuple[Vec, ...], ...]
    binary: Tuple[Tuple[Tuple[int, int], Tuple[Vec, ...]], ...]

    def __init__(self, k: int, p: int, dim: int, unary, binary):
        PrimeField(p)
        if len(unary) != k:
            raise DimensionError(f"need {k} unary sets, got {len(unary)}")
        norm_u = tuple(_norm_set(s, p, dim) for s in unary)
        if isinstance(binary, dict):
            binary = binary.items()
        bmap = {}
        for (i, j), s in binary:
            if not 0 <= i < j < k:
                raise DimensionError(f"binary constraint on ({i}, {j}) is not a pair i < j < {k}")
            bmap[(i, j)] = _norm_set(s, p, dim)
        want = {(i, j) for i in range(k) for j in range(i + 1, k)}
        if set(bmap) != want:
            raise DimensionError("binary constraints must cover every pair i < j exactly once")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "unary", norm_u)
        object.__setattr__(self, "binary", tuple(sorted(bmap.items())))

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    def pair(self, i: int, j: int) -> Tuple[Vec, ...]:
        if i > j:
            i, j = j, i
        return dict(self.binary)[(i, j)]

    def satisfied_by(self, xs: Sequence[Vec]) -> bool:
        if len(xs) != self.k:
            return False
        for i, x in enumerate(xs):
            if tuple(x) not in set(self.unary[i]):
                return False
        for (i, j), s in self.binary:
            if _vsum(xs[i], xs[j], self.p) not in set(s):
                return False
        return True


def _norm_set(s, p, dim) -> Tuple[Vec, ...]:
    out = set()
    for v in s:
        v = tuple(int(c) % p for c in v)
        if len(v) != dim:
            raise DimensionError(f"vector {v} has dimension {len(v)}, expected {dim}")
        out.add(v)
    return tuple(sorted(out))


def _vsum(x, y, p) -> Vec:
    return tuple((a + b) % p for a, b in zip(x, y))


# -- hash embedding ----------------------------------------------------------

def digits_needed(n: int, p: int) -> int:
    """Smallest s >= 1 with p^s >= n, i.e. ceil(log n / log p) floored at 1."""
    s = 1
    while p ** s < n:
        s += 1
    return s


def hash_dimension(n: int, p: int) -> int:
    """Smallest d >= 1 with p^d >= n^5, i.e. ceil(5 log n / log p) floored at 1."""
    return digits_needed(n ** 5, p)


@dataclass(frozen=True)
class HashEmbedding:
    p: int
    dim: int
    s: int
    matrices: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def digits(self, idx: int) -> Vec:
        out = [0] * self.s
        for c in range(self.s - 1, -1, -1):
            idx, out[c] = divmod(idx, self.p)
        return tuple(out)

    def image(self, part: int, idx: int) -> Vec:
        """H of the vertex at local position ``idx`` of ``part``."""
        M = self.matrices[part]
        x = self.digits(idx)
        return tuple(sum(a * b for a, b in zip(row, x)) % self.p for row in M)

    def images(self, G: PartitionedGraph) -> Dict[int, Vec]:
        return {v: self.image(i, idx) for i, part in enumerate(G.parts) for idx, v in enumerate(part)}


def verify_hash(H: HashEmbedding, G: PartitionedGraph) -> bool:
    if len(H.matrices) != G.k:
        return False
    if any(len(part) > H.p ** H.s for part in G.parts):
        return False
    imgs = [[H.image(i, idx) for idx in range(len(part))] for i, part in enumerate(G.parts)]
    for col in imgs:
        if len(set(col)) != len(col):
            return False
    for i in range(G.k):
        for j in range(i + 1, G.k):
            sums = [_vsum(a, b, H.p) for a in imgs[i] for b in imgs[j]]
            if len(set(sums)) != len(sums):
                return False
    return True


def _violation_systems(G: PartitionedGraph, p: int, s: int):
    """Coefficient vectors whose kernel membership marks a collision.

    Each entry is ``{part: coefficient vector over the s digits}``; a
    collision happens iff sum_part M_part * coeff = 0.
    """
    def dg(idx):
        out = [0] * s
        for c in range(s - 1, -1, -1):
            idx, out[c] = divmod(idx, p)
        return out

    systems = []
    sizes = [len(part) for part in G.parts]
    for i, n_i in enumerate(sizes):
        for a, b in itertools.combinations(range(n_i), 2):
            systems.append({i: tuple((x - y) % p for x, y in zip(dg(a), dg(b)))})
    for i in range(G.k):
        for j in range(i + 1, G.k):
            pairs = list(itertools.product(range(sizes[i]), range(sizes[j])))
            for (a, b), (a2, b2) in itertools.combinations(pairs, 2):
                systems.append({
                    i: tuple((x - y) % p for x, y in zip(dg(a), dg(a2))),
                    j: tuple((x - y) % p for x, y in zip(dg(b), dg(b2))),
                })
    return systems


def _potential(systems, mats, p: int, dim: int) -> int:
    """p^dim times the expected number of collisions with unfixed entries uniform."""
    total = 0
    for sys_ in systems:
        prod = 1
        for row in range(dim):
            acc = 0
            free = False
            for part, coeff in sys_.items():
                mrow = mats[part][row]
                for c, a in enumerate(coeff):
                    if a:
                        if mrow[c] is None:
                            free = True
                            break
                        acc += a * mrow[c]
                if free:
                    break
            if free:
                continue
            if acc % p:
                prod = 0
                break
            prod *= p
        total += prod
    return total


def build_hash(G: PartitionedGraph, p: int, mode: str = "seeded", seed: int = 0,
               dim: Optional[int] = None, max_tries: int = 1000) -> HashEmbedding:
    PrimeField(p)
    n = max(G.num_vertices, 1)
    s = digits_needed(n, p)
    d = hash_dimension(n, p) if dim is None else dim
    if d < 1:
        raise ParameterError("hash dimension must be positive")
    if mode == "seeded":
        for attempt in range(max_tries):
            rng = random.Random(seed + attempt)
            mats = tuple(tuple(tuple(rng.randrange(p) for _ in range(s)) for _ in range(d))
                         for _ in range(G.k))
            H = HashEmbedding(p, d, s, mats)
            if verify_hash(H, G):
                return H
        raise ConstructionFailed(f"no valid hash after {max_tries} seeds from {seed}")
    if mode == "derandomized":
        systems = _violation_systems(G, p, s)
        mats = [[[None] * s for _ in range(d)] for _ in range(G.k)]
        for part in range(G.k):
            for row in range(d):
                for c in range(s):
                    best_val, best_pot = 0, None
                    for val in range(p):
                        mats[part][row][c] = val
                        pot = _potential(systems, mats, p, d)
                        if best_pot is None or pot < best_pot:
                            best_val, best_pot = val, pot
                    mats[part][row][c] = best_val
        H = HashEmbedding(p, d, s, tuple(tuple(tuple(r) for r in M) for M in mats))
        if not verify_hash(H, G):
            raise ConstructionFailed("conditional expectations left collisions; "
                                     "the union bound does not hold at these parameters")
        return H
    raise ParameterError(f"unknown hash mode {mode!r}")


# -- reduction ---------------------------------------------------------------

def clique_to_vcsp(G: PartitionedGraph, p: int, H: Optional[HashEmbedding] = None,
                   mode: str = "seeded", seed: int = 0, dim: Optional[int] = None) -> Vector2Csp:
    if G.k < 1:
        raise GraphFormatError("graph has no parts")
    if H is None:
        H = build_hash(G, p, mode=mode, seed=seed, dim=dim)
    elif len(H.matrices) != G.k:
        raise GraphFormatError(f"embedding has {len(H.matrices)} parts, graph has {G.k}")
    img = H.images(G)
    unary = [[img[v] for v in part] for part in G.parts]
    binary = {(i, j): [] for i in range(G.k) for j in range(i + 1, G.k)}
    for u, w in G.edges:
        i, j = G.part_of[u], G.part_of[w]
        if i > j:
            i, j = j, i
        binary[(i, j)].append(_vsum(img[u], img[w], p))
    return Vector2Csp(G.k, p, H.dim, unary, binary)


def pull_back(H: HashEmbedding, G: PartitionedGraph, xs: Sequence[Vec]) -> Tuple[int, ...]:
    """The vertex of each part whose image is x_i (unique when H verifies)."""
    out = []
    for i, x in enumerate(xs):
        hits = [v for idx, v in enumerate(G.parts[i]) if H.image(i, idx) == tuple(x)]
        if len(hits) != 1:
            raise ConstructionFailed(f"x_{i} has {len(hits)} preimages in part {i}")
        out.append(hits[0])
    return tuple(out)


def vcsp_brute_solve(csp: Vector2Csp, budget: int = SOLVE_BUDGET) -> Optional[Tuple[Vec, ...]]:
    """First satisfying assignment in lexicographic order, or None."""
    size = 1
    for s in csp.unary:
        size *= len(s)
    if size > budget:
        raise BudgetExceeded(f"{size} assignments exceed budget {budget}", needed=size, budget=budget)
    if size == 0:
        return None
    allowed = {ij: set(s) for ij, s in csp.binary}
    p = csp.p
    xs: List[Vec] = []

    def rec(i):
        if i == csp.k:
            return True
        for x in csp.unary[i]:
            if all(_vsum(xs[j], x, p) in allowed[(j, i)] for j in range(i)):
                xs.append(x)
                if rec(i + 1):
                    return True
                xs.pop()
        return False

    return tuple(xs) if rec(0) else None


# -- text format -------------------------------------------------------------

def _fmt(v: Vec) -> str:
    return ",".join(str(c) for c in v)


def serialize_vcsp(csp: Vector2Csp) -> str:
    lines = [f"vcsp {csp.k} {csp.p} {csp.dim}"]
    for i, s in enumerate(csp.unary):
        lines.append(" ".join([f"S {i}"] + [_fmt(v) for v in s]))
    for (i, j), s in csp.binary:
        lines.append(" ".join([f"B {i} {j}"] + [_fmt(v) for v in s]))
    return "\n".join(lines) + "\n"


def parse_vcsp(text: str) -> Vector2Csp:
    header = None
    unary: Dict[int, List[Vec]] = {}
    binary: Dict[Tuple[int, int], List[Vec]] = {}

    def vec(tok, lineno):
        try:
            return tuple(int(c) for c in tok.split(","))
        except ValueError:
            raise ParseError(f"bad vector {tok!r}", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if not toks or toks[0].startswith("#"):
            continue
        try:
            if toks[0] == "vcsp":
                if header is not None or len(toks) != 4:
                    raise ParseError("expected a single 'vcsp k p d' header", lineno)
                header = tuple(int(t) for t in toks[1:])
            elif header is None:
                raise ParseError("missing 'vcsp k p d' header", lineno)
            elif toks[0] == "S":
                i = int(toks[1])
                if i in unary:
                    raise ParseError(f"duplicate S {i}", lineno)
                unary[i] = [vec(t, lineno) for t in toks[2:]]
            elif toks[0] == "B":
                i, j = int(toks[1]), int(toks[2])
                if (i, j) in binary:
                    raise ParseError(f"duplicate B {i} {j}", lineno)
                binary[(i, j)] = [vec(t, lineno) for t in toks[3:]]
            else:
                raise ParseError(f"unknown record {toks[0]!r}", lineno)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed record: {raw.strip()!r}", lineno) from None
    if header is None:
        raise ParseError("missing 'vcsp k p d' header")
    k, p, d = header
    if set(unary) != set(range(k)):
        raise ParseError(f"need S lines for exactly 0..{k - 1}")
    try:
        return Vector2Csp(k, p, d, [unary[i] for i in range(k)], binary)
    except DimensionError as exc:
        raise ParseError(str(exc)) from None
