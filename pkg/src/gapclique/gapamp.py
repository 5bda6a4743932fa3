"""Dispersers and the tuple-product graph that amplifies a clique gap."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, ConstructionFailed, ParameterError, ParseError
from .graph import PartitionedGraph

VERIFY_BUDGET = 10 ** 6
PRODUCT_BUDGET = 10 ** 6


@dataclass(frozen=True)
class Disperser:
    k: int
    subsets: Tuple[Tuple[int, ...], ...]
    r: int
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        object.__setattr__(self, "subsets", tuple(tuple(sorted(s)) for s in self.subsets))
        sizes = {len(s) for s in self.subsets}
        if len(sizes) > 1:
            raise ParameterError(f"subsets have different sizes {sorted(sizes)}")
        for s in self.subsets:
            if len(set(s)) != len(s) or any(not 0 <= i < self.k for i in s):
                raise ParameterError(f"subset {s} is not a subset of [0, {self.k})")

    @property
    def m(self) -> int:
        return len(self.subsets)

    @property
    def ell(self) -> int:
        return len(self.subsets[0]) if self.subsets else 0

    @property
    def cover(self) -> Fraction:
        """Union size every r subsets must reach."""
        return (1 - self.eps) * self.k


def subset_size(k: int, r: int, eps) -> int:
    """ceil(3k / (eps r))."""
    eps = Fraction(eps)
    if eps <= 0 or r <= 0:
        raise ParameterError("need eps > 0 and r > 0")
    return ceil(Fraction(3 * k) / (eps * r))


def verify_disperser(D: Disperser, budget: int = VERIFY_BUDGET) -> bool:
    if not 1 <= D.r <= D.m:
        return False
    total = comb(D.m, D.r)
    if total > budget:
        raise BudgetExceeded(f"C({D.m}, {D.r}) = {total} unions exceed budget {budget}",
                             needed=total, budget=budget)
    need = D.cover
    for combo in itertools.combinations(D.subsets, D.r):
        if len(set().union(*combo)) < need:
            return False
    return True


def build_disperser(k: int, m: int, ell: int, r: int, eps, seed: int,
                    max_tries: int = 1000) -> Disperser:
    if not 1 <= ell <= k:
        raise ParameterError(f"subset size {ell} must lie in [1, k = {k}]")
    if not 1 <= r <= m:
        raise ParameterError(f"union threshold {r} must lie in [1, m = {m}]")
    for attempt in range(max_tries):
        rng = random.Random(seed + attempt)
        subsets = [tuple(sorted(rng.sample(range(k), ell))) for _ in range(m)]
        D = Disperser(k, tuple(subsets), r, eps)
        if verify_disperser(D):
            return D
    raise ConstructionFailed(f"no disperser after {max_tries} seeds from {seed}")


def amplify_gap(G: PartitionedGraph, D: Disperser, budget: int = PRODUCT_BUDGET) -> PartitionedGraph:
    """Part i of the result holds every choice of one vertex per part in I_i.

    Two tuples are adjacent iff all their vertices together form a clique of G.
    """
    if D.k != G.k:
        raise ParameterError(f"disperser universe {D.k} differs from part count {G.k}")
    sizes = []
    for I in D.subsets:
        size = 1
        for i in I:
            size *= len(G.parts[i])
        sizes.append(size)
    if sum(sizes) > budget:
        raise BudgetExceeded(f"{sum(sizes)} tuple vertices exceed budget {budget}",
                             needed=sum(sizes), budget=budget)
    tuples: List[Tuple[int, ...]] = []
    parts = []
    for I in D.subsets:
        ids = []
        for combo in itertools.product(*(G.parts[i] for i in I)):
            ids.append(len(tuples))
            tuples.append(combo)
        parts.append(ids)
    adj = G.adjacency()

    def clique(vs):
        vs = sorted(set(vs))
        return all(vs[b] in adj[vs[a]] for a in range(len(vs)) for b in range(a + 1, len(vs)))

    inner = [clique(tp) for tp in tuples]
    edges = []
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            for u in parts[a]:
                if not inner[u]:
                    continue
                for w in parts[b]:
                    if inner[w] and clique(tuples[u] + tuples[w]):
                        edges.append((u, w))
    meta = {"k": G.k, "m": D.m, "l": D.ell, "r": D.r, "eps": D.eps}
    for i, I in enumerate(D.subsets):
        meta[f"part.{i}"] = ",".join(map(str, I))
    return PartitionedGraph(parts, edges, meta)


def tuple_members(G: PartitionedGraph, D: Disperser) -> List[Tuple[int, ...]]:
    """Vertex tuples behind each id of ``amplify_gap(G, D)``, in id order."""
    out = []
    for I in D.subsets:
        out.extend(itertools.product(*(G.parts[i] for i in I)))
    return out


# -- text format -------------------------------------------------------------

def serialize_disperser(D: Disperser) -> str:
    lines = [f"disp {D.k} {D.m} {D.ell} {D.r} {D.eps}"]
    lines += [" ".join(map(str, s)) for s in D.subsets]
    return "\n".join(lines) + "\n"


def parse_disperser(text: str) -> Disperser:
    rows = [(n, ln.split()) for n, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not rows or rows[0][1][0] != "disp" or len(rows[0][1]) != 6:
        raise ParseError("expected header 'disp k m l r eps'", rows[0][0] if rows else None)
    try:
        k, m, ell, r = (int(x) for x in rows[0][1][1:5])
        eps = Fraction(rows[0][1][5])
    except ValueError:
        raise ParseError("bad header values", rows[0][0]) from None
    subsets = []
    for n, toks in rows[1:]:
        try:
            s = tuple(int(x) for x in toks)
        except ValueError:
            raise ParseError("subset entries must be integers", n) from None
        if len(s) != ell:
            raise ParseError(f"subset has {len(s)} entries, header says {ell}", n)
        subsets.append(s)
    if len(subsets) != m:
        raise ParseError(f"header declares {m} subsets, found {len(subsets)}")
    return Disperser(k, tuple(subsets), r, eps)
