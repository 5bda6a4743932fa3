"""Partitioned graphs, exact max-clique search, and the text graph format.

Format (one record per line, ``c`` lines and blanks ignored)::

    p kclique <k> <total_vertices> <edges>
    v <part> <id>
    e <id> <id>
    m <key> <value...>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import BudgetExceeded, FormatViolation, GraphFormatError, ParseError

CLIQUE_BUDGET = 10 ** 6


@dataclass(frozen=True)
class PartitionedGraph:
    parts: Tuple[Tuple[int, ...], ...]
    edges: FrozenSet[Tuple[int, int]]
    metadata: Tuple[Tuple[str, str], ...] = ()
    part_of: Dict[int, int] = field(default=None, compare=False, repr=False)

    def __init__(self, parts: Sequence[Sequence[int]], edges: Iterable[Tuple[int, int]] = (),
                 metadata: Optional[Mapping[str, object]] = None):
        parts = tuple(tuple(int(v) for v in part) for part in parts)
        part_of = {}
        for i, part in enumerate(parts):
            for v in part:
                if v in part_of:
                    raise GraphFormatError(f"vertex {v} appears twice")
                part_of[v] = i
        norm = set()
        for u, w in edges:
            u, w = int(u), int(w)
            if u not in part_of or w not in part_of:
                raise GraphFormatError(f"edge ({u}, {w}) uses an unknown vertex")
            if part_of[u] == part_of[w]:
                raise FormatViolation(f"edge ({u}, {w}) lies inside part {part_of[u]}")
            norm.add((u, w) if u < w else (w, u))
        meta = tuple(sorted((str(k), str(v)) for k, v in (metadata or {}).items()))
        for k, v in meta:
            if not k or any(ch.isspace() for ch in k) or "\n" in v:
                raise GraphFormatError(f"bad metadata entry {k!r}")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "metadata", meta)
        object.__setattr__(self, "part_of", part_of)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def num_vertices(self) -> int:
        return sum(len(p) for p in self.parts)

    def meta(self) -> Dict[str, str]:
        return dict(self.metadata)

    def adjacency(self) -> Dict[int, set]:
        adj = {v: set() for part in self.parts for v in part}
        for u, w in self.edges:
            adj[u].add(w)
            adj[w].add(u)
        return adj

    def has_edge(self, u: int, w: int) -> bool:
        return ((u, w) if u < w else (w, u)) in self.edges

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            return False
        return all(self.has_edge(vs[a], vs[b]) for a in range(len(vs)) for b in range(a + 1, len(vs)))


def max_clique(G: PartitionedGraph, budget: int = CLIQUE_BUDGET) -> Tuple[int, Tuple[int, ...]]:
    """Exact maximum clique, at most one vertex per part.

    Branch and bound over parts in ascending size; a branch is cut when the
    clique so far plus the number of later parts with a surviving candidate
    cannot beat the incumbent.  Raises BudgetExceeded (carrying the best
    clique found) after ``budget`` search nodes.
    """
    adj = G.adjacency()
    order = sorted(range(G.k), key=lambda i: (len(G.parts[i]), i))
    cands0 = [frozenset(G.parts[i]) for i in order]
    goal = sum(1 for c in cands0 if c)
    best: List = [0, ()]
    nodes = [0]

    def rec(chosen, cands):
        nodes[0] += 1
        if nodes[0] > budget:
            raise BudgetExceeded(f"clique search exceeded {budget} nodes",
                                 needed=None, budget=budget, best=(best[0], best[1]))
        if len(chosen) + sum(1 for c in cands if c) <= best[0]:
            return
        if not cands:
            best[0], best[1] = len(chosen), tuple(sorted(chosen))
            return
        head, rest = cands[0], cands[1:]
        for v in sorted(head):
            nv = adj[v]
            rec(chosen + [v], [c & nv for c in rest])
            if best[0] == goal:
                return
        rec(chosen, rest)

    rec([], cands0)
    return best[0], best[1]


# -- text format -------------------------------------------------------------

def serialize_graph(G: PartitionedGraph) -> str:
    lines = [f"p kclique {G.k} {G.num_vertices} {len(G.edges)}"]
    for i, part in enumerate(G.parts):
        lines += [f"v {i} {v}" for v in part]
    lines += [f"e {u} {w}" for u, w in sorted(G.edges)]
    lines += [f"m {k} {v}".rstrip() for k, v in G.metadata]
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def parse_graph(text: str) -> PartitionedGraph:
    header = None
    parts: List[List[int]] = []
    seen = set()
    edges = []
    meta: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tag, _, rest = line.partition(" ")
        toks = rest.split()
        if header is None:
            if tag != "p" or len(toks) != 4 or toks[0] != "kclique":
                raise ParseError("expected header 'p kclique <k> <vertices> <edges>'", lineno)
            header = tuple(_int(t, lineno) for t in toks[1:])
            if min(header) < 0:
                raise ParseError("header counts must be non-negative", lineno)
            parts = [[] for _ in range(header[0])]
            continue
        if tag == "p":
            raise ParseError("duplicate header", lineno)
        if tag == "v":
            if len(toks) != 2:
                raise ParseError("expected 'v <part> <id>'", lineno)
            part, vid = _int(toks[0], lineno), _int(toks[1], lineno)
            if not 0 <= part < header[0]:
                raise ParseError(f"part {part} outside [0, {header[0]})", lineno)
            if vid in seen:
                raise ParseError(f"duplicate vertex {vid}", lineno)
            seen.add(vid)
            parts[part].append(vid)
        elif tag == "e":
            if len(toks) != 2:
                raise ParseError("expected 'e <id> <id>'", lineno)
            u, w = _int(toks[0], lineno), _int(toks[1], lineno)
            for x in (u, w):
                if x not in seen:
                    raise ParseError(f"edge uses undeclared vertex {x}", lineno)
            if u == w:
                raise ParseError(f"self-loop on {u}", lineno)
            edges.append((u, w, lineno))
        elif tag == "m":
            key, _, value = rest.strip().partition(" ")
            if not key:
                raise ParseError("expected 'm <key> <value>'", lineno)
            meta[key] = value.strip()
        else:
            raise ParseError(f"unknown record type {tag!r}", lineno)
    if header is None:
        raise ParseError("missing header")
    part_of = {v: i for i, part in enumerate(parts) for v in part}
    norm = set()
    for u, w, lineno in edges:
        if part_of[u] == part_of[w]:
            raise FormatViolation(f"line {lineno}: edge ({u}, {w}) lies inside part {part_of[u]}")
        norm.add((min(u, w), max(u, w)))
    if len(seen) != header[1]:
        raise ParseError(f"header declares {header[1]} vertices, found {len(seen)}")
    if len(norm) != header[2]:
        raise ParseError(f"header declares {header[2]} edges, found {len(norm)}")
    return PartitionedGraph(parts, norm, meta)


def load_graph(path) -> PartitionedGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def save_graph(G: PartitionedGraph, path):
    with open(path, "w") as fh:
        fh.write(serialize_graph(G))


def relabel(parts: Sequence[Sequence[int]]) -> List[List[int]]:
    """Consecutive ids 0.. in part order, handy for generated graphs."""
    out, nxt = [], 0
    for part in parts:
        out.append(list(range(nxt, nxt + len(part))))
        nxt += len(part)
    return out


def complete_partite(sizes: Sequence[int]) -> PartitionedGraph:
    parts = relabel([[None] * s for s in sizes])
    edges = [(u, w) for i in range(len(parts)) for j in range(i + 1, len(parts))
             for u in parts[i] for w in parts[j]]
    return PartitionedGraph(parts, edges)
