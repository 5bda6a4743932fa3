"""FGLSS-style reduction from vector 2CSP to gap clique through a PLTDC.

One part per tester randomness r; its vertices are the accepting
assignments to the positions queried under r.  Two vertices stay adjacent
when they agree on shared positions and no decoder whose two queries fall
inside their joint view decodes a value outside the matching constraint set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import PrimeField
from .errors import BudgetExceeded, DimensionError, ParameterError
from .graph import PartitionedGraph
from .hadamard import HadamardCode, had_decoder, had_encode, had_tester
from .pltdc import DecoderSpec, ParallelWord, Target, TesterSpec, all_targets
from .vcsp import Vector2Csp

VERTEX_BUDGET = 10 ** 7


@dataclass(frozen=True)
class PltdcCode:
    """Everything the reduction needs from a code: encoder, tester, decoders."""

    name: str
    field: PrimeField
    k: int
    n: int
    symbols: Tuple[object, ...]
    tester: TesterSpec
    decoders: Dict[Target, DecoderSpec]
    encode: Callable[[Sequence[Sequence[int]]], ParallelWord]

    @property
    def q(self) -> int:
        return self.tester.q

    @property
    def R_T(self) -> int:
        return self.tester.randomness_size

    @property
    def R_D(self) -> int:
        return max(d.randomness_size for d in self.decoders.values())


def hadamard_pltdc(field: PrimeField, k: int) -> PltdcCode:
    code = HadamardCode(field, k)
    decs = {tg: had_decoder(code, tg) for tg in all_targets(k)}
    return PltdcCode("hadamard", field, k, code.n, tuple(range(field.p)),
                     had_tester(code), decs, lambda msgs: had_encode(code, msgs))


@dataclass(frozen=True)
class FglssConfig:
    code: PltdcCode
    delta: Fraction
    eps_T: Fraction
    t: int
    eps_D: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "eps_T", Fraction(self.eps_T))
        if self.eps_D is None:
            # 2-query smooth decoding at tolerance 5 delta
            object.__setattr__(self, "eps_D", 1 - 10 * self.delta)
        else:
            object.__setattr__(self, "eps_D", Fraction(self.eps_D))

    @property
    def K(self) -> int:
        return self.code.R_T

    @property
    def threshold(self) -> int:
        """Smallest clique size the soundness case must avoid."""
        return ceil(self.eps_T * self.K)


def hadamard_config(field: PrimeField, k: int, delta, t: int) -> FglssConfig:
    """Hadamard instance with the tester's soundness eps_T = 1 - delta / 2."""
    delta = Fraction(delta)
    return FglssConfig(hadamard_pltdc(field, k), delta, 1 - delta / 2, t)


def validate_params(cfg: FglssConfig) -> List[str]:
    """Every violated numeric hypothesis, by name; empty when all hold."""
    c = cfg.code
    out = []
    if not 0 < cfg.delta < Fraction(1, 12):
        out.append("δ < 1/12")
    if not cfg.delta > 0 or not 1 / cfg.delta < c.n:
        out.append("1/δ < k'")
    if not c.n <= c.R_T:
        out.append("k' ≤ R_T")
    if any(not c.n <= d.randomness_size for d in c.decoders.values()):
        out.append("k' ≤ R_D")
    if not cfg.eps_T * c.R_T >= 2:
        out.append("ε_T R_T ≥ 2")
    if not c.q > 1:
        out.append("q > 1")
    if not 0 < cfg.eps_T < 1:
        out.append("0 < ε_T < 1")
    if not 0 < cfg.eps_D < 1:
        out.append("0 < ε_D < 1")
    return out


@dataclass
class FglssInstance:
    """Output graph plus the configuration behind every vertex."""

    graph: PartitionedGraph
    configs: Dict[int, Tuple[int, Tuple[object, ...]]]
    cfg: FglssConfig
    waived: Tuple[str, ...] = ()

    def vertex_for(self, r: int, word: ParallelWord) -> Optional[int]:
        """The vertex of part r that agrees with ``word`` on its queries."""
        want = tuple(word.blocks[pos] for pos in self.cfg.code.tester.queries(r))
        for v in self.graph.parts[r]:
            if self.configs[v][1] == want:
                return v
        return None

    def canonical_clique(self, word: ParallelWord) -> Tuple[Optional[int], ...]:
        return tuple(self.vertex_for(r, word) for r in range(self.cfg.K))


def _blocks(code: PltdcCode, t: int):
    return list(itertools.product(code.symbols, repeat=t))


def accepting_configs(code: PltdcCode, t: int, r: int, budget: int = VERTEX_BUDGET):
    """Sorted accepting q-tuples of blocks under randomness r."""
    qs = list(code.tester.queries(r))
    distinct = sorted(set(qs))
    alphabet = _blocks(code, t)
    total = len(alphabet) ** len(distinct)
    if total > budget:
        raise BudgetExceeded(f"part {r} needs {total} configurations", needed=total, budget=budget)
    out = []
    for combo in itertools.product(alphabet, repeat=len(distinct)):
        assign = dict(zip(distinct, combo))
        blocks = tuple(assign[pos] for pos in qs)
        if code.tester.accept(r, blocks):
            out.append(blocks)
    out.sort()
    return out


def build_fglss_instance(csp: Vector2Csp, cfg: FglssConfig, enforce: str = "strict",
                         budget: int = VERTEX_BUDGET) -> FglssInstance:
    code = cfg.code
    if csp.k != code.k:
        raise DimensionError(f"instance has {csp.k} variables, code message length is {code.k}")
    if csp.p != code.field.p:
        raise DimensionError(f"instance is over F_{csp.p}, code over F_{code.field.p}")
    if csp.dim != cfg.t:
        raise DimensionError(f"instance dimension {csp.dim} differs from parallelization {cfg.t}")
    violations = validate_params(cfg)
    if enforce == "strict":
        if violations:
            raise ParameterError("hypotheses violated: " + "; ".join(violations))
        waived = ()
    elif enforce == "tiny":
        hard = [v for v in violations if v in ("δ < 1/12", "ε_T R_T ≥ 2")]
        if hard:
            raise ParameterError("tiny mode still requires: " + "; ".join(hard))
        waived = tuple(violations)
    else:
        raise ParameterError(f"unknown enforcement mode {enforce!r}")
    per_part = len(code.symbols) ** (cfg.t * code.q)
    if per_part > budget:
        raise BudgetExceeded(f"|Σ2|^(tq) = {per_part} exceeds the vertex budget {budget}",
                             needed=per_part, budget=budget)

    R_T = code.R_T
    var = [tuple(code.tester.queries(r)) for r in range(R_T)]
    parts, configs, views = [], {}, {}
    nxt = 0
    for r in range(R_T):
        ids = []
        for blocks in accepting_configs(code, cfg.t, r, budget):
            configs[nxt] = (r, blocks)
            views[nxt] = dict(zip(var[r], blocks))
            ids.append(nxt)
            nxt += 1
        parts.append(ids)

    unary = [set(s) for s in csp.unary]
    binary = {ij: set(s) for ij, s in csp.binary}
    checks = []
    for tg in all_targets(code.k):
        dec = code.decoders[tg]
        allowed = unary[tg.i] if not tg.is_pair else binary[(tg.i, tg.j)]
        for rd in range(dec.randomness_size):
            checks.append((dec, rd, tuple(dec.queries(rd)), allowed))

    edges = []
    for r1 in range(R_T):
        for r2 in range(r1 + 1, R_T):
            shared = set(var[r1]) & set(var[r2])
            joint = set(var[r1]) | set(var[r2])
            relevant = [c for c in checks if set(c[2]) <= joint]
            for v in parts[r1]:
                pv = views[v]
                for w in parts[r2]:
                    pw = views[w]
                    if any(pv[pos] != pw[pos] for pos in shared):
                        continue
                    merged = dict(pv)
                    merged.update(pw)
                    ok = True
                    for dec, rd, qs, allowed in relevant:
                        got = tuple(dec.reconstruct(rd, [merged[pos] for pos in qs]))
                        if got not in allowed:
                            ok = False
                            break
                    if ok:
                        edges.append((v, w))

    meta = {
        "code": code.name,
        "q": code.q,
        "R_T": R_T,
        "R_D": code.R_D,
        "n": code.n,
        "t": cfg.t,
        "delta": cfg.delta,
        "eps_T": cfg.eps_T,
        "K": R_T,
        "threshold": cfg.threshold,
        "waived": ";".join(waived) if waived else "none",
    }
    for r in range(R_T):
        meta[f"part.{r}"] = ",".join(str(pos) for pos in var[r])
    graph = PartitionedGraph(parts, edges, meta)
    return FglssInstance(graph, configs, cfg, waived)


def build_fglss(csp: Vector2Csp, cfg: FglssConfig, enforce: str = "strict",
                budget: int = VERTEX_BUDGET) -> PartitionedGraph:
    return build_fglss_instance(csp, cfg, enforce, budget).graph


def solution_word(cfg: FglssConfig, xs: Sequence[Sequence[int]]) -> ParallelWord:
    """Parallel encoding of an assignment: lane j carries (x_1[j], ..., x_k[j])."""
    lanes = [tuple(x[j] for x in xs) for j in range(cfg.t)]
    return cfg.code.encode(lanes)
