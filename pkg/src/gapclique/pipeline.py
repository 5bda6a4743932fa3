"""Clique -> vector 2CSP -> FGLSS gap clique (-> optional disperser product)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import PrimeField
from .errors import BudgetExceeded, ConstructionFailed, GapCliqueError, ParameterError
from .fglss import build_fglss_instance, hadamard_config, solution_word
from .gapamp import amplify_gap, build_disperser
from .graph import CLIQUE_BUDGET, PartitionedGraph, max_clique
from .vcsp import build_hash, clique_to_vcsp, hash_dimension, verify_hash, vcsp_brute_solve


@dataclass
class Report:
    entries: List[Tuple[str, str]] = field(default_factory=list)
    ok: bool = True

    def add(self, key, value):
        self.entries.append((key, str(value)))

    def get(self, key) -> Optional[str]:
        for k, v in self.entries:
            if k == key:
                return v
        return None

    def text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.entries)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except GapCliqueError as exc:
        exc.stage = name
        exc.args = (f"[{name}] {exc}",) + exc.args[1:]
        raise


def smallest_hash(G: PartitionedGraph, p: int, seed: int, mode: str, tries: int = 50):
    """Lowest dimension at which a verified embedding is found, up to the default one."""
    full = hash_dimension(max(G.num_vertices, 1), p)
    for dim in range(1, full + 1):
        try:
            if mode == "derandomized":
                return build_hash(G, p, mode=mode, dim=dim)
            return build_hash(G, p, mode="seeded", seed=seed, dim=dim, max_tries=tries)
        except ConstructionFailed:
            continue
    return build_hash(G, p, mode=mode, seed=seed, dim=full)


def run_pipeline(G: PartitionedGraph, p: int = 2, code: str = "hadamard", delta=Fraction(1, 13),
                 tiny: bool = False, seed: int = 0, hash_mode: str = "seeded",
                 budget: int = CLIQUE_BUDGET, amplify: Optional[Dict] = None) -> Report:
    if code != "hadamard":
        raise ParameterError(f"only the hadamard code fits the vertex budget, got {code!r}")
    delta = Fraction(delta)
    F = PrimeField(p)
    rep = Report()
    waived = []
    rep.add("input.parts", G.k)
    rep.add("input.vertices", G.num_vertices)
    rep.add("input.edges", len(G.edges))

    full_dim = hash_dimension(max(G.num_vertices, 1), p)
    if tiny:
        H = _stage("hash", smallest_hash, G, p, seed, hash_mode)
        if H.dim < full_dim:
            waived.append(f"hash dimension {H.dim} below ceil(5 log n / log p) = {full_dim}")
    else:
        H = _stage("hash", build_hash, G, p, mode=hash_mode, seed=seed)
    rep.add("hash.dim", H.dim)
    rep.add("hash.digits", H.s)
    rep.add("hash.verified", verify_hash(H, G))

    csp = _stage("vcsp", clique_to_vcsp, G, p, H)
    rep.add("vcsp.k", csp.k)
    rep.add("vcsp.dim", csp.dim)
    rep.add("vcsp.unary_sizes", ",".join(str(len(s)) for s in csp.unary))
    rep.add("vcsp.binary_sizes", ",".join(str(len(s)) for _, s in csp.binary))
    sol = _stage("vcsp-solve", vcsp_brute_solve, csp)
    rep.add("vcsp.satisfiable", sol is not None)

    cfg = hadamard_config(F, csp.k, delta, csp.dim)
    inst = _stage("fglss", build_fglss_instance, csp, cfg, "tiny" if tiny else "strict")
    waived.extend(inst.waived)
    fg = inst.graph
    rep.add("fglss.parts", fg.k)
    rep.add("fglss.vertices", fg.num_vertices)
    rep.add("fglss.edges", len(fg.edges))
    rep.add("fglss.K", cfg.K)
    rep.add("fglss.threshold", cfg.threshold)
    if sol is not None:
        clique = inst.canonical_clique(solution_word(cfg, sol))
        rep.add("fglss.canonical_clique", None not in clique and fg.is_clique(clique))

    try:
        size, _ = max_clique(fg, budget)
        rep.add("fglss.max_clique", size)
        if sol is not None:
            good = size == cfg.K
        else:
            good = size < cfg.threshold
        rep.add("fglss.gap_holds", good)
        rep.ok = rep.ok and good
    except BudgetExceeded as exc:
        rep.add("fglss.max_clique", f"budget exceeded (at least {exc.best[0]})")
        rep.add("fglss.gap_holds", "unknown")

    if amplify:
        D = _stage("disperser", build_disperser, fg.k, amplify["m"], amplify["l"], amplify["r"],
                   amplify["eps"], seed)
        amp = _stage("amplify", amplify_gap, fg, D)
        rep.add("amplify.parts", amp.k)
        rep.add("amplify.vertices", amp.num_vertices)
        rep.add("amplify.edges", len(amp.edges))
        try:
            size, _ = max_clique(amp, budget)
            rep.add("amplify.max_clique", size)
        except BudgetExceeded as exc:
            rep.add("amplify.max_clique", f"budget exceeded (at least {exc.best[0]})")

    rep.add("waived", "; ".join(waived) if waived else "none")
    rep.add("status", "ok" if rep.ok else "gap violated")
    return rep
