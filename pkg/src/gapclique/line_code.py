"""Line code: restrictions of every low-order partial of q to every line of F^{2m}.

Positions are canonical lines (singletons first).  One lane of a block is a
tuple over the stored derivative indices; each entry holds the ``d + 1``
coefficients of that partial restricted to the line, in the line's
canonical parameterization ``base + mu * dir``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    Line,
    PolyTuple,
    PrimeField,
    canonical_line,
    compose_affine,
    falling,
    horner,
    restrict_to_line,
    vaxpy,
)
from .derivative_code import (
    DcParams,
    decode_from_partials,
    derivative_table,
    directional_derivatives,
    message_poly,
    nonzero_pair,
    sum_form,
)
from .errors import BudgetExceeded, ParameterError, ShapeError
from .pltdc import DecoderSpec, ParallelWord, Target, TesterSpec, mixed_radix

FIELD_FLOOR = 9216


def lc_waivers(params: DcParams) -> Tuple[str, ...]:
    """Hypotheses of the line code that ``params`` violates; strict mode refuses any."""
    p, d = params.field.p, params.d
    waived = list(params.waived)
    if p <= max(3 * d, FIELD_FLOOR):
        waived.append(f"p > max(3d, {FIELD_FLOOR})")
    if waived and not params.tiny:
        raise ParameterError("line code parameters violate: " + "; ".join(waived))
    return tuple(dict.fromkeys(waived))


def canonical_directions(field: PrimeField, dim: int) -> List[Tuple[int, ...]]:
    """One direction per line through a point: first nonzero coordinate equal to 1."""
    out = []
    for h in field.points(dim):
        nz = next((c for c in h if c), None)
        if nz == 1:
            out.append(h)
    return out


class LineIndex:
    """All canonical lines of F^dim: singletons by base, then the rest sorted."""

    def __init__(self, field: PrimeField, dim: int):
        self.field = field
        self.dim = dim
        zero = (0,) * dim
        singles = [Line(x, zero) for x in field.points(dim)]
        self.directions = canonical_directions(field, dim)
        full = set()
        for x in field.points(dim):
            for e in self.directions:
                full.add(canonical_line(field, x, e))
        self.lines: Tuple[Line, ...] = tuple(singles) + tuple(sorted(full))
        self.position: Dict[Line, int] = {ln: i for i, ln in enumerate(self.lines)}
        self._cache: Dict[Tuple, Tuple[int, int, int]] = {}

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def locate(self, x, h) -> Tuple[int, int, int]:
        """(position, mu0, c) with x = base + mu0 dir and h = c dir on the line through x."""
        key = (tuple(x), tuple(h))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        F = self.field
        ln = canonical_line(F, x, h)
        if ln.is_singleton:
            out = (self.position[ln], 0, 0)
        else:
            mu0 = ln.parameter_of(F, x)
            i = next(i for i, e in enumerate(ln.dir) if e)
            c = h[i] * pow(ln.dir[i], F.p - 2, F.p) % F.p
            out = (self.position[ln], mu0, c)
        self._cache[key] = out
        return out

    def point_on(self, pos: int, mu: int):
        ln = self.lines[pos]
        return vaxpy(self.field.p, ln.base, mu, ln.dir)


@lru_cache(maxsize=None)
def line_index(field: PrimeField, dim: int) -> LineIndex:
    return LineIndex(field, dim)


def encode_poly_lines(params: DcParams, Q: PolyTuple, index: Optional[LineIndex] = None) -> ParallelWord:
    """Line-indexed encoding of an arbitrary 2m-variate tuple Q (degree <= d)."""
    if Q.m != params.dim:
        raise ShapeError(f"polynomial has {Q.m} variables, expected {params.dim}")
    index = index or line_index(params.field, params.dim)
    d = params.d
    parts = derivative_table(Q, params.r)
    blocks = []
    for ln in index.lines:
        uni = [restrict_to_line(D, ln.base, ln.dir).padded(d) for D in parts]
        blocks.append(tuple(tuple(u.lane_coeffs(lane) for u in uni) for lane in range(Q.t)))
    return ParallelWord(index.lines, tuple(blocks), Q.t, index.position)


def lc_encode(params: DcParams, messages: Sequence[Sequence[int]],
              index: Optional[LineIndex] = None) -> ParallelWord:
    lc_waivers(params)
    return encode_poly_lines(params, sum_form(message_poly(params, messages)), index)


# -- reading symbols ---------------------------------------------------------

def block_at(block, mu: int, p: int):
    """Per lane, the table of derivative values at parameter ``mu`` of the line."""
    return tuple(tuple(horner(c, mu, p) for c in row) for row in block)


def point_function(word: ParallelWord, index: LineIndex, p: int):
    """f(x) := singleton symbol at x evaluated at 0, for every x (dict)."""
    zero = (0,) * index.dim
    return {x: block_at(word.blocks[index.locate(x, zero)[0]], 0, p)
            for x in index.field.points(index.dim)}


def reparameterize(block, mu0: int, c: int, p: int):
    """Coefficients of lam -> P(mu0 + c lam) for every lane and derivative slot."""
    return tuple(tuple(tuple(compose_affine(coeffs, mu0, c, p)) for coeffs in row) for row in block)


def line_vs_point_step(word: ParallelWord, index: LineIndex, x, h) -> bool:
    p = index.field.p
    zero = (0,) * index.dim
    spos, _, _ = index.locate(x, zero)
    lpos, mu0, _ = index.locate(x, h)
    return block_at(word.blocks[spos], 0, p) == block_at(word.blocks[lpos], mu0, p)


def line_vs_point_test(index: LineIndex) -> TesterSpec:
    """Two-query test alone; r <-> (x, h), x most significant."""
    F, D = index.field, index.dim
    n = F.p ** D
    zero = (0,) * D

    def draw(r):
        ix, ih = divmod(r, n)
        return F.point_at(ix, D), F.point_at(ih, D)

    def queries(r):
        x, h = draw(r)
        return (index.locate(x, zero)[0], index.locate(x, h)[0])

    def accept(r, blocks):
        x, h = draw(r)
        mu0 = index.locate(x, h)[1]
        return block_at(blocks[0], 0, F.p) == block_at(blocks[1], mu0, F.p)

    return TesterSpec(n * n, 2, queries, accept, name="line-vs-point")


def derivative_check(field: PrimeField, ders, r: int, block, mu0: int, c: int, h) -> bool:
    """g^{(j)}(0) of the value slot against the chain rule on g(0), j = 1..r."""
    p = field.p
    g = reparameterize(block, mu0, c, p)
    for row in g:
        at0 = [coeffs[0] for coeffs in row]
        rhs = directional_derivatives(field, at0, ders, h, r)
        value = row[0]
        for j in range(1, r + 1):
            lhs = falling(j, j) * value[j] % p if j < len(value) else 0
            if lhs != rhs[j]:
                return False
    return True


# -- tester ------------------------------------------------------------------

def lc_tester(params: DcParams, index: Optional[LineIndex] = None) -> TesterSpec:
    """Line-vs-point, derivative consistency, and sum form; 11 queries.

    Randomness digits, most significant first: 17 points of F^{2m}
    (x1, h1 | x2, h2 | (x, y), then (h, h1, h2) for each of four points),
    followed by four ordered pairs of distinct nonzero scalars.
    """
    lc_waivers(params)
    F, r, m, D = params.field, params.r, params.m, params.dim
    p = F.p
    if p < 3:
        raise ParameterError("need at least two nonzero field elements")
    index = index or line_index(F, D)
    n = p ** D
    pairs = (p - 1) * (p - 2)
    radices = (n,) * 17 + (pairs,) * 4
    zero = (0,) * D
    zm = (0,) * m
    ders = params.ders

    def draw(rr):
        digits = mixed_radix(rr, radices)
        pts = [F.point_at(i, D) for i in digits[:17]]
        lams = [nonzero_pair(i, p) for i in digits[17:]]
        return pts, lams

    def decode_plan(pts, lams):
        xy = pts[4]
        x, y = xy[:m], xy[m:]
        plan = []
        for k, z in enumerate((xy, x + zm, zm + y, zm + x)):
            h, g1, g2 = pts[5 + 3 * k: 8 + 3 * k]
            l1, l2 = lams[k]
            z1, z2 = vaxpy(p, z, l1, h), vaxpy(p, z, l2, h)
            plan.append((h, l1, l2, index.locate(z1, g1), index.locate(z2, g2)))
        return plan

    def queries(rr):
        pts, lams = draw(rr)
        x1, h1, x2, h2 = pts[:4]
        qs = [index.locate(x1, zero)[0], index.locate(x1, h1)[0], index.locate(x2, h2)[0]]
        for _, _, _, a, b in decode_plan(pts, lams):
            qs += [a[0], b[0]]
        return tuple(qs)

    def accept(rr, blocks):
        pts, lams = draw(rr)
        x1, h1, x2, h2 = pts[:4]
        # (1) point value against the line through it
        mu0 = index.locate(x1, h1)[1]
        if block_at(blocks[0], 0, p) != block_at(blocks[1], mu0, p):
            return False
        # (2) derivative consistency along a fresh line
        _, mu0, c = index.locate(x2, h2)
        if not derivative_check(F, ders, r, blocks[2], mu0, c, h2):
            return False
        # (3) sum form from four two-query decodes
        got = []
        for k, (h, l1, l2, a, b) in enumerate(decode_plan(pts, lams)):
            rows1 = block_at(blocks[3 + 2 * k], a[1], p)
            rows2 = block_at(blocks[4 + 2 * k], b[1], p)
            got.append(decode_from_partials(F, ders, r, h, l1, l2, rows1, rows2))
        fxy, fx0, f0y, f0x = got
        if any((u - v - w) % p for u, v, w in zip(fxy, fx0, f0y)):
            return False
        return fx0 == f0x

    return TesterSpec(n ** 17 * pairs ** 4, 11, queries, accept, name="line")


# -- decoder -----------------------------------------------------------------

def lc_decoder(params: DcParams, target: Target, index: Optional[LineIndex] = None) -> DecoderSpec:
    """Randomness (h, (lam1, lam2), w1, w2), h most significant.

    ``w`` picks the line read at each point: values below p select the
    singleton, the rest one of the non-singleton lines through the point.
    Weighting the singleton p-fold makes every canonical line equally likely.
    """
    lc_waivers(params)
    F, r, D = params.field, params.r, params.dim
    p = F.p
    if p < 3:
        raise ParameterError("need at least two nonzero field elements")
    index = index or line_index(F, D)
    z = params.target_point(target)
    pairs = (p - 1) * (p - 2)
    dirs = index.directions
    W = p + len(dirs)
    n = p ** D
    radices = (n, pairs, W, W)
    zero = (0,) * D
    ders = params.ders

    def draw(rr):
        ih, ip, w1, w2 = mixed_radix(rr, radices)
        h = F.point_at(ih, D)
        l1, l2 = nonzero_pair(ip, p)
        return h, l1, l2, w1, w2

    def pick(point, w):
        return index.locate(point, zero if w < p else dirs[w - p])

    def located(rr):
        h, l1, l2, w1, w2 = draw(rr)
        a = pick(vaxpy(p, z, l1, h), w1)
        b = pick(vaxpy(p, z, l2, h), w2)
        return h, l1, l2, a, b

    def queries(rr):
        _, _, _, a, b = located(rr)
        return (a[0], b[0])

    def reconstruct(rr, blocks):
        h, l1, l2, a, b = located(rr)
        rows1 = block_at(blocks[0], a[1], p)
        rows2 = block_at(blocks[1], b[1], p)
        return decode_from_partials(F, ders, r, h, l1, l2, rows1, rows2)

    return DecoderSpec(n * pairs * W * W, target, queries, reconstruct, name=f"line[{target}]")


# -- plurality correction ----------------------------------------------------

MAJ_BUDGET = 10 ** 7


def closest_line_tuple(field: PrimeField, d: int, pts_vals: Sequence[Tuple[int, Tuple[int, ...]]],
                       budget: int = MAJ_BUDGET):
    """Degree-<=d univariate tuple closest to the samples; lexicographically first on ties.

    Candidates are enumerated as coefficient tuples (per coordinate, ascending
    powers, coordinates in order), so the first minimiser is the smallest one.
    """
    p = field.p
    T = len(pts_vals[0][1])
    total = p ** ((d + 1) * T) * len(pts_vals)
    if total > budget:
        raise BudgetExceeded(f"closest-tuple enumeration needs {total} steps", needed=total, budget=budget)
    # per coordinate, mismatch sets of each candidate polynomial
    per_coord = []
    for k in range(T):
        table = []
        for coeffs in itertools.product(range(p), repeat=d + 1):
            miss = frozenset(i for i, (lam, val) in enumerate(pts_vals)
                             if horner(coeffs, lam, p) != val[k])
            table.append((coeffs, miss))
        per_coord.append(table)
    best = None
    best_cost = None
    for combo in itertools.product(*per_coord):
        miss = frozenset().union(*(m for _, m in combo))
        cost = len(miss)
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best = tuple(c for c, _ in combo)
            if cost == 0:
                break
    return best


def majority_correct(word: ParallelWord, params: DcParams, index: Optional[LineIndex] = None,
                     budget: int = MAJ_BUDGET):
    """MAJ^f for the point function of ``word``; returns a dict point -> table.

    Tables are flattened per lane as ``tuple(lane tuples)`` like ``block_at``.
    """
    F, D, d = params.field, params.dim, params.d
    p = F.p
    index = index or line_index(F, D)
    f = point_function(word, index, p)
    t = word.ell
    width = len(params.ders)

    def flat(tab):
        return tuple(v for row in tab for v in row)

    def unflat(vec):
        return tuple(tuple(vec[i * width:(i + 1) * width]) for i in range(t))

    # P^f on every non-singleton line, evaluated lazily at its points
    fitted = {}
    for pos, ln in enumerate(index.lines):
        if ln.is_singleton:
            continue
        samples = [(mu, flat(f[index.point_on(pos, mu)])) for mu in range(p)]
        fitted[pos] = closest_line_tuple(F, d, samples, budget)
    out = {}
    for x in F.points(D):
        votes: Dict[Tuple[int, ...], int] = {}
        for h in F.points(D):
            pos, mu0, _ = index.locate(x, h)
            if pos in fitted:
                val = tuple(horner(c, mu0, p) for c in fitted[pos])
            else:
                val = flat(f[x])
            votes[val] = votes.get(val, 0) + 1
        top = max(votes.values())
        out[x] = unflat(min(v for v, c in votes.items() if c == top))
    return out
