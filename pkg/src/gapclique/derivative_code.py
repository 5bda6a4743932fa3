"""Derivative code: values and all low-order partials of q(x, y) = p(x) + p(y).

Positions are the points of F^{2m}.  A row (one lane of a block) is a tuple
indexed by ``exponents(2m, r)``: entry ``v`` holds the partial derivative of
order ``v`` of q at the position.  Entry 0 is the value itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import List, Sequence, Tuple

from .algebra import (
    IncrementalRank,
    PolyTuple,
    PrimeField,
    eval_poly,
    exponents,
    exponents_of_order,
    interpolate_univariate,
    monomial,
    multinomial,
    partial_derivative,
    solve_confluent_vandermonde,
    solve_linear,
    vaxpy,
)
from .errors import ParameterError, ShapeError
from .pltdc import (
    DecoderSpec,
    ParallelWord,
    Target,
    TesterSpec,
    check_target,
    mixed_radix,
)


def select_interpolation_points(field: PrimeField, m: int, d: int) -> Tuple[Tuple[int, ...], ...]:
    """Greedy scan of F^m keeping points that raise the rank of the monomial matrix."""
    M = comb(m + d, d)
    if field.p <= d:
        raise ParameterError(f"need p > d, got p = {field.p}, d = {d}")
    if field.p ** m < M:
        raise ParameterError(f"p^m = {field.p ** m} is smaller than C(m+d, d) = {M}")
    mons = exponents(m, d)
    tracker = IncrementalRank(field)
    chosen = []
    for u in field.points(m):
        if tracker.add([monomial(u, v, field.p) for v in mons]):
            chosen.append(u)
            if len(chosen) == M:
                return tuple(chosen)
    raise ParameterError(f"could not find {M} interpolation points in F_{field.p}^{m}")


@dataclass(frozen=True)
class DcParams:
    field: PrimeField
    r: int
    m: int
    tiny: bool = False
    points: Tuple[Tuple[int, ...], ...] = dc_field(default=None)
    waived: Tuple[str, ...] = dc_field(default=())

    def __post_init__(self):
        p = self.field.p
        if self.r < 0 or self.m < 1:
            raise ParameterError("need r >= 0 and m >= 1")
        waived = list(self.waived)
        if self.r == 0:
            if not self.tiny:
                raise ParameterError("derivative order r must be positive")
            waived.append("r > 0")
        if p <= 2 * self.d:
            if not self.tiny:
                raise ParameterError(f"need p > 2d = {2 * self.d}, got p = {p}")
            waived.append("p > 2d")
        if self.points is None:
            object.__setattr__(self, "points", select_interpolation_points(self.field, self.m, self.d))
        elif len(self.points) != self.M:
            raise ParameterError(f"need {self.M} interpolation points, got {len(self.points)}")
        object.__setattr__(self, "waived", tuple(dict.fromkeys(waived)))

    @property
    def d(self) -> int:
        return 2 * self.r + 1

    @property
    def M(self) -> int:
        return comb(self.m + self.d, self.d)

    @property
    def dim(self) -> int:
        return 2 * self.m

    @property
    def n(self) -> int:
        return self.field.p ** self.dim

    @property
    def ders(self) -> Tuple[Tuple[int, ...], ...]:
        """Stored derivative multi-indices over the 2m variables."""
        return exponents(self.dim, self.r)

    def positions(self):
        return list(self.field.points(self.dim))

    def target_point(self, target: Target) -> Tuple[int, ...]:
        check_target(target, self.M)
        u = self.points[target.i]
        w = self.points[target.j] if target.is_pair else (0,) * self.m
        return tuple(u) + tuple(w)


def message_poly(params: DcParams, messages: Sequence[Sequence[int]]) -> PolyTuple:
    """The lane-wise degree-d polynomial p with p(u_i) = a_i.

    Reading a_i off q(u_i, 0) and the sum-form identity both need p(0) = 0,
    so messages whose interpolant misses the origin are refused.  With the
    default points u_1 is the origin and this just means a_1 = 0.
    """
    F, m, d = params.field, params.m, params.d
    if not messages or any(len(msg) != params.M for msg in messages):
        raise ShapeError(f"every lane must have length {params.M}")
    mons = exponents(m, d)
    A = [[monomial(u, v, F.p) for v in mons] for u in params.points]
    B = [tuple(msg[i] for msg in messages) for i in range(params.M)]
    X, _ = solve_linear(F, A, B)
    P = PolyTuple(F, len(messages), m, d, dict(zip(mons, X)))
    if any(eval_poly(P, (0,) * m)):
        raise ParameterError("message polynomial must vanish at the origin "
                             f"(p(0) = {eval_poly(P, (0,) * m)})")
    return P


def sum_form(P: PolyTuple) -> PolyTuple:
    """q(x, y) = P(x) + P(y) in 2m variables."""
    m = P.m
    coeffs = {}
    zero = (0,) * m
    for v, c in P.coeffs.items():
        for e in (tuple(v) + zero, zero + tuple(v)):
            old = coeffs.get(e)
            coeffs[e] = c if old is None else tuple(a + b for a, b in zip(old, c))
    return PolyTuple(P.field, P.t, 2 * m, P.d, coeffs)


def derivative_table(Q: PolyTuple, r: int):
    """All partials of Q of order <= r, in ``exponents`` order."""
    return [partial_derivative(Q, v) for v in exponents(Q.m, r)]


def encode_poly(params: DcParams, Q: PolyTuple) -> ParallelWord:
    """Store every order-<=r partial of an arbitrary 2m-variate tuple Q at every point."""
    if Q.m != params.dim:
        raise ShapeError(f"polynomial has {Q.m} variables, expected {params.dim}")
    parts = derivative_table(Q, params.r)
    index = params.positions()
    blocks = []
    for z in index:
        vals = [eval_poly(D, z) for D in parts]
        blocks.append(tuple(tuple(col[lane] for col in vals) for lane in range(Q.t)))
    return ParallelWord(tuple(index), tuple(blocks), Q.t)


def dc_encode(params: DcParams, messages: Sequence[Sequence[int]]) -> ParallelWord:
    return encode_poly(params, sum_form(message_poly(params, messages)))


# -- chain rule --------------------------------------------------------------

def directional_derivatives(field: PrimeField, row: Sequence[int], ders, h: Sequence[int], r: int):
    """g^{(j)} for j = 0..r where g(lam) = f(z + lam h) and ``row`` holds the partials at z.

    Uses g^{(j)} = sum over |v| = j of (j! / v!) * d^v f * h^v.
    """
    p = field.p
    pos = {v: i for i, v in enumerate(ders)}
    out = []
    for j in range(r + 1):
        acc = 0
        for v in exponents_of_order(len(h), j):
            acc += multinomial(v) * row[pos[v]] * monomial(h, v, p)
        out.append(acc % p)
    return out


# -- testers -----------------------------------------------------------------

def flatten(block) -> Tuple[int, ...]:
    out = []

    def walk(x):
        if isinstance(x, int):
            out.append(x)
        else:
            for y in x:
                walk(y)

    walk(block)
    return tuple(out)


def line_consistent(field: PrimeField, d: int, values: Sequence[Sequence[int]]) -> bool:
    """Do values at lam = 0..d+1 lie on a degree-<=d tuple?"""
    g = interpolate_univariate(field, list(enumerate(values[: d + 1])))
    return g(d + 1) == tuple(values[d + 1])


def low_degree_test(field: PrimeField, m: int, d: int) -> TesterSpec:
    """Line test for F^m -> F^t: query x + lam h, lam = 0..d+1; r <-> (x, h)."""
    n = field.p ** m
    p = field.p

    def queries(r):
        ix, ih = divmod(r, n)
        x, h = field.point_at(ix, m), field.point_at(ih, m)
        return tuple(field.point_index(vaxpy(p, x, lam, h)) for lam in range(d + 2))

    def accept(r, blocks):
        return line_consistent(field, d, [flatten(b) for b in blocks])

    return TesterSpec(n * n, d + 2, queries, accept, name="low-degree")


def _values(blocks):
    """Lane-wise value entry (derivative index 0) of each block."""
    return [tuple(row[0] for row in b) for b in blocks]


def dc_tester(params: DcParams) -> TesterSpec:
    """Line low-degree test, derivative consistency, and sum form on one draw.

    Randomness bundles 9 points of F^{2m} (most significant first): the
    low-degree pair (x1, h1), the consistency pair (x2, h2), then the point
    (x, y) and four directions for the sum-form interpolations.
    """
    F, d, r, m = params.field, params.d, params.r, params.m
    p, D = F.p, params.dim
    n = params.n
    ders = params.ders
    radices = (n,) * 9
    zero = (0,) * m

    def draw(rr):
        return [F.point_at(i, D) for i in mixed_radix(rr, radices)]

    def queries(rr):
        x1, h1, x2, h2, xy, *hs = draw(rr)
        qs = [vaxpy(p, x1, lam, h1) for lam in range(d + 2)]
        qs += [vaxpy(p, x2, lam, h2) for lam in range(d + 1)]
        x, y = xy[:m], xy[m:]
        for z, h in zip((xy, x + zero, zero + y, zero + x), hs):
            qs += [vaxpy(p, z, lam, h) for lam in range(1, d + 2)]
        return tuple(F.point_index(z) for z in qs)

    def accept(rr, blocks):
        _, _, _, h2, *_ = draw(rr)
        # (1) every coordinate restricted to the line has degree <= d
        if not line_consistent(F, d, [flatten(b) for b in blocks[: d + 2]]):
            return False
        # (2) stored partials agree with derivatives along the line
        seg = blocks[d + 2: 2 * d + 3]
        g = interpolate_univariate(F, list(enumerate(_values(seg))))
        for j in range(1, r + 1):
            lhs = g.derivative(j)(0)
            rhs = tuple(directional_derivatives(F, row, ders, h2, r)[j] for row in seg[0])
            if lhs != rhs:
                return False
        # (3) sum form, from values interpolated at lam = 0 on four lines
        got = []
        start = 2 * d + 3
        for k in range(4):
            seg = blocks[start + k * (d + 1): start + (k + 1) * (d + 1)]
            g = interpolate_univariate(F, list(zip(range(1, d + 2), _values(seg))))
            got.append(g(0))
        fxy, fx0, f0y, f0x = got
        if any((a - b - c) % p for a, b, c in zip(fxy, fx0, f0y)):
            return False
        return fx0 == f0x

    return TesterSpec(n ** 9, 6 * d + 7, queries, accept, name="derivative")


# -- decoder -----------------------------------------------------------------

def nonzero_pair(idx: int, p: int) -> Tuple[int, int]:
    """Index in [0, (p-1)(p-2)) to an ordered pair of distinct nonzero elements."""
    a, b = divmod(idx, p - 2)
    lam1 = a + 1
    lam2 = b + 1 if b + 1 < lam1 else b + 2
    return lam1, lam2


def decode_from_partials(field: PrimeField, ders, r: int, h, lam1: int, lam2: int, rows1, rows2):
    """Lane-wise g(0) from the partials at z + lam1 h and z + lam2 h."""
    vals1 = [directional_derivatives(field, row, ders, h, r) for row in rows1]
    vals2 = [directional_derivatives(field, row, ders, h, r) for row in rows2]
    # transpose to per-order vectors over lanes
    v1 = [tuple(v[j] for v in vals1) for j in range(r + 1)]
    v2 = [tuple(v[j] for v in vals2) for j in range(r + 1)]
    g = solve_confluent_vandermonde(field, lam1, lam2, v1, v2)
    return g(0)


def dc_decoder(params: DcParams, target: Target) -> DecoderSpec:
    """Randomness (h, lam1, lam2) with lam1 != lam2 both nonzero; h most significant."""
    F, r = params.field, params.r
    p, D = F.p, params.dim
    z = params.target_point(target)
    if p < 3:
        raise ParameterError("need at least two nonzero field elements")
    pairs = (p - 1) * (p - 2)
    ders = params.ders

    def draw(rr):
        ih, ip = divmod(rr, pairs)
        return F.point_at(ih, D), nonzero_pair(ip, p)

    def queries(rr):
        h, (l1, l2) = draw(rr)
        return (F.point_index(vaxpy(p, z, l1, h)), F.point_index(vaxpy(p, z, l2, h)))

    def reconstruct(rr, blocks):
        h, (l1, l2) = draw(rr)
        return decode_from_partials(F, ders, r, h, l1, l2, blocks[0], blocks[1])

    return DecoderSpec(params.n * pairs, target, queries, reconstruct, name=f"derivative[{target}]")
