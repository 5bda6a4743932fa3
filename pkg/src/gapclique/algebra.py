"""Exact arithmetic over prime fields and tuples of multivariate polynomials.

Field elements are plain ``int`` residues in ``[0, p)``.  A polynomial tuple
(``PolyTuple``) is ``t`` polynomials in ``m`` variables sharing one sparse
coefficient map ``exponent vector -> coefficient vector in F^t``; every
operation acts lane-wise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial, isqrt
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import (
    DimensionError,
    DuplicateNode,
    InversionOfZero,
    ParameterError,
    SingularSystem,
)

Vector = Tuple[int, ...]
Exponent = Tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in range(2, isqrt(n) + 1):
        if n % q == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ParameterError(f"field size must be prime, got {self.p!r}")

    def __len__(self):
        return self.p

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.p))

    def __call__(self, a: int) -> int:
        return a % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return field_inv(self, a)

    def pow(self, a, e):
        return pow(a % self.p, e, self.p)

    def nonzero(self) -> range:
        return range(1, self.p)

    def points(self, dim: int) -> Iterator[Vector]:
        """All points of F^dim, most significant coordinate first."""
        return itertools.product(range(self.p), repeat=dim)

    def point_index(self, x: Sequence[int]) -> int:
        idx = 0
        for c in x:
            idx = idx * self.p + c
        return idx

    def point_at(self, idx: int, dim: int) -> Vector:
        out = [0] * dim
        for i in range(dim - 1, -1, -1):
            idx, out[i] = divmod(idx, self.p)
        return tuple(out)


def field_inv(field: PrimeField, a: int) -> int:
    a %= field.p
    if a == 0:
        raise InversionOfZero(f"0 has no inverse in F_{field.p}")
    return pow(a, field.p - 2, field.p)


# -- vector helpers ----------------------------------------------------------

def vadd(p: int, x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple((a + b) % p for a, b in zip(x, y))


def vsub(p: int, x: Sequence[int], y: Sequence[int]) -> Vector:
    return tuple((a - b) % p for a, b in zip(x, y))


def vscale(p: int, c: int, x: Sequence[int]) -> Vector:
    return tuple((c * a) % p for a in x)


def vaxpy(p: int, x: Sequence[int], lam: int, h: Sequence[int]) -> Vector:
    """x + lam * h."""
    return tuple((a + lam * b) % p for a, b in zip(x, h))


# -- exponent vectors ---------------------------------------------------------

@lru_cache(maxsize=None)
def exponents_of_order(m: int, j: int) -> Tuple[Exponent, ...]:
    """S^m_j in descending lexicographic order, so x_1 comes before x_2."""
    if m == 0:
        return ((),) if j == 0 else ()
    out = []
    for first in range(j, -1, -1):
        for rest in exponents_of_order(m - 1, j - first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def exponents(m: int, d: int) -> Tuple[Exponent, ...]:
    """S^m_{<=d}, graded by order; order 0 (the value) is always first."""
    return tuple(v for j in range(d + 1) for v in exponents_of_order(m, j))


def monomial(x: Sequence[int], v: Exponent, p: int) -> int:
    out = 1
    for xi, vi in zip(x, v):
        if vi:
            out = out * pow(xi, vi, p) % p
    return out


def multinomial(v: Exponent) -> int:
    """|v|! / prod(v_i!) as an integer."""
    out = factorial(sum(v))
    for vi in v:
        out //= factorial(vi)
    return out


def falling(n: int, j: int) -> int:
    out = 1
    for i in range(j):
        out *= n - i
    return out


# -- multivariate polynomial tuples ------------------------------------------

@dataclass(frozen=True)
class PolyTuple:
    """``t`` polynomials in ``m`` variables of total degree at most ``d``."""

    field: PrimeField
    t: int
    m: int
    d: int
    coeffs: Dict[Exponent, Vector] = field(default_factory=dict)

    def __post_init__(self):
        p = self.field.p
        clean = {}
        for v, c in self.coeffs.items():
            v = tuple(v)
            if len(v) != self.m:
                raise DimensionError(f"exponent {v} has {len(v)} entries, expected {self.m}")
            if sum(v) > self.d:
                raise ParameterError(f"monomial {v} exceeds degree bound {self.d}")
            if len(c) != self.t:
                raise DimensionError(f"coefficient {c} has {len(c)} lanes, expected {self.t}")
            c = tuple(ci % p for ci in c)
            if any(c):
                clean[v] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def zero(cls, field, t, m, d):
        return cls(field, t, m, d, {})

    def is_zero(self):
        return not self.coeffs

    def lane(self, i: int) -> "PolyTuple":
        return PolyTuple(self.field, 1, self.m, self.d,
                         {v: (c[i],) for v, c in self.coeffs.items()})

    def __call__(self, x):
        return eval_poly(self, x)


def eval_poly(P: PolyTuple, x: Sequence[int]) -> Vector:
    if len(x) != P.m:
        raise DimensionError(f"point has dimension {len(x)}, polynomial has {P.m} variables")
    p = P.field.p
    acc = [0] * P.t
    for v, c in P.coeffs.items():
        mono = monomial(x, v, p)
        if mono:
            for i, ci in enumerate(c):
                acc[i] += ci * mono
    return tuple(a % p for a in acc)


def partial_derivative(P: PolyTuple, v: Exponent) -> PolyTuple:
    """Formal partial derivative d^{|v|} P / dx^v, lane-wise.

    The degree bound of the result drops to ``max(d - |v|, 0)``.
    """
    if len(v) != P.m:
        raise DimensionError(f"derivative multi-index {v} does not match {P.m} variables")
    p = P.field.p
    j = sum(v)
    out: Dict[Exponent, List[int]] = {}
    for e, c in P.coeffs.items():
        if any(ei < vi for ei, vi in zip(e, v)):
            continue
        scale = 1
        for ei, vi in zip(e, v):
            scale = scale * falling(ei, vi) % p
        if scale == 0:
            continue
        ne = tuple(ei - vi for ei, vi in zip(e, v))
        out[ne] = [(ci * scale) % p for ci in c]
    return PolyTuple(P.field, P.t, P.m, max(P.d - j, 0), {k: tuple(c) for k, c in out.items()})


# -- univariate polynomial tuples ---------------------------------------------

@dataclass(frozen=True)
class UniPolyTuple:
    """Univariate tuple ``sum_i coeffs[i] * lam^i`` with ``len(coeffs) == d + 1``."""

    field: PrimeField
    t: int
    coeffs: Tuple[Vector, ...]

    def __post_init__(self):
        p = self.field.p
        cs = tuple(tuple(ci % p for ci in c) for c in self.coeffs)
        if not cs:
            raise ParameterError("a univariate tuple needs at least one coefficient")
        for c in cs:
            if len(c) != self.t:
                raise DimensionError(f"coefficient {c} has {len(c)} lanes, expected {self.t}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def d(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam: int) -> Vector:
        p = self.field.p
        acc = [0] * self.t
        for c in reversed(self.coeffs):
            acc = [(a * lam + ci) % p for a, ci in zip(acc, c)]
        return tuple(acc)

    def derivative(self, j: int = 1) -> "UniPolyTuple":
        """j-th formal derivative, keeping the same coefficient count."""
        p = self.field.p
        cs = []
        for i in range(len(self.coeffs)):
            if i + j < len(self.coeffs):
                s = falling(i + j, j) % p
                cs.append(tuple((s * c) % p for c in self.coeffs[i + j]))
            else:
                cs.append((0,) * self.t)
        return UniPolyTuple(self.field, self.t, tuple(cs))

    def padded(self, d: int) -> "UniPolyTuple":
        if d < self.d:
            if any(any(c) for c in self.coeffs[d + 1:]):
                raise ParameterError(f"cannot pad a degree-{self.d} tuple down to {d}")
            return UniPolyTuple(self.field, self.t, self.coeffs[: d + 1])
        extra = ((0,) * self.t,) * (d - self.d)
        return UniPolyTuple(self.field, self.t, self.coeffs + extra)

    def lane_coeffs(self, i: int) -> Vector:
        return tuple(c[i] for c in self.coeffs)


def _poly_mul(a: List[int], b: List[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [c % p for c in out]


def _linear_power(base: int, slope: int, e: int, p: int) -> List[int]:
    """Coefficients of (base + slope * lam)^e."""
    return [comb(e, i) * pow(base, e - i, p) * pow(slope, i, p) % p for i in range(e + 1)]


def restrict_to_line(P: PolyTuple, base: Sequence[int], direction: Sequence[int]) -> UniPolyTuple:
    """Coefficients of lam -> P(base + lam * direction), padded to d + 1 entries."""
    if len(base) != P.m or len(direction) != P.m:
        raise DimensionError("line and polynomial dimensions differ")
    p = P.field.p
    acc = [[0] * P.t for _ in range(P.d + 1)]
    for e, c in P.coeffs.items():
        uni = [1]
        for b, h, ei in zip(base, direction, e):
            if ei:
                uni = _poly_mul(uni, _linear_power(b, h, ei, p), p)
        for i, u in enumerate(uni):
            if u:
                row = acc[i]
                for lane, cl in enumerate(c):
                    row[lane] += u * cl
    return UniPolyTuple(P.field, P.t, tuple(tuple(x % p for x in row) for row in acc))


def interpolate_univariate(field: PrimeField, samples: Sequence[Tuple[int, Sequence[int]]]) -> UniPolyTuple:
    """Lagrange interpolation of ``len(samples) - 1`` degree tuple."""
    p = field.p
    if not samples:
        raise ParameterError("need at least one sample")
    nodes = [lam % p for lam, _ in samples]
    if len(set(nodes)) != len(nodes):
        raise DuplicateNode(f"repeated interpolation node in {nodes}")
    t = len(samples[0][1])
    n = len(samples)
    acc = [[0] * t for _ in range(n)]
    for i, (xi, yi) in enumerate(zip(nodes, (s[1] for s in samples))):
        basis = [1]
        denom = 1
        for j, xj in enumerate(nodes):
            if j != i:
                basis = _poly_mul(basis, [(-xj) % p, 1], p)
                denom = denom * (xi - xj) % p
        scale = pow(denom, p - 2, p)
        for k, bk in enumerate(basis):
            w = bk * scale % p
            if w:
                row = acc[k]
                for lane in range(t):
                    row[lane] += w * yi[lane]
    return UniPolyTuple(field, t, tuple(tuple(x % p for x in row) for row in acc))


def compose_affine(coeffs: Sequence[int], shift: int, scale: int, p: int) -> List[int]:
    """Coefficients of lam -> P(shift + scale * lam) for a single polynomial P."""
    out = [0] * len(coeffs)
    lin = [shift % p, scale % p]
    for c in reversed(coeffs):
        # out = out * lin + c, truncated to the original length
        nxt = [0] * len(coeffs)
        for i, o in enumerate(out):
            if o:
                nxt[i] += o * lin[0]
                if i + 1 < len(nxt):
                    nxt[i + 1] += o * lin[1]
        nxt[0] += c
        out = [x % p for x in nxt]
    return out


def horner(coeffs: Sequence[int], lam: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * lam + c) % p
    return acc


# -- linear algebra mod p -----------------------------------------------------

def solve_linear(field: PrimeField, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]):
    """Solve A X = B over F_p by Gauss-Jordan elimination.

    ``B`` has one row per equation (a right-hand side vector per row).
    Returns ``(X, det)``; raises SingularSystem when A is singular.
    """
    p = field.p
    n = len(A)
    M = [[a % p for a in A[i]] + [b % p for b in B[i]] for i in range(n)]
    width = len(M[0]) if n else 0
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col]), None)
        if pivot is None:
            raise SingularSystem("coefficient matrix is singular")
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            det = -det
        pv = M[col][col]
        det = det * pv % p
        inv = pow(pv, p - 2, p)
        M[col] = [x * inv % p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[col])]
    X = [tuple(row[n:width]) for row in M]
    return X, det % p


def determinant(field: PrimeField, A: Sequence[Sequence[int]]) -> int:
    """Determinant by elimination; 0 for singular matrices."""
    try:
        _, det = solve_linear(field, A, [()] * len(A))
    except SingularSystem:
        return 0
    return det


def rank(field: PrimeField, rows: Iterable[Sequence[int]]) -> int:
    p = field.p
    basis: Dict[int, List[int]] = {}
    for row in rows:
        if _reduce_into(basis, list(row), p):
            pass
    return len(basis)


def _reduce_into(basis: Dict[int, List[int]], row: List[int], p: int) -> bool:
    """Reduce ``row`` against an echelon ``basis``; add it if independent."""
    row = [x % p for x in row]
    for col, brow in basis.items():
        if row[col]:
            f = row[col]
            row = [(x - f * y) % p for x, y in zip(row, brow)]
    lead = next((i for i, x in enumerate(row) if x), None)
    if lead is None:
        return False
    inv = pow(row[lead], p - 2, p)
    row = [x * inv % p for x in row]
    for col, brow in basis.items():
        if brow[lead]:
            f = brow[lead]
            basis[col] = [(x - f * y) % p for x, y in zip(brow, row)]
    basis[lead] = row
    return True


class IncrementalRank:
    """Row-by-row rank tracker used for greedy point selection."""

    def __init__(self, field: PrimeField):
        self.p = field.p
        self.basis: Dict[int, List[int]] = {}

    def add(self, row: Sequence[int]) -> bool:
        return _reduce_into(self.basis, list(row), self.p)

    def __len__(self):
        return len(self.basis)


# -- confluent Vandermonde ---------------------------------------------------

def confluent_matrix(field: PrimeField, lam1: int, lam2: int, r: int) -> List[List[int]]:
    """Rows g^{(i)}(lam1), i = 0..r, then g^{(i)}(lam2), for degree d = 2r + 1."""
    p = field.p
    d = 2 * r + 1
    rows = []
    for lam in (lam1, lam2):
        for i in range(r + 1):
            rows.append([falling(j, i) * pow(lam, j - i, p) % p if j >= i else 0
                         for j in range(d + 1)])
    return rows


def confluent_determinant_formula(field: PrimeField, lam1: int, lam2: int, r: int) -> int:
    p = field.p
    out = pow((lam2 - lam1) % p, (r + 1) ** 2, p)
    for i in range(1, r + 1):
        out = out * factorial(i) ** 2 % p
    return out


def solve_confluent_vandermonde(
    field: PrimeField,
    lam1: int,
    lam2: int,
    vals1: Sequence[Sequence[int]],
    vals2: Sequence[Sequence[int]],
) -> UniPolyTuple:
    """Recover the degree-(2r+1) tuple g from g^{(j)}(lam1), g^{(j)}(lam2), j = 0..r."""
    if len(vals1) != len(vals2) or not vals1:
        raise DimensionError("need the same number r+1 >= 1 of derivative values at both nodes")
    r = len(vals1) - 1
    p = field.p
    if (lam1 - lam2) % p == 0:
        raise SingularSystem(f"nodes coincide: {lam1} = {lam2}")
    if r >= p:
        raise ParameterError(f"derivative order {r} needs p > r, got p = {p}")
    A = confluent_matrix(field, lam1, lam2, r)
    X, _ = solve_linear(field, A, list(vals1) + list(vals2))
    t = len(vals1[0])
    return UniPolyTuple(field, t, tuple(tuple(row) for row in X))


# -- lines -------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Line:
    """A line {base + lam * dir}; ``dir`` all zero encodes the singleton {base}."""

    base: Vector
    dir: Vector

    @property
    def is_singleton(self) -> bool:
        return not any(self.dir)

    def points(self, field: PrimeField) -> List[Vector]:
        if self.is_singleton:
            return [self.base]
        return [vaxpy(field.p, self.base, lam, self.dir) for lam in range(field.p)]

    def parameter_of(self, field: PrimeField, y: Sequence[int]) -> Optional[int]:
        """lam with base + lam * dir == y, or None if y is off the line."""
        p = field.p
        if self.is_singleton:
            return 0 if tuple(y) == self.base else None
        i = next(i for i, h in enumerate(self.dir) if h)
        lam = (y[i] - self.base[i]) * pow(self.dir[i], p - 2, p) % p
        return lam if vaxpy(p, self.base, lam, self.dir) == tuple(y) else None


def canonical_line(field: PrimeField, x: Sequence[int], h: Sequence[int]) -> Line:
    """Lexicographically smallest (base, dir) pair spanning the same point set."""
    p = field.p
    x = tuple(c % p for c in x)
    h = tuple(c % p for c in h)
    if len(x) != len(h):
        raise DimensionError("base and direction dimensions differ")
    if not any(h):
        return Line(x, h)
    base = min(vaxpy(p, x, lam, h) for lam in range(p))
    direction = min(vscale(p, c, h) for c in range(1, p))
    return Line(base, direction)
