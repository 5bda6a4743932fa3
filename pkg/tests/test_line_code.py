import random
from fractions import Fraction

import pytest

from gapclique.algebra import Line, PrimeField, canonical_line, horner
from gapclique.derivative_code import DcParams
from gapclique.errors import BudgetExceeded, ParameterError
from gapclique.line_code import (
    LineIndex,
    block_at,
    closest_line_tuple,
    lc_decoder,
    lc_encode,
    lc_tester,
    lc_waivers,
    line_index,
    line_vs_point_step,
    line_vs_point_test,
    majority_correct,
    point_function,
)
from gapclique.pltdc import (
    all_targets,
    check_smoothness,
    chi,
    corrupt,
    estimate_decode_success,
    estimate_rejection,
    psi,
)

F7, F13 = PrimeField(7), PrimeField(13)
P7 = DcParams(F7, 1, 1, tiny=True)
P13 = DcParams(F13, 0, 1, tiny=True)


def test_waivers():
    with pytest.raises(ParameterError):
        lc_waivers(DcParams(F7, 1, 1))
    w = lc_waivers(P7)
    assert w == ("p > max(3d, 9216)",)
    assert "r > 0" in lc_waivers(P13)


def test_line_index_shape():
    idx = line_index(F7, 2)
    # 49 singletons plus 49 * 8 / 7 lines
    assert len(idx) == 105
    assert all(ln.is_singleton for ln in idx.lines[:49])
    rest = idx.lines[49:]
    assert list(rest) == sorted(rest)
    assert len(idx.directions) == 8


@pytest.mark.parametrize("p", [3, 5])
def test_line_index_matches_point_sets(p):
    F = PrimeField(p)
    idx = LineIndex(F, 2)
    sets = set()
    for x in F.points(2):
        for h in F.points(2):
            sets.add(frozenset(tuple((a + lam * b) % p for a, b in zip(x, h)) for lam in range(p)))
    assert len(idx) == len(sets)
    for x in F.points(2):
        for h in F.points(2):
            pos, mu0, c = idx.locate(x, h)
            ln = idx.lines[pos]
            assert ln == canonical_line(F, x, h)
            assert idx.point_on(pos, mu0) == x
            assert tuple(c * e % p for e in ln.dir) == h or ln.is_singleton


def test_encode_examples():
    idx = line_index(F7, 2)
    w = lc_encode(P7, [(0, 1, 2, 3)])
    axis = w.at(Line((0, 0), (1, 0)))
    assert axis[0][0] == (0, 1, 0, 0)
    single = w.at(Line((2, 3), (0, 0)))
    assert single[0][0] == (5, 0, 0, 0)
    zero = lc_encode(P7, [(0, 0, 0, 0)])
    assert all(set(c for row in b for slot in row for c in slot) == {0} for b in zero.blocks)
    assert w.n == len(idx)


def test_line_point_consistency_exhaustive():
    idx = line_index(F7, 2)
    rng = random.Random(4)
    w = lc_encode(P7, [(0,) + tuple(rng.randrange(7) for _ in range(3)) for _ in range(2)])
    f = point_function(w, idx, 7)
    for pos, ln in enumerate(idx.lines):
        for mu in range(7):
            assert block_at(w.blocks[pos], mu, 7) == f[idx.point_on(pos, mu)]


def test_line_vs_point_clean_and_degenerate():
    idx = line_index(F7, 2)
    w = lc_encode(P7, [(0, 4, 4, 1)])
    assert estimate_rejection(line_vs_point_test(idx), w).count == 0
    bad = corrupt(w, {0: ((((1, 0, 0, 0),) * 3),)})
    assert line_vs_point_step(bad, idx, (0, 0), (0, 0))


def test_line_vs_point_corrupted_singleton():
    idx = line_index(F13, 2)
    w = lc_encode(P13, [(0, 5)])
    x0 = (3, 7)
    pos = idx.locate(x0, (0, 0))[0]
    old = w.blocks[pos][0][0]
    bad = corrupt(w, {pos: ((((old[0] + 1) % 13, 0),),)})
    est = estimate_rejection(line_vs_point_test(idx), bad)
    assert est.fraction == Fraction(1, 169) * Fraction(168, 169)


def test_line_vs_point_one_bad_line():
    idx = line_index(F13, 2)
    w = lc_encode(P13, [(0, 0)])
    pos = idx.position[Line((0, 1), (1, 2))]
    bad = corrupt(w, {pos: (((0, 1),),)})
    est = estimate_rejection(line_vs_point_test(idx), bad)
    # 12 points with mu != 0, each seen along 12 nonzero directions
    assert est.count == 12 * 12


def test_tester_clean_and_zeroed():
    t = lc_tester(P7)
    assert t.q == 11
    rng = random.Random(1)
    w = lc_encode(P7, [(0,) + tuple(rng.randrange(7) for _ in range(3))])
    assert estimate_rejection(t, w, mode="sampled", samples=800, seed=2).count == 0
    zeroed = w.with_blocks([tuple((row[0], (0,) * 4, (0,) * 4) for row in b) for b in w.blocks])
    est = estimate_rejection(t, zeroed, mode="sampled", samples=800, seed=2)
    assert est.fraction >= 1 - Fraction(9, 14)


def test_decoder_smooth_and_complete():
    dec = lc_decoder(P7, psi(1, 2))
    assert dec.randomness_size == 49 * 30 * 15 * 15
    rep = check_smoothness(dec, 105)
    assert rep and rep.expected == 2 * dec.randomness_size // 105
    w = lc_encode(P7, [(0, 1, 2, 3), (0, 6, 6, 2)])
    for tg in all_targets(4):
        want = tuple(tg.value(m, 7) for m in [(0, 1, 2, 3), (0, 6, 6, 2)])
        est = estimate_decode_success(lc_decoder(P7, tg), w, want, mode="sampled", samples=300, seed=9)
        assert est.count == est.total


def test_closest_line_tuple():
    pts = [(mu, (2 * mu % 13,)) for mu in range(13)]
    assert closest_line_tuple(F13, 1, pts) == ((0, 2),)
    pts[4] = (4, (0,))
    assert closest_line_tuple(F13, 1, pts) == ((0, 2),)
    # two samples fit many lines; the lexicographically first wins
    assert closest_line_tuple(F13, 0, [(0, (1,)), (1, (2,))]) == ((1,),)
    with pytest.raises(BudgetExceeded):
        closest_line_tuple(F13, 1, pts, budget=100)


def test_majority_fixed_point_and_correction():
    idx = line_index(F13, 2)
    w = lc_encode(P13, [(0, 9)])
    f = point_function(w, idx, 13)
    assert majority_correct(w, P13, idx) == f
    x0 = (5, 11)
    pos = idx.locate(x0, (0, 0))[0]
    bad = corrupt(w, {pos: ((((f[x0][0][0] + 3) % 13, 0),),)})
    fixed = majority_correct(bad, P13, idx)
    assert fixed[x0] == f[x0]
    assert fixed == f


def test_majority_zero_word():
    idx = line_index(F13, 2)
    w = lc_encode(P13, [(0, 0)])
    out = majority_correct(w, P13, idx)
    assert set(out.values()) == {((0,),)}
