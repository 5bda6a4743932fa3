import itertools
from fractions import Fraction

import pytest

from gapclique.algebra import PrimeField
from gapclique.errors import BudgetExceeded, InvalidTarget, ParameterError, ShapeError
from gapclique.hadamard import HadamardCode, had_decoder, had_encode, had_tester
from gapclique.pltdc import (
    DecoderSpec,
    PltdcParams,
    all_targets,
    check_smoothness,
    chi,
    corrupt,
    coverage_min,
    estimate_decode_success,
    estimate_rejection,
    mixed_radix,
    mixed_radix_encode,
    parallel_encode,
    psi,
    relative_distance,
    run_decode,
)

F2, F3 = PrimeField(2), PrimeField(3)


def test_mixed_radix_bijection():
    radices = (3, 4, 2)
    seen = set()
    for r in range(24):
        digits = mixed_radix(r, radices)
        assert mixed_radix_encode(digits, radices) == r
        seen.add(digits)
    assert len(seen) == 24
    assert mixed_radix(5, (2, 3)) == (1, 2)


def test_parallel_encode_lanes():
    code = HadamardCode(F2, 2)
    w = had_encode(code, [(1, 0), (0, 1)])
    assert w.at((1, 1)) == (1, 1)
    assert w.ell == 2 and w.n == 4
    z = had_encode(code, [(0, 0)] * 3)
    assert all(b == (0, 0, 0) for b in z.blocks)


def test_parallel_encode_ragged():
    with pytest.raises(ShapeError):
        parallel_encode(lambda m: m, [(1, 0), (1,)], [0, 1])
    with pytest.raises(ShapeError):
        parallel_encode(lambda m: m, [], [0])


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3)])
def test_lane_consistency_exhaustive(p, k):
    F = PrimeField(p)
    code = HadamardCode(F, k)
    msgs = list(itertools.product(range(p), repeat=k))
    for ell in (1, 2, 3):
        for lanes in itertools.islice(itertools.product(msgs, repeat=ell), 200):
            w = had_encode(code, lanes)
            for j, msg in enumerate(lanes):
                assert list(w.lane(j)) == code.encode_lane(msg)


def test_blr_fixed_word():
    code = HadamardCode(F2, 2)
    w = had_encode(code, [(1, 0)])
    assert [b[0] for b in w.blocks] == [0, 0, 1, 1]
    bad = corrupt(w, {3: (0,)})
    est = estimate_rejection(had_tester(code), bad)
    assert est.fraction == Fraction(6, 16) and est.exact


def test_sampled_determinism_and_budget():
    code = HadamardCode(F2, 2)
    bad = corrupt(had_encode(code, [(1, 0)]), {3: (0,)})
    t = had_tester(code)
    a = estimate_rejection(t, bad, mode="sampled", samples=500, seed=11)
    b = estimate_rejection(t, bad, mode="sampled", samples=500, seed=11)
    assert a == b and not a.exact and a.total == 500
    with pytest.raises(BudgetExceeded):
        estimate_rejection(t, bad, budget=15)
    with pytest.raises(ParameterError):
        estimate_rejection(t, bad, mode="sampled", samples=5)


def test_run_decode_examples():
    code = HadamardCode(F2, 2)
    w = had_encode(code, [(1, 0)])
    dec = had_decoder(code, chi(0))
    assert all(run_decode(dec, w, r) == (1,) for r in range(4))
    w11 = had_encode(code, [(1, 1)])
    dec12 = had_decoder(code, psi(0, 1))
    assert all(run_decode(dec12, w11, r) == (0,) for r in range(4))
    with pytest.raises(ParameterError):
        run_decode(dec, w, 4)


def test_corrupted_query_position_only_affects_draws_that_read_it():
    code = HadamardCode(F3, 2)
    w = had_encode(code, [(2, 1)])
    bad = corrupt(w, {5: (0,)})
    for tg in all_targets(2):
        dec = had_decoder(code, tg)
        want = (tg.value((2, 1), 3),)
        for r in range(dec.randomness_size):
            got = run_decode(dec, bad, r)
            assert (got == want) == (5 not in dec.queries(r))


def test_targets():
    assert str(chi(0)) == "chi_1" and str(psi(0, 1)) == "psi_1,2"
    assert psi(0, 2).value((1, 5, 4), 7) == 5
    with pytest.raises(InvalidTarget):
        psi(1, 1)
    assert len(all_targets(3)) == 6


def test_smoothness_examples():
    code = HadamardCode(F2, 2)
    rep = check_smoothness(had_decoder(code, chi(0)), 4)
    assert rep and rep.counts == [2, 2, 2, 2]
    lazy = DecoderSpec(4, chi(0), lambda r: (0, 0), lambda r, b: (0,))
    rep = check_smoothness(lazy, 4)
    assert not rep and rep.counts == [8, 0, 0, 0]
    odd = DecoderSpec(3, chi(0), lambda r: (r, r), lambda r, b: (0,))
    assert "divisible" in check_smoothness(odd, 4).reason


def test_coverage_examples():
    t1 = had_tester(HadamardCode(F2, 1))
    assert coverage_min(t1, 1) == 1
    assert coverage_min(t1, 4) == 2
    t2 = had_tester(HadamardCode(F2, 2))
    assert coverage_min(t2, 16) == 4
    up = coverage_min(t2, 3, mode="sampled", samples=50, seed=1)
    assert up >= coverage_min(t2, 3)
    with pytest.raises(ParameterError):
        coverage_min(t2, 0)


def test_corrupt_and_distance():
    w = had_encode(HadamardCode(F2, 2), [(1, 0)])
    assert corrupt(w, {}) == w
    assert relative_distance(w, corrupt(w, {1: (1,)})) == Fraction(1, 4)
    flipped = corrupt(w, {i: (1 - b[0],) for i, b in enumerate(w.blocks)})
    assert relative_distance(w, flipped) == 1
    same = corrupt(w, {i: b for i, b in enumerate(w.blocks)})
    assert relative_distance(w, same) == 0
    with pytest.raises(ShapeError):
        corrupt(w, {0: (0, 1)})
    with pytest.raises(ShapeError):
        corrupt(w, {4: (0,)})


def test_single_corruptions_at_rate_half():
    # success >= 1 - 2*delta for every single-position corruption (delta = 1/4)
    code = HadamardCode(F2, 2)
    for msg in itertools.product(range(2), repeat=2):
        w = had_encode(code, [msg])
        for pos in range(4):
            bad = corrupt(w, {pos: (1 - w.blocks[pos][0],)})
            for tg in all_targets(2):
                est = estimate_decode_success(had_decoder(code, tg), bad, (tg.value(msg, 2),))
                assert est.fraction >= 1 - 2 * Fraction(1, 4)


def test_pltdc_params_validation():
    PltdcParams(3, 16, 4, Fraction(1, 13), Fraction(1, 13), Fraction(25, 26), Fraction(1, 2))
    with pytest.raises(ParameterError):
        PltdcParams(3, 16, 4, Fraction(1, 5), Fraction(1, 13), Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ParameterError):
        PltdcParams(3, 16, 4, Fraction(1, 13), Fraction(1, 13), Fraction(1), Fraction(1, 2))
