"""Fast smoke checks behind ``gapclique selftest``."""

from __future__ import annotations

from fractions import Fraction

from .algebra import PrimeField, confluent_determinant_formula, confluent_matrix, determinant
from .derivative_code import DcParams, dc_decoder, dc_encode
from .graph import PartitionedGraph
from .hadamard import HadamardCode, had_decoder, had_encode, had_tester
from .pipeline import run_pipeline
from .pltdc import all_targets, check_smoothness, corrupt, estimate_rejection, psi, run_decode


def _checks():
    F2 = PrimeField(2)
    code = HadamardCode(F2, 2)
    w = corrupt(had_encode(code, [(1, 0)]), {3: (0,)})
    yield "blr rejection on [0,0,1,0] is 6/16", estimate_rejection(had_tester(code), w).fraction == Fraction(6, 16)
    yield "hadamard decoders are smooth", all(check_smoothness(had_decoder(code, tg), code.n)
                                              for tg in all_targets(2))
    F11 = PrimeField(11)
    ok = all(determinant(F11, confluent_matrix(F11, a, b, r)) == confluent_determinant_formula(F11, a, b, r)
             for r in (1, 2) for a in range(11) for b in range(11) if a != b)
    yield "confluent determinant closed form", ok
    params = DcParams(PrimeField(7), 1, 1)
    word = dc_encode(params, [(0, 1, 2, 3)])
    dec = dc_decoder(params, psi(0, 2))
    yield "derivative decoder exact on a clean word", all(run_decode(dec, word, r) == (2,)
                                                          for r in range(0, dec.randomness_size, 7))
    tri = PartitionedGraph([[0], [1], [2]], [(0, 1), (0, 2), (1, 2)])
    yield "triangle pipeline reaches K", run_pipeline(tri, tiny=True).get("fglss.gap_holds") == "True"


def run_selftest(out=print) -> bool:
    ok = True
    for name, passed in _checks():
        out(f"{'PASS' if passed else 'FAIL'} {name}")
        ok = ok and bool(passed)
    return ok
