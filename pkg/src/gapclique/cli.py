"""Command line front end.  Exit codes: 0 ok, 1 bad input, 2 verification failure, 3 over budget."""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .algebra import PrimeField
from .errors import BudgetExceeded, GapCliqueError
from .pltdc import chi, psi

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2, 3


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _messages(spec: str):
    """'1,0;0,1' -> [(1, 0), (0, 1)], one lane per ';'."""
    return [tuple(int(x) for x in lane.split(",")) for lane in spec.split(";") if lane.strip()]


def _target(spec: str):
    kind, _, idx = spec.partition(":")
    nums = [int(x) - 1 for x in idx.split(",")]
    if kind == "chi" and len(nums) == 1:
        return chi(nums[0])
    if kind == "psi" and len(nums) == 2:
        return psi(*nums)
    raise argparse.ArgumentTypeError(f"target must look like chi:1 or psi:1,2, got {spec!r}")


def _code(args):
    """(encoder, tester, decoder factory) for the chosen code."""
    F = PrimeField(args.field)
    if args.code == "hadamard":
        from .hadamard import HadamardCode, had_decoder, had_encode, had_tester
        code = HadamardCode(F, args.k)
        return (lambda msgs: had_encode(code, msgs), had_tester(code),
                lambda tg: had_decoder(code, tg))
    from .derivative_code import DcParams, dc_decoder, dc_encode, dc_tester
    params = DcParams(F, args.r, args.m, tiny=args.tiny)
    if args.code == "derivative":
        return (lambda msgs: dc_encode(params, msgs), dc_tester(params),
                lambda tg: dc_decoder(params, tg))
    from .line_code import lc_decoder, lc_encode, lc_tester, lc_waivers
    waived = lc_waivers(params)
    if waived:
        print("warning: tiny mode waives " + "; ".join(waived), file=sys.stderr)
    return (lambda msgs: lc_encode(params, msgs), lc_tester(params),
            lambda tg: lc_decoder(params, tg))


def _corrupted(word, fraction, seed, p):
    """Replace round(fraction * n) random positions by a different block."""
    from .pltdc import corrupt
    rng = random.Random(seed)
    count = round(Fraction(fraction) * word.n)
    edits = {}
    for pos in sorted(rng.sample(range(word.n), count)):
        blk = word.blocks[pos]
        edits[pos] = _perturb(blk, rng, p)
    return corrupt(word, edits)


def _perturb(x, rng, p):
    """Change the first scalar of a (nested) block to a different residue."""
    if isinstance(x, int):
        return (x + 1 + rng.randrange(p - 1)) % p
    return (_perturb(x[0], rng, p),) + tuple(x[1:])


def _soundness_delta(args):
    return Fraction(1, 13) if args.delta is None else args.delta


def cmd_encode(args):
    encode, _, _ = _code(args)
    w = encode(_messages(args.message))
    _write("".join(f"{key} {blk}\n" for key, blk in zip(w.index, w.blocks)), args.output)
    return EXIT_OK


def _est_kwargs(args):
    if args.mode == "sampled":
        return dict(mode="sampled", samples=args.samples, seed=args.seed)
    return dict(mode="exhaustive", budget=args.budget)


def cmd_test(args):
    from .pltdc import estimate_rejection
    encode, tester, _ = _code(args)
    w = encode(_messages(args.message))
    if args.corrupt:
        w = _corrupted(w, args.corrupt, args.seed, args.field)
    est = estimate_rejection(tester, w, **_est_kwargs(args))
    print(f"queries: {tester.q}")
    print(f"randomness: {tester.randomness_size}")
    print(f"rejected: {est.count}/{est.total}{'' if est.exact else ' (sampled)'}")
    print(f"rejection: {float(est.fraction):.6f}")
    if not args.corrupt and est.count:
        return EXIT_FAIL
    return EXIT_OK


def cmd_decode(args):
    from .pltdc import estimate_decode_success
    encode, _, make = _code(args)
    msgs = _messages(args.message)
    w = encode(msgs)
    if args.delta:
        w = _corrupted(w, args.delta, args.seed, args.field)
    tg = args.target
    dec = make(tg)
    p = args.field
    expected = tuple(tg.value(m, p) for m in msgs)
    est = estimate_decode_success(dec, w, expected, **_est_kwargs(args))
    print(f"target: {tg}")
    print(f"expected: {','.join(map(str, expected))}")
    print(f"success: {est.count}/{est.total}{'' if est.exact else ' (sampled)'}")
    print(f"rate: {float(est.fraction):.6f}")
    floor = 1 - 2 * Fraction(args.delta or 0)
    if not args.delta and est.count != est.total:
        return EXIT_FAIL
    if args.delta and est.exact and est.fraction < floor:
        return EXIT_FAIL
    return EXIT_OK


def cmd_reduce_vcsp(args):
    from .graph import parse_graph
    from .vcsp import build_hash, clique_to_vcsp, serialize_vcsp, verify_hash
    G = parse_graph(_read(args.graph))
    H = build_hash(G, args.field, mode=args.hash_mode, seed=args.seed, dim=args.dim)
    if not verify_hash(H, G):
        return EXIT_FAIL
    _write(serialize_vcsp(clique_to_vcsp(G, args.field, H)), args.output)
    return EXIT_OK


def cmd_reduce_fglss(args):
    from .fglss import build_fglss, hadamard_config
    from .graph import serialize_graph
    from .vcsp import parse_vcsp
    csp = parse_vcsp(_read(args.vcsp))
    cfg = hadamard_config(PrimeField(csp.p), csp.k, _soundness_delta(args), csp.dim)
    if args.tiny:
        print("warning: tiny mode waives reduction hypotheses (see metadata)", file=sys.stderr)
    G = build_fglss(csp, cfg, "tiny" if args.tiny else "strict")
    _write(serialize_graph(G), args.output)
    return EXIT_OK


def cmd_amplify(args):
    from .gapamp import amplify_gap, build_disperser, subset_size
    from .graph import parse_graph, serialize_graph
    G = parse_graph(_read(args.graph))
    ell = args.l if args.l else subset_size(G.k, args.r, Fraction(args.eps))
    D = build_disperser(G.k, args.m, ell, args.r, Fraction(args.eps), args.seed)
    _write(serialize_graph(amplify_gap(G, D)), args.output)
    return EXIT_OK


def cmd_solve_clique(args):
    from .graph import max_clique, parse_graph
    G = parse_graph(_read(args.graph))
    size, witness = max_clique(G, args.budget)
    print(f"max_clique: {size}")
    print(f"witness: {' '.join(map(str, witness))}")
    return EXIT_OK


def cmd_pipeline(args):
    from .graph import parse_graph
    from .pipeline import run_pipeline
    G = parse_graph(_read(args.graph))
    if args.tiny:
        print("warning: tiny mode waives field-size and dimension floors", file=sys.stderr)
    amp = None
    if args.amplify:
        m, ell, r, eps = args.amplify.split(",")
        amp = dict(m=int(m), l=int(ell), r=int(r), eps=Fraction(eps))
    rep = run_pipeline(G, p=args.field, delta=_soundness_delta(args), tiny=args.tiny, seed=args.seed,
                       hash_mode=args.hash_mode, budget=args.budget, amplify=amp)
    _write(rep.text(), args.output)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_selftest(args):
    from .selftest import run_selftest
    ok = run_selftest(print)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=2, help="prime field size")
    common.add_argument("--delta", type=Fraction, default=None,
                        help="corruption fraction (default 0) or soundness delta (default 1/13)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    common.add_argument("--samples", type=int, default=10000)
    common.add_argument("--budget", type=int, default=10 ** 6)
    common.add_argument("--tiny", action="store_true", help="waive field-size floors (prints a warning)")
    common.add_argument("-o", "--output", default=None)

    codeopts = argparse.ArgumentParser(add_help=False)
    codeopts.add_argument("--code", choices=("hadamard", "derivative", "line"), default="hadamard")
    codeopts.add_argument("-k", type=int, default=2, help="hadamard message length")
    codeopts.add_argument("-m", type=int, default=1, help="half the ambient dimension")
    codeopts.add_argument("-r", type=int, default=1, help="derivative order (d = 2r + 1)")
    codeopts.add_argument("--message", required=True, help="lanes as '1,0;0,1'")

    ap = argparse.ArgumentParser(prog="gapclique", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("encode", parents=[common, codeopts])
    p.set_defaults(fn=cmd_encode)
    p = sub.add_parser("test", parents=[common, codeopts])
    p.add_argument("--corrupt", type=Fraction, default=None, help="fraction of positions to corrupt")
    p.set_defaults(fn=cmd_test)
    p = sub.add_parser("decode", parents=[common, codeopts])
    p.add_argument("--target", type=_target, required=True, help="chi:i or psi:i,j (1-based)")
    p.set_defaults(fn=cmd_decode)

    p = sub.add_parser("reduce-vcsp", parents=[common])
    p.add_argument("graph")
    p.add_argument("--hash-mode", choices=("seeded", "derandomized"), default="seeded")
    p.add_argument("--dim", type=int, default=None)
    p.set_defaults(fn=cmd_reduce_vcsp)

    p = sub.add_parser("reduce-fglss", parents=[common])
    p.add_argument("vcsp")
    p.set_defaults(fn=cmd_reduce_fglss)

    p = sub.add_parser("amplify", parents=[common])
    p.add_argument("graph")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", default="1/2")
    p.set_defaults(fn=cmd_amplify)

    p = sub.add_parser("solve-clique", parents=[common])
    p.add_argument("graph")
    p.set_defaults(fn=cmd_solve_clique)

    p = sub.add_parser("pipeline", parents=[common])
    p.add_argument("graph")
    p.add_argument("--hash-mode", choices=("seeded", "derandomized"), default="seeded")
    p.add_argument("--amplify", default=None, help="disperser 'm,l,r,eps' applied to the FGLSS graph")
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("selftest", parents=[common])
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        if exc.best is not None:
            print(f"best so far: {exc.best}", file=sys.stderr)
        return EXIT_BUDGET
    except (GapCliqueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
