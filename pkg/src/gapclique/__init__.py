"""Parallel locally testable and decodable codes and gap-producing clique reductions."""

from .algebra import (
    Line,
    PolyTuple,
    PrimeField,
    UniPolyTuple,
    canonical_line,
    eval_poly,
    field_inv,
    interpolate_univariate,
    partial_derivative,
    restrict_to_line,
    solve_confluent_vandermonde,
)
from .errors import *  # noqa: F401,F403
from .graph import PartitionedGraph, max_clique, parse_graph, serialize_graph
from .pltdc import (
    DecoderSpec,
    ParallelWord,
    TesterSpec,
    check_smoothness,
    chi,
    corrupt,
    coverage_min,
    estimate_rejection,
    parallel_encode,
    psi,
    run_decode,
)
from .vcsp import Vector2Csp, build_hash, clique_to_vcsp, vcsp_brute_solve, verify_hash

__version__ = "0.1.0"
