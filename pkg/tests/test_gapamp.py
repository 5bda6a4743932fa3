import itertools
import random
from fractions import Fraction

import pytest

from gapclique.errors import BudgetExceeded, ConstructionFailed, ParameterError, ParseError
from gapclique.gapamp import (
    Disperser,
    amplify_gap,
    build_disperser,
    parse_disperser,
    serialize_disperser,
    subset_size,
    tuple_members,
    verify_disperser,
)
from gapclique.graph import PartitionedGraph, complete_partite, max_clique, relabel


def unions_ok(D):
    """Reference check written directly from the definition."""
    need = (1 - Fraction(D.eps)) * D.k
    return all(len(set(itertools.chain(*c))) >= need for c in itertools.combinations(D.subsets, D.r))


def test_subset_size():
    assert subset_size(10, 4, Fraction(1, 2)) == 15
    assert subset_size(6, 3, 1) == 6
    with pytest.raises(ParameterError):
        subset_size(4, 0, Fraction(1, 2))


def test_disperser_examples():
    full = Disperser(4, tuple(itertools.combinations(range(4), 2)), 6, 0)
    assert verify_disperser(full)
    with pytest.raises(ParameterError):
        build_disperser(10, 8, subset_size(10, 4, Fraction(1, 2)), 4, Fraction(1, 2), 0)
    D = build_disperser(10, 5, 6, 3, Fraction(1, 2), seed=1)
    assert verify_disperser(D) and unions_ok(D)
    single = Disperser(5, ((0, 1),), 1, Fraction(3, 5))
    assert verify_disperser(single)
    twins = Disperser(5, ((0, 1), (0, 1)), 2, Fraction(1, 2))
    assert not verify_disperser(twins)


def test_disperser_validation():
    with pytest.raises(ParameterError):
        Disperser(4, ((0, 1), (2,)), 1, 0)
    with pytest.raises(ParameterError):
        Disperser(4, ((0, 4),), 1, 0)
    with pytest.raises(ParameterError):
        Disperser(4, ((0, 0),), 1, 0)
    with pytest.raises(ConstructionFailed):
        build_disperser(6, 3, 1, 3, 0, seed=0, max_tries=5)
    big = Disperser(30, tuple((i,) for i in range(30)), 15, 0)
    with pytest.raises(BudgetExceeded):
        verify_disperser(big, budget=1000)


def test_verify_matches_definition():
    rng = random.Random(3)
    for _ in range(200):
        k = rng.randint(2, 8)
        m = rng.randint(1, 6)
        ell = rng.randint(1, k)
        D = Disperser(k, tuple(tuple(rng.sample(range(k), ell)) for _ in range(m)),
                      rng.randint(1, m), Fraction(rng.randint(0, 4), 8))
        assert verify_disperser(D) == unions_ok(D)


def test_complete_partite_stays_complete():
    G = complete_partite([2, 2, 2])
    D = Disperser(3, ((0, 1), (1, 2), (0, 2)), 2, Fraction(1, 3))
    A = amplify_gap(G, D)
    sizes = [len(p) for p in A.parts]
    assert sizes == [4, 4, 4]
    want = sum(a * b for a, b in itertools.combinations(sizes, 2))
    # tuples over overlapping index sets must agree on the shared part
    assert len(A.edges) == 3 * 4 * 2
    assert max_clique(A)[0] == 3
    assert len(A.edges) < want


def test_unique_clique_gives_m():
    # k=4, n=2: vertices 0,2,4,6 form the only 4-clique
    parts = relabel([[None] * 2] * 4)
    edges = [(2 * a, 2 * b) for a in range(4) for b in range(a + 1, 4)]
    edges += [(1, 3), (3, 5), (5, 7)]
    G = PartitionedGraph(parts, edges)
    assert max_clique(G)[0] == 4
    D = Disperser(4, ((0, 1), (1, 2), (2, 3), (0, 3)), 2, Fraction(0))
    A = amplify_gap(G, D)
    size, witness = max_clique(A)
    assert size == 4
    members = tuple_members(G, D)
    assert {v for t in witness for v in members[t]} == {0, 2, 4, 6}


def test_no_intra_part_edges_and_members():
    rng = random.Random(5)
    parts = relabel([[None] * 2] * 3)
    edges = [(u, w) for a in range(3) for b in range(a + 1, 3)
             for u in parts[a] for w in parts[b] if rng.random() < 0.7]
    G = PartitionedGraph(parts, edges)
    D = Disperser(3, ((0, 1), (0, 2)), 1, Fraction(1, 3))
    A = amplify_gap(G, D)
    members = tuple_members(G, D)
    assert len(members) == A.num_vertices
    for part in A.parts:
        assert not any(A.has_edge(u, w) for u, w in itertools.combinations(part, 2))
    assert A.meta()["part.1"] == "0,2"


def test_amplify_checks():
    G = complete_partite([2, 2])
    with pytest.raises(ParameterError):
        amplify_gap(G, Disperser(3, ((0,),), 1, 0))
    with pytest.raises(BudgetExceeded):
        amplify_gap(complete_partite([10] * 4), Disperser(4, ((0, 1, 2, 3),), 1, 0), budget=100)


def test_disperser_text_round_trip():
    D = build_disperser(10, 5, 6, 3, Fraction(1, 2), seed=1)
    text = serialize_disperser(D)
    assert text.startswith("disp 10 5 6 3 1/2\n")
    assert parse_disperser(text) == D
    for bad in ("", "disp 3 1 1 1\n0\n", "disp 3 2 1 1 0\n0\n", "disp 3 1 2 1 0\n0\n", "disp 3 1 1 1 0\nx\n"):
        with pytest.raises(ParseError):
            parse_disperser(bad)
