import itertools
import random

import pytest

import hyperturan.counting as counting
from hyperturan.core import CountOverflowError, InvalidEdgeError, build, complete
from hyperturan.counting import (
    CountReport,
    EngineInvariantError,
    contains_copy,
    contains_copy_through_edge,
    copies_exactly_one_marked,
    copies_through_edge,
    copies_through_vertex,
    count_copies,
    count_embeddings,
    count_report,
)
from hyperturan.constructions import (
    add_zero_two_sharing,
    bipartite_max,
    r_partite_max,
    tripartite_max,
)
from hyperturan.patterns import Pattern, b5, by_name, f5, fano, k4minus

from oracle import naive_copies, naive_copies_through_edge, naive_embeddings

SINGLE_EDGE = Pattern("edge", 3, [(0, 1, 2)])


def test_fano_in_complete_seven():
    k7 = complete(7)
    assert count_embeddings(k7, fano()) == 5040
    assert count_copies(k7, fano()) == 30


def test_fano_matches_naive_oracle_on_k7():
    k7 = complete(7)
    assert naive_embeddings(7, k7.edges, 7, fano().edges) == 5040
    assert naive_copies(7, k7.edges, 7, fano().edges) == 30


def test_single_edge_pattern_counts_edges():
    h = build(6, [(0, 1, 2), (1, 2, 3), (3, 4, 5)])
    assert count_embeddings(h, SINGLE_EDGE) == 6 * 3
    assert count_copies(h, SINGLE_EDGE) == 3


def test_self_host_embeddings_are_automorphisms():
    for name in ("f5", "k4minus", "b5", "pasch", "fano"):
        p = by_name(name)
        assert count_embeddings(p.as_system(), p) == p.aut_count


def test_fano_free_bipartite():
    for n in (7, 10, 14):
        h, _ = bipartite_max(n)
        assert count_copies(h, fano()) == 0
        assert not contains_copy(h, fano())


def test_tripartite_cancellative():
    h, _ = tripartite_max(9)
    assert count_copies(h, f5()) == 0
    assert count_copies(h, k4minus()) == 0


def test_expanded_clique_free_r_partite():
    h, _ = r_partite_max(12, 3)
    assert count_copies(h, by_name("L4")) == 0


def test_through_edge_fano_construction():
    h, lab = bipartite_max(8)
    e = tuple(lab.members(0)[:3])
    host = h.add_edges([e])
    assert copies_through_edge(host, fano(), e) == 30
    # the added edge carries every copy
    assert count_copies(host, fano()) == 30


def test_through_edge_requires_membership():
    h = complete(5)
    with pytest.raises(InvalidEdgeError):
        copies_through_edge(h.remove_edges([(0, 1, 2)]), f5(), (0, 1, 2))


def test_through_edge_zero_in_free_host():
    h, _ = bipartite_max(8)
    e = next(iter(h.edges))
    assert copies_through_edge(h, fano(), e) == 0


def test_through_edge_double_counting_on_k7():
    k7 = complete(7)
    total = count_copies(k7, fano())
    sums = sum(copies_through_edge(k7, fano(), e) for e in k7.edge_list())
    assert sums == 7 * total


def test_through_edge_matches_naive():
    rng = random.Random(7)
    tris = list(itertools.combinations(range(7), 3))
    edges = rng.sample(tris, 18)
    h = build(7, edges)
    p = f5()
    for e in h.edge_list()[:6]:
        assert copies_through_edge(h, p, e) == naive_copies_through_edge(
            7, h.edges, p.f, p.edges, e
        )


def test_through_vertex_sums():
    h = complete(6)
    p = f5()
    total = count_copies(h, p)
    assert sum(copies_through_vertex(h, p, v) for v in range(6)) == p.f * total


def test_through_vertex_isolated():
    h = build(7, [(0, 1, 2), (0, 1, 3)])
    assert copies_through_vertex(h, SINGLE_EDGE, 6) == 0


def test_through_vertex_covers_through_edge():
    h, lab = bipartite_max(8)
    e = tuple(lab.members(0)[:3])
    host = h.add_edges([e])
    for v in e:
        assert copies_through_vertex(host, fano(), v) >= 30


def test_exactly_one_marked_singleton_is_through_edge():
    k6 = complete(6)
    p = f5()
    e = (0, 1, 2)
    assert copies_exactly_one_marked(k6, p, [e]) <= copies_through_edge(k6, p, e)
    h, lab = bipartite_max(8)
    e = tuple(lab.members(0)[:3])
    host = h.add_edges([e])
    assert copies_exactly_one_marked(host, fano(), [e]) == copies_through_edge(
        host, fano(), e
    )


def test_exactly_one_marked_all_edges_zero():
    k6 = complete(6)
    assert copies_exactly_one_marked(k6, f5(), k6.edge_list()) == 0


def test_exactly_one_marked_requires_subset():
    k5 = complete(5)
    with pytest.raises(InvalidEdgeError):
        copies_exactly_one_marked(k5.remove_edges([(0, 1, 2)]), f5(), [(0, 1, 2)])


def test_exactly_one_marked_sharp_construction():
    h, lab = bipartite_max(8)
    host, added = add_zero_two_sharing(h, lab, 4)
    total = count_copies(host, fano())
    assert total == 4 * 30
    assert copies_exactly_one_marked(host, fano(), added) == total


def test_contains_copy_short_circuit_cases():
    assert contains_copy(complete(7), fano())
    assert not contains_copy(complete(6), fano())  # f > n
    h, _ = bipartite_max(10)
    assert not contains_copy(h, fano())
    assert contains_copy_through_edge(complete(7), fano(), (0, 1, 2))


def test_count_is_relabeling_invariant():
    rng = random.Random(3)
    tris = list(itertools.combinations(range(8), 3))
    h = build(8, rng.sample(tris, 20))
    perm = list(range(8))
    rng.shuffle(perm)
    h2 = build(8, [tuple(perm[v] for v in e) for e in h.edges])
    for p in (f5(), k4minus(), b5()):
        assert count_copies(h, p) == count_copies(h2, p)


def test_monotone_under_edge_addition():
    rng = random.Random(5)
    tris = list(itertools.combinations(range(8), 3))
    h = build(8, rng.sample(tris, 15))
    extra = next(t for t in tris if t not in h.edges)
    h2 = h.add_edges([extra])
    for p in (f5(), k4minus()):
        assert count_copies(h, p) <= count_copies(h2, p)


def test_worker_counts_match_sequential():
    k7 = complete(7)
    assert count_embeddings(k7, fano(), workers=3) == 5040
    assert count_copies(k7, fano(), workers=2) == 30
    h, lab = bipartite_max(8)
    e = tuple(lab.members(0)[:3])
    host = h.add_edges([e])
    assert copies_through_edge(host, fano(), e, workers=4) == 30
    assert copies_exactly_one_marked(host, fano(), [e], workers=2) == 30


def test_overflow_guard(monkeypatch):
    monkeypatch.setattr(counting, "COUNT_LIMIT", 10)
    with pytest.raises(CountOverflowError):
        count_copies(complete(7), f5())


def test_count_report_shape():
    h, lab = bipartite_max(8)
    e = tuple(lab.members(0)[:3])
    host = h.add_edges([e])
    rep = count_report(host, fano(), per_edge=True)
    assert isinstance(rep, CountReport)
    assert rep.total_copies == 30
    assert rep.total_embeddings == 30 * 168
    assert sum(rep.per_edge.values()) == len(fano().edges) * rep.total_copies
    d = rep.to_dict()
    assert list(d) == ["pattern", "n", "m", "total_copies", "per_edge", "nodes", "millis"]
    assert d["millis"] == 0
    assert rep.to_dict(timing=True)["millis"] == rep.millis


def test_divisibility_self_check_fires_on_bad_aut():
    broken = Pattern("f5", 5, f5().edges)
    broken.aut_count = 7  # wrong divisor: 6! * 4 self-injections not divisible
    with pytest.raises(EngineInvariantError):
        count_copies(complete(6), broken)
