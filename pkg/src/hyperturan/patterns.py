"""Forbidden-configuration catalog with exact automorphism counts.

Each pattern is a small 3-graph together with ``|Aut|``, the divisor that
turns raw edge-preserving injections into copy counts.  Automorphisms are
counted by full permutation enumeration for up to 8 vertices and by
degree/link-pruned backtracking above that; the two methods are
cross-validated on the overlapping range in the test suite.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .core import Error, build, triple

#: Automorphism counting refuses patterns above this many vertices.
MAX_PATTERN_VERTICES = 20

#: Full f! enumeration is used up to here, pruned backtracking beyond.
_FULL_ENUM_LIMIT = 8


class PatternError(Error):
    """Unknown pattern name or parameters outside the supported range."""


class Pattern:
    """A named forbidden configuration.

    Vertices are relabeled to ``0..f-1`` at construction (edges in
    ascending lexicographic order) so equality and golden files are
    stable.  ``aut_count`` is the exact automorphism count and
    ``automorphisms`` the full list of edge-set-preserving permutations.
    """

    __slots__ = ("name", "f", "edges", "aut_count", "automorphisms", "degrees")

    def __init__(self, name: str, f: int, edges):
        edges = tuple(sorted(triple(*e) for e in edges))
        span = sorted({v for e in edges for v in e})
        if span != list(range(f)):
            raise PatternError(f"{name}: edges must span vertices 0..{f - 1}")
        if len(set(edges)) != len(edges):
            raise PatternError(f"{name}: duplicate edges")
        self.name = name
        self.f = f
        self.edges = edges
        deg = [0] * f
        for e in edges:
            for v in e:
                deg[v] += 1
        self.degrees = tuple(deg)
        self.automorphisms = _automorphisms(f, edges, deg)
        self.aut_count = len(self.automorphisms)

    def __repr__(self):
        return f"Pattern({self.name!r}, f={self.f}, m={len(self.edges)}, aut={self.aut_count})"

    def __eq__(self, other):
        return (
            isinstance(other, Pattern)
            and self.f == other.f
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.f, self.edges))

    def as_system(self):
        """The pattern as a standalone triple system."""
        return build(self.f, self.edges)

    def vertex_orbits(self) -> list:
        """Orbits of the automorphism group on vertices (sorted lists)."""
        seen = [False] * self.f
        orbits = []
        for v in range(self.f):
            if seen[v]:
                continue
            orb = sorted({p[v] for p in self.automorphisms})
            for u in orb:
                seen[u] = True
            orbits.append(orb)
        return orbits

    def edge_orbits(self) -> list:
        """Orbits of the automorphism group on edges (lists of triples)."""
        remaining = set(self.edges)
        orbits = []
        while remaining:
            e = min(remaining)
            orb = {tuple(sorted((p[e[0]], p[e[1]], p[e[2]]))) for p in self.automorphisms}
            remaining -= orb
            orbits.append(sorted(orb))
        return orbits


def _automorphisms(f: int, edges, deg) -> tuple:
    if f > MAX_PATTERN_VERTICES:
        raise PatternError(f"vertex budget exceeded: {f} > {MAX_PATTERN_VERTICES}")
    edge_set = set(edges)
    if f <= _FULL_ENUM_LIMIT:
        out = []
        for p in itertools.permutations(range(f)):
            if all(
                tuple(sorted((p[a], p[b], p[c]))) in edge_set for a, b, c in edges
            ):
                out.append(p)
        return tuple(out)
    return tuple(_automorphisms_backtracking(f, edges, deg))


def _automorphisms_backtracking(f: int, edges, deg):
    """Enumerate automorphisms by backtracking with degree/link pruning."""
    edge_set = set(edges)
    links = {}
    for a, b, c in edges:
        links.setdefault((a, b), set()).add(c)
        links.setdefault((a, c), set()).add(b)
        links.setdefault((b, c), set()).add(a)

    def link_of(u, v):
        return links.get((u, v) if u < v else (v, u), ())

    # rarest degree classes first keeps the branching shallow
    order = sorted(range(f), key=lambda v: (deg.count(deg[v]), -deg[v], v))
    out = []
    img = [-1] * f
    used = [False] * f

    def extend(k):
        if k == f:
            out.append(tuple(img))
            return
        u = order[k]
        for y in range(f):
            if used[y] or deg[y] != deg[u]:
                continue
            ok = True
            for j in range(k):
                w = order[j]
                if len(link_of(u, w)) != len(link_of(y, img[w])):
                    ok = False
                    break
            if not ok:
                continue
            img[u] = y
            # full consistency on every completed pattern edge
            for a, b, c in edges:
                ia, ib, ic = img[a], img[b], img[c]
                if ia >= 0 and ib >= 0 and ic >= 0:
                    if tuple(sorted((ia, ib, ic))) not in edge_set:
                        ok = False
                        break
            if ok:
                used[y] = True
                extend(k + 1)
                used[y] = False
            img[u] = -1

    extend(0)
    return out


def automorphism_count(p: Pattern) -> int:
    """Exact ``|Aut|`` of a pattern (recomputed, not the cached field)."""
    return len(_automorphisms(p.f, p.edges, list(p.degrees)))


# -- catalog ---------------------------------------------------------------


@lru_cache(maxsize=None)
def fano() -> Pattern:
    """The 7-point projective plane of order two.

    Edge list generated by the difference set {1, 2, 4} modulo 7,
    shifted to 0-based ids.  Every pair of points lies in exactly one
    line and every pair of lines meets in exactly one point.
    """
    base = [(1, 2, 4)]
    edges = [tuple(sorted(((v + s - 1) % 7 for v in e))) for s in range(7) for e in base]
    return Pattern("fano", 7, edges)


@lru_cache(maxsize=None)
def f5() -> Pattern:
    """Five vertices, three edges: {012, 013, 234}."""
    return Pattern("f5", 5, [(0, 1, 2), (0, 1, 3), (2, 3, 4)])


@lru_cache(maxsize=None)
def k4minus() -> Pattern:
    """The complete 3-graph on four vertices minus one edge."""
    return Pattern("k4minus", 4, [(0, 1, 2), (0, 1, 3), (1, 2, 3)])


@lru_cache(maxsize=None)
def b5() -> Pattern:
    """Five vertices, four edges: {012, 013, 014, 234}.

    A host contains this iff some pair-neighborhood fails to be an
    independent set.
    """
    return Pattern("b5", 5, [(0, 1, 2), (0, 1, 3), (0, 1, 4), (2, 3, 4)])


@lru_cache(maxsize=None)
def pasch() -> Pattern:
    """Six vertices, four edges: a vertex-deleted Fano plane.

    Linear (every two edges share exactly one point) with every vertex
    on exactly two edges.
    """
    fe = fano().edges
    doomed = 6
    kept = [e for e in fe if doomed not in e]
    return Pattern("pasch", 6, kept)


@lru_cache(maxsize=None)
def expanded_clique(s: int) -> Pattern:
    """The clique on ``s`` vertices with every pair enlarged by a private
    new vertex: ``s + C(s,2)`` vertices and ``C(s,2)`` edges.

    Clique vertices are ``0..s-1``; the expansion vertex of the k-th pair
    (in lexicographic pair order) is ``s + k``.
    """
    if s < 3:
        raise PatternError(f"expanded clique needs size >= 3, got {s}")
    edges = []
    nxt = s
    for i, j in itertools.combinations(range(s), 2):
        edges.append((i, j, nxt))
        nxt += 1
    return Pattern(f"L{s}", nxt, edges)


_FIXED = {
    "fano": fano,
    "f5": f5,
    "k4minus": k4minus,
    "b5": b5,
    "pasch": pasch,
}


def by_name(name: str) -> Pattern:
    """Look a catalog pattern up by its CLI name (``fano``, ``L4``, ...)."""
    if name in _FIXED:
        return _FIXED[name]()
    if name.startswith("L") and name[1:].isdigit():
        return expanded_clique(int(name[1:]))
    raise PatternError(f"unknown pattern {name!r}")


def names() -> list:
    """The fixed catalog names plus the two expanded cliques used most."""
    return sorted(_FIXED) + ["L4", "L5"]
