"""Canonical 3-uniform triple systems with fast pair-link queries.

A triple system is a vertex count ``n`` plus a duplicate-free set of
3-element edges, each stored as a sorted tuple ``(a, b, c)`` with
``a < b < c``.  For every pair ``u < v`` the system keeps a bitset of the
vertices ``w`` such that ``{u, v, w}`` is an edge, which is the workhorse
query of the counting and search engines.

Systems are immutable after construction; the mutation helpers return new
values, so instances can be shared freely across parallel workers.
"""

from __future__ import annotations

import itertools

#: Hard cap on vertex counts.  Desk-scale work stays far below this, and
#: the bitset representation stays cheap up to it.
MAX_VERTICES = 512


class Error(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidEdgeError(Error):
    """A triple is degenerate, out of range, duplicated, or missing."""


class FormatError(Error):
    """Edge-list text does not conform to the ``u3`` format."""


class CapacityError(Error):
    """A construction was asked for more edges than its strategy admits."""


class SearchBudgetError(Error):
    """A backtracking generator exhausted its node budget."""


class CountOverflowError(Error):
    """A copy count exceeded the supported counter range (10**18)."""


def triple(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Return the canonical sorted form of an edge, rejecting repeats."""
    if a == b or a == c or b == c:
        raise InvalidEdgeError(f"degenerate triple ({a}, {b}, {c})")
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
    if a > b:
        a, b = b, a
    return (a, b, c)


class TripleSystem:
    """An immutable 3-graph: ``n`` vertices and a set of canonical triples.

    Do not call the constructor directly with unchecked data; use
    :func:`build` (or the mutation helpers of an existing system), which
    validate ids and normalize edge order.
    """

    __slots__ = ("n", "edges", "_links", "_adj", "_deg")

    def __init__(self, n: int, edges: frozenset, links: dict, adj: list, deg: list):
        self.n = n
        self.edges = edges
        self._links = links
        self._adj = adj
        self._deg = deg

    # -- queries ---------------------------------------------------------

    def __contains__(self, e) -> bool:
        return e in self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TripleSystem)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"TripleSystem(n={self.n}, m={len(self.edges)})"

    def link_bits(self, u: int, v: int) -> int:
        """Bitset of the vertices completing ``{u, v}`` to an edge."""
        if u > v:
            u, v = v, u
        return self._links.get(u * self.n + v, 0)

    def link(self, u: int, v: int) -> set:
        """The link of the pair ``{u, v}`` as a vertex set."""
        if u == v:
            raise InvalidEdgeError(f"link of a repeated vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidEdgeError(f"vertex out of range: link({u}, {v})")
        return _bits_to_set(self.link_bits(u, v))

    def adjacency_bits(self, v: int) -> int:
        """Bitset of vertices sharing at least one edge with ``v``."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return self._deg[v]

    def degrees(self) -> list:
        return list(self._deg)

    def edge_list(self) -> list:
        """Edges in ascending lexicographic order."""
        return sorted(self.edges)

    # -- derived values --------------------------------------------------

    def non_edges(self):
        """Iterate over canonical triples absent from the system."""
        for t in itertools.combinations(range(self.n), 3):
            if t not in self.edges:
                yield t

    # -- mutation (returns new systems) ----------------------------------

    def add_edges(self, triples, strict: bool = True) -> "TripleSystem":
        """A new system with the given triples added.

        In strict mode adding an already-present edge is an error; in
        permissive mode it is ignored.
        """
        new = set(self.edges)
        for t in triples:
            t = _check_triple(t, self.n)
            if t in new:
                if strict:
                    raise InvalidEdgeError(f"edge {t} already present")
                continue
            new.add(t)
        return _assemble(self.n, new)

    def remove_edges(self, triples, strict: bool = True) -> "TripleSystem":
        """A new system with the given triples removed."""
        new = set(self.edges)
        for t in triples:
            t = _check_triple(t, self.n)
            if t not in new:
                if strict:
                    raise InvalidEdgeError(f"edge {t} not present")
                continue
            new.discard(t)
        return _assemble(self.n, new)


class PartitionLabeling:
    """A vertex partition: ``parts[v]`` is the part index of vertex ``v``."""

    __slots__ = ("parts", "part_sizes")

    def __init__(self, parts):
        self.parts = tuple(parts)
        k = max(self.parts) + 1 if self.parts else 0
        sizes = [0] * k
        for p in self.parts:
            sizes[p] += 1
        self.part_sizes = tuple(sizes)

    def __eq__(self, other):
        return isinstance(other, PartitionLabeling) and self.parts == other.parts

    def __repr__(self):
        return f"PartitionLabeling(sizes={self.part_sizes})"

    def members(self, i: int) -> list:
        """Vertices of part ``i`` in ascending order."""
        return [v for v, p in enumerate(self.parts) if p == i]

    def num_parts(self) -> int:
        return len(self.part_sizes)


def _check_triple(t, n: int) -> tuple[int, int, int]:
    a, b, c = t
    t = triple(a, b, c)
    if t[0] < 0 or t[2] >= n:
        raise InvalidEdgeError(f"vertex id out of range in {t} (n={n})")
    return t


def _bits_to_set(bits: int) -> set:
    out = set()
    v = 0
    while bits:
        if bits & 1:
            out.add(v)
        bits >>= 1
        v += 1
    return out


def _assemble(n: int, edge_set: set) -> TripleSystem:
    links: dict = {}
    adj = [0] * n
    deg = [0] * n
    for a, b, c in edge_set:
        links[a * n + b] = links.get(a * n + b, 0) | (1 << c)
        links[a * n + c] = links.get(a * n + c, 0) | (1 << b)
        links[b * n + c] = links.get(b * n + c, 0) | (1 << a)
        adj[a] |= (1 << b) | (1 << c)
        adj[b] |= (1 << a) | (1 << c)
        adj[c] |= (1 << a) | (1 << b)
        deg[a] += 1
        deg[b] += 1
        deg[c] += 1
    return TripleSystem(n, frozenset(edge_set), links, adj, deg)


def build(n: int, triples) -> TripleSystem:
    """Build a canonical system from arbitrary-order vertex triples.

    Raises :class:`InvalidEdgeError` on out-of-range ids or repeated
    vertices within a triple.  Duplicate triples collapse silently (the
    edge set is a set); use :meth:`TripleSystem.add_edges` for strict
    duplicate detection.
    """
    if n < 0 or n > MAX_VERTICES:
        raise InvalidEdgeError(f"vertex count {n} outside [0, {MAX_VERTICES}]")
    edge_set = set()
    for t in triples:
        edge_set.add(_check_triple(t, n))
    return _assemble(n, edge_set)


def complete(n: int) -> TripleSystem:
    """The complete 3-graph on ``n`` vertices."""
    return build(n, itertools.combinations(range(n), 3))


# -- isomorphism ---------------------------------------------------------


def _vertex_signature(h: TripleSystem, v: int):
    # degree plus the multiset of pair-link sizes at v: cheap invariant
    sizes = sorted(
        bin(h.link_bits(v, u)).count("1")
        for u in range(h.n)
        if u != v and h.link_bits(v, u)
    )
    return (h.degree(v), tuple(sizes))


def is_isomorphic(h1: TripleSystem, h2: TripleSystem) -> bool:
    """True iff some vertex bijection maps the edges of h1 onto h2 exactly.

    Backtracking over degree- and link-refined candidate lists; intended
    for desk-scale systems, not a canonical-labeling replacement.
    """
    if h1.n != h2.n or len(h1.edges) != len(h2.edges):
        return False
    n = h1.n
    sig1 = [_vertex_signature(h1, v) for v in range(n)]
    sig2 = [_vertex_signature(h2, v) for v in range(n)]
    if sorted(sig1) != sorted(sig2):
        return False

    # place rare signatures first
    order = sorted(range(n), key=lambda v: (sig1.count(sig1[v]), -h1.degree(v), v))
    cand0 = [[y for y in range(n) if sig2[y] == sig1[v]] for v in range(n)]

    mapping = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        u = order[k]
        for y in cand0[u]:
            if used[y]:
                continue
            ok = True
            for j in range(k):
                w = order[j]
                fw = mapping[w]
                # adjacency must correspond
                if ((h1.adjacency_bits(u) >> w) & 1) != ((h2.adjacency_bits(y) >> fw) & 1):
                    ok = False
                    break
                # every fully mapped pair must agree on edge membership
                for i in range(j):
                    x = order[i]
                    fx = mapping[x]
                    if ((h1.link_bits(w, x) >> u) & 1) != ((h2.link_bits(fw, fx) >> y) & 1):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            mapping[u] = y
            used[y] = True
            if extend(k + 1):
                return True
            mapping[u] = -1
            used[y] = False
        return False

    return extend(0)


# -- edge-list text format -----------------------------------------------
#
# Line 1: "u3 <n> <m>"; then m lines "<a> <b> <c>" with 0 <= a < b < c < n,
# in ascending lexicographic order, LF-terminated ASCII decimal.


def dumps(h: TripleSystem) -> str:
    """Serialize to the canonical edge-list text format."""
    lines = [f"u3 {h.n} {len(h.edges)}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in h.edge_list())
    return "\n".join(lines) + "\n"


def loads(text: str) -> TripleSystem:
    """Parse the edge-list text format, strictly.

    Rejects malformed headers, ids out of range, unsorted triples,
    out-of-order or duplicate lines, and line counts that disagree with
    the header.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty input")
    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "u3":
        raise FormatError(f"malformed header: {lines[0]!r}")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError(f"malformed header: {lines[0]!r}") from None
    if n < 0 or n > MAX_VERTICES or m < 0:
        raise FormatError(f"header out of range: n={n} m={m}")
    if len(lines) - 1 != m:
        raise FormatError(f"header declares {m} edges, found {len(lines) - 1} lines")
    edges = []
    prev = None
    for ln in lines[1:]:
        toks = ln.split(" ")
        if len(toks) != 3:
            raise FormatError(f"malformed edge line: {ln!r}")
        try:
            a, b, c = int(toks[0]), int(toks[1]), int(toks[2])
        except ValueError:
            raise FormatError(f"malformed edge line: {ln!r}") from None
        if not (0 <= a < b < c < n):
            raise FormatError(f"non-canonical or out-of-range triple: {ln!r}")
        t = (a, b, c)
        if prev is not None and t <= prev:
            raise FormatError(f"edge lines not in ascending order at {ln!r}")
        prev = t
        edges.append(t)
    return build(n, edges)
