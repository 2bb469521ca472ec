"""Exact copy counting by pruned backtracking over partial embeddings.

Counts are exact: the number of edge-preserving injections from the
pattern into the host, divided by the pattern's automorphism count.  The
division is asserted to be exact on every call; a nonzero remainder can
only come from an engine bug, so it is never silently ignored.

The search places pattern vertices in a static greedy order (most
adjacency to already-placed vertices first, degree-1 expansion vertices
last), keeps candidate sets as integer bitsets intersected from pair-link
bitsets, and forward-checks the link domains of future vertices so dead
branches die early.
"""

from __future__ import annotations

import itertools
import multiprocessing
import time
from dataclasses import dataclass
from functools import lru_cache

from .core import CountOverflowError, Error, InvalidEdgeError, TripleSystem, triple
from .patterns import Pattern

#: Copy totals above this raise :class:`CountOverflowError`.
COUNT_LIMIT = 10**18


class EngineInvariantError(Error):
    """An internal self-check failed (embeddings not divisible by |Aut|)."""


# -- search plans ----------------------------------------------------------


@lru_cache(maxsize=256)
def _build_plan(pat: Pattern, pre: frozenset):
    """Static placement order and constraint lists for a pattern.

    ``pre`` is the set of pre-placed pattern vertices (anchor).  Returns
    ``(order, cpairs, fcs)`` where ``order`` lists the remaining vertices
    in placement order, ``cpairs[k]`` the placed pairs completing an edge
    with ``order[k]``, and ``fcs[k]`` the forward-check domains
    ``(future_vertex, placed_pairs)`` to test after position ``k``.
    """
    f = pat.f
    neighbors = [set() for _ in range(f)]
    for a, b, c in pat.edges:
        neighbors[a].update((b, c))
        neighbors[b].update((a, c))
        neighbors[c].update((a, b))

    placed = set(pre)
    order = []
    remaining = [v for v in range(f) if v not in placed]
    while remaining:
        def rank(v):
            comp = sum(1 for e in pat.edges if v in e and len(placed & set(e)) == 2)
            adjc = len(neighbors[v] & placed)
            return (pat.degrees[v] == 1, -adjc, -comp, -pat.degrees[v], v)

        v = min(remaining, key=rank)
        order.append(v)
        placed.add(v)
        remaining.remove(v)

    cpairs = []
    fcs = []
    placed = set(pre)
    for k, v in enumerate(order):
        pairs = []
        for e in pat.edges:
            if v in e:
                rest = [u for u in e if u != v]
                if rest[0] in placed and rest[1] in placed:
                    pairs.append((rest[0], rest[1]))
        cpairs.append(tuple(pairs))
        placed.add(v)
        checks = []
        for x in order[k + 1:]:
            xpairs = []
            for e in pat.edges:
                if x in e:
                    rest = [u for u in e if u != x]
                    if rest[0] in placed and rest[1] in placed:
                        xpairs.append((rest[0], rest[1]))
            if xpairs:
                checks.append((x, tuple(xpairs)))
        fcs.append(tuple(checks))
    return tuple(order), tuple(cpairs), tuple(fcs)


def _degree_masks(host: TripleSystem, pat: Pattern) -> list:
    """Per pattern vertex, the bitset of host vertices with enough degree."""
    masks = []
    hdeg = host.degrees()
    for d in pat.degrees:
        m = 0
        for v in range(host.n):
            if hdeg[v] >= d:
                m |= 1 << v
        masks.append(m)
    return masks


def _forbidden_links(host: TripleSystem, marked) -> dict:
    """Pair-key -> bitset of third vertices forming a marked triple."""
    n = host.n
    out: dict = {}
    for a, b, c in marked:
        out[a * n + b] = out.get(a * n + b, 0) | (1 << c)
        out[a * n + c] = out.get(a * n + c, 0) | (1 << b)
        out[b * n + c] = out.get(b * n + c, 0) | (1 << a)
    return out


def _count_completions(host, pat, pre, forbidden=None, root_mask=None, extra_mask=None):
    """Count injective completions of the partial map ``pre``.

    ``pre`` maps pattern vertices to host vertices; edges fully inside
    ``pre`` are the caller's responsibility.  ``forbidden`` excludes host
    triples from serving as edge images.  ``root_mask`` restricts the
    first placed vertex (used to split work across workers), and
    ``extra_mask`` restricts every placed vertex (used for symmetry
    breaking in existence mode).  Returns ``(completions, nodes)``.
    """
    order, cpairs, fcs = _build_plan(pat, frozenset(pre.keys()))
    depth = len(order)
    n = host.n
    links = host._links
    degmask = _degree_masks(host, pat)
    asg = [-1] * pat.f
    used = 0
    for p, h in pre.items():
        asg[p] = h
        used |= 1 << h
    if depth == 0:
        return 1, 0
    base_mask = (1 << n) - 1
    if extra_mask is not None:
        base_mask &= extra_mask
    nodes = 0

    def rec(k, used):
        nonlocal nodes
        v = order[k]
        cand = degmask[v] & base_mask & ~used
        if k == 0 and root_mask is not None:
            cand &= root_mask
        for a, b in cpairs[k]:
            ua, ub = asg[a], asg[b]
            key = ua * n + ub if ua < ub else ub * n + ua
            cand &= links.get(key, 0)
            if forbidden is not None:
                cand &= ~forbidden.get(key, 0)
            if not cand:
                return 0
        if k == depth - 1:
            cnt = cand.bit_count()
            nodes += cnt
            return cnt
        total = 0
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            nodes += 1
            asg[v] = w
            used2 = used | low
            dead = False
            for x, prs in fcs[k]:
                dom = degmask[x] & base_mask & ~used2
                for a, b in prs:
                    ua, ub = asg[a], asg[b]
                    key = ua * n + ub if ua < ub else ub * n + ua
                    dom &= links.get(key, 0)
                    if forbidden is not None:
                        dom &= ~forbidden.get(key, 0)
                    if not dom:
                        dead = True
                        break
                if dead:
                    break
            if not dead:
                total += rec(k + 1, used2)
        asg[v] = -1
        return total

    total = rec(0, used)
    return total, nodes


def _exists_completion(host, pat, pre, extra_mask=None):
    """True iff the partial map ``pre`` extends to a full embedding."""
    order, cpairs, fcs = _build_plan(pat, frozenset(pre.keys()))
    depth = len(order)
    n = host.n
    links = host._links
    degmask = _degree_masks(host, pat)
    asg = [-1] * pat.f
    used = 0
    for p, h in pre.items():
        asg[p] = h
        used |= 1 << h
    if depth == 0:
        return True
    base_mask = (1 << n) - 1
    if extra_mask is not None:
        base_mask &= extra_mask

    def rec(k, used):
        v = order[k]
        cand = degmask[v] & base_mask & ~used
        for a, b in cpairs[k]:
            ua, ub = asg[a], asg[b]
            key = ua * n + ub if ua < ub else ub * n + ua
            cand &= links.get(key, 0)
            if not cand:
                return False
        if k == depth - 1:
            return True
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            asg[v] = w
            used2 = used | low
            dead = False
            for x, prs in fcs[k]:
                dom = degmask[x] & base_mask & ~used2
                for a, b in prs:
                    ua, ub = asg[a], asg[b]
                    key = ua * n + ub if ua < ub else ub * n + ua
                    dom &= links.get(key, 0)
                    if not dom:
                        dead = True
                        break
                if dead:
                    break
            if not dead and rec(k + 1, used2):
                asg[v] = -1
                return True
        asg[v] = -1
        return False

    return rec(0, used)


# -- worker plumbing -------------------------------------------------------


def _eval_task(args):
    host, pat, pre, forbidden, root_mask, mult = args
    count, nodes = _count_completions(host, pat, pre, forbidden, root_mask)
    return count * mult, nodes


def _run_tasks(tasks, workers: int):
    """Evaluate (count, nodes) tasks, in order, optionally in parallel.

    Results are reduced by summation, so totals are identical for every
    worker count.
    """
    if workers <= 1 or len(tasks) <= 1:
        results = [_eval_task(t) for t in tasks]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(workers, len(tasks))) as pool:
            results = pool.map(_eval_task, tasks)
    total = sum(r[0] for r in results)
    nodes = sum(r[1] for r in results)
    return total, nodes


def _split_mask(mask: int, parts: int) -> list:
    bits = []
    m = mask
    while m:
        low = m & -m
        bits.append(low)
        m ^= low
    if not bits:
        return []
    parts = min(parts, len(bits))
    size = (len(bits) + parts - 1) // parts
    out = []
    for i in range(0, len(bits), size):
        chunk = 0
        for b in bits[i:i + size]:
            chunk |= b
        out.append(chunk)
    return out


# -- public counting operations --------------------------------------------


def _check_pattern_host(host, pat: Pattern):
    # hosts are duck-typed: the search engine brings its own mutable host
    if not isinstance(pat, Pattern):
        raise TypeError("expected a Pattern")
    if not hasattr(host, "_links") or not hasattr(host, "n"):
        raise TypeError("expected a triple-system host")


def _guard(value: int) -> int:
    if value > COUNT_LIMIT:
        raise CountOverflowError(f"count {value} exceeds {COUNT_LIMIT}")
    return value


def count_embeddings(host: TripleSystem, pat: Pattern, workers: int = 1) -> int:
    """Number of edge-preserving injections from the pattern into the host."""
    _check_pattern_host(host, pat)
    if pat.f > host.n:
        return 0
    if workers > 1:
        full = (1 << host.n) - 1
        chunks = _split_mask(full, workers * 4)
        tasks = [(host, pat, {}, None, c, 1) for c in chunks]
        total, _ = _run_tasks(tasks, workers)
    else:
        total, _ = _count_completions(host, pat, {})
    return _guard(total)


def count_copies(host: TripleSystem, pat: Pattern, workers: int = 1) -> int:
    """Number of copies: embeddings divided (exactly) by ``|Aut|``."""
    emb = count_embeddings(host, pat, workers)
    if emb % pat.aut_count:
        raise EngineInvariantError(
            f"embeddings {emb} not divisible by |Aut|={pat.aut_count} for {pat.name}"
        )
    return _guard(emb // pat.aut_count)


def _anchor_edge_tasks(host, pat, e, forbidden):
    tasks = []
    for orbit in pat.edge_orbits():
        ra, rb, rc = orbit[0]
        mult = len(orbit)
        for pe in itertools.permutations(e):
            pre = {ra: pe[0], rb: pe[1], rc: pe[2]}
            tasks.append((host, pat, pre, forbidden, None, mult))
    return tasks


def copies_through_edge(host: TripleSystem, pat: Pattern, e, workers: int = 1) -> int:
    """Copies whose edge set includes the marked host edge ``e``."""
    _check_pattern_host(host, pat)
    e = triple(*e)
    if e not in host.edges:
        raise InvalidEdgeError(f"marked edge {e} not in host")
    if pat.f > host.n:
        return 0
    emb, _ = _run_tasks(_anchor_edge_tasks(host, pat, e, None), workers)
    if emb % pat.aut_count:
        raise EngineInvariantError(
            f"anchored embeddings {emb} not divisible by |Aut|={pat.aut_count}"
        )
    return _guard(emb // pat.aut_count)


def copies_through_vertex(host: TripleSystem, pat: Pattern, v: int, workers: int = 1) -> int:
    """Copies whose vertex set includes the host vertex ``v``."""
    _check_pattern_host(host, pat)
    if not (0 <= v < host.n):
        raise InvalidEdgeError(f"vertex {v} out of range")
    if pat.f > host.n:
        return 0
    tasks = []
    for orbit in pat.vertex_orbits():
        tasks.append((host, pat, {orbit[0]: v}, None, None, len(orbit)))
    emb, _ = _run_tasks(tasks, workers)
    if emb % pat.aut_count:
        raise EngineInvariantError(
            f"anchored embeddings {emb} not divisible by |Aut|={pat.aut_count}"
        )
    return _guard(emb // pat.aut_count)


def copies_exactly_one_marked(host: TripleSystem, pat: Pattern, marked, workers: int = 1) -> int:
    """Copies whose edge set meets the marked set in exactly one edge."""
    _check_pattern_host(host, pat)
    mset = [triple(*t) for t in marked]
    for t in mset:
        if t not in host.edges:
            raise InvalidEdgeError(f"marked edge {t} not in host")
    if pat.f > host.n:
        return 0
    forb = _forbidden_links(host, mset)
    tasks = []
    for e in mset:
        tasks.extend(_anchor_edge_tasks(host, pat, e, forb))
    emb, _ = _run_tasks(tasks, workers)
    if emb % pat.aut_count:
        raise EngineInvariantError(
            f"anchored embeddings {emb} not divisible by |Aut|={pat.aut_count}"
        )
    return _guard(emb // pat.aut_count)


def contains_copy(host: TripleSystem, pat: Pattern) -> bool:
    """True iff the host contains at least one copy of the pattern.

    Short-circuits on the first embedding.  The first placed vertex is
    restricted to be the minimum of the image per automorphism orbit,
    which is existence-preserving and prunes symmetric branches.
    """
    _check_pattern_host(host, pat)
    if pat.f > host.n or len(pat.edges) > len(host.edges):
        return False
    if max(pat.degrees) > max(host.degrees(), default=0):
        return False
    for orbit in pat.vertex_orbits():
        rep = orbit[0]
        for h in range(host.n):
            gt = ~((1 << (h + 1)) - 1)
            if _exists_completion(host, pat, {rep: h}, extra_mask=gt):
                return True
    return False


def contains_copy_through_edge(host: TripleSystem, pat: Pattern, e) -> bool:
    """True iff some copy of the pattern uses the host edge ``e``."""
    _check_pattern_host(host, pat)
    e = triple(*e)
    if e not in host.edges:
        raise InvalidEdgeError(f"marked edge {e} not in host")
    if pat.f > host.n:
        return False
    for orbit in pat.edge_orbits():
        ra, rb, rc = orbit[0]
        for pe in itertools.permutations(e):
            if _exists_completion(host, pat, {ra: pe[0], rb: pe[1], rc: pe[2]}):
                return True
    return False


# -- reports ---------------------------------------------------------------


@dataclass
class CountReport:
    """Result of a counting run, JSON-serializable with stable keys."""

    pattern: str
    n: int
    m: int
    total_copies: int
    total_embeddings: int
    nodes: int
    millis: int
    per_edge: dict | None = None
    per_vertex: dict | None = None

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "pattern": self.pattern,
            "n": self.n,
            "m": self.m,
            "total_copies": self.total_copies,
        }
        if self.per_edge is not None:
            out["per_edge"] = {
                " ".join(map(str, e)): c for e, c in sorted(self.per_edge.items())
            }
        if self.per_vertex is not None:
            out["per_vertex"] = {str(v): c for v, c in sorted(self.per_vertex.items())}
        out["nodes"] = self.nodes
        out["millis"] = self.millis if timing else 0
        return out


def count_report(
    host: TripleSystem,
    pat: Pattern,
    per_edge: bool = False,
    per_vertex: bool = False,
    workers: int = 1,
) -> CountReport:
    """Run a counting job and collect totals plus optional breakdowns."""
    start = time.perf_counter()
    if pat.f > host.n:
        total, nodes = 0, 0
    elif workers > 1:
        full = (1 << host.n) - 1
        chunks = _split_mask(full, workers * 4)
        tasks = [(host, pat, {}, None, c, 1) for c in chunks]
        total, nodes = _run_tasks(tasks, workers)
    else:
        total, nodes = _count_completions(host, pat, {})
    if total % pat.aut_count:
        raise EngineInvariantError(
            f"embeddings {total} not divisible by |Aut|={pat.aut_count}"
        )
    copies = _guard(total // pat.aut_count)
    pe = None
    if per_edge:
        pe = {e: copies_through_edge(host, pat, e, workers) for e in host.edge_list()}
    pv = None
    if per_vertex:
        pv = {v: copies_through_vertex(host, pat, v, workers) for v in range(host.n)}
    millis = int((time.perf_counter() - start) * 1000)
    return CountReport(
        pattern=pat.name,
        n=host.n,
        m=len(host.edges),
        total_copies=copies,
        total_embeddings=total,
        nodes=nodes,
        millis=millis,
        per_edge=pe,
        per_vertex=pv,
    )
