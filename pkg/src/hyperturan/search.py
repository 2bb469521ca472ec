"""Exact extremal searches, engine-backed one-edge minima, and audits.

``exact_turan`` runs a branch-and-bound over all triples in lexicographic
order, pruning branches whose optimistic completion cannot beat the
incumbent and rejecting any triple that completes a forbidden copy.
``c_exact`` computes the minimum pattern count through a single edge
added to the matching extremal base, reduced to one representative
non-edge per part-signature orbit.  The audit operations re-count the
sharp constructions and random perturbations with the engine and report
margins against ``q * c_exact`` without asserting asymptotic theorems at
desk scale.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from .core import TripleSystem, build, dumps
from .counting import (
    contains_copy_through_edge,
    copies_exactly_one_marked,
    copies_through_edge,
    count_copies,
)
from .constructions import ConstructionSpec, parse_spec, realize
from .formulas import CopyBound, DomainError
from .patterns import Pattern, by_name

#: Branch-and-bound node budget when none is given.
DEFAULT_SEARCH_BUDGET = 50_000_000

#: Optimality proofs are refused above this many vertices.
PROOF_VERTEX_LIMIT = 7


@dataclass
class SearchResult:
    """Outcome of an extremal search."""

    n: int
    forbidden: tuple
    best_size: int
    witnesses: tuple  # TripleSystems with best_size edges
    proved_optimal: bool
    nodes: int
    millis: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "forbidden": list(self.forbidden),
            "best_size": self.best_size,
            "proved_optimal": self.proved_optimal,
            "witnesses": [dumps(w) for w in self.witnesses],
            "nodes": self.nodes,
            "millis": self.millis,
        }


class _MutableHost:
    """Minimal in-place host sharing the counting engine's interface."""

    def __init__(self, n: int):
        self.n = n
        self.edges = set()
        self._links: dict = {}
        self._deg = [0] * n

    def degrees(self):
        return self._deg

    def add(self, t):
        a, b, c = t
        n = self.n
        self.edges.add(t)
        self._links[a * n + b] = self._links.get(a * n + b, 0) | (1 << c)
        self._links[a * n + c] = self._links.get(a * n + c, 0) | (1 << b)
        self._links[b * n + c] = self._links.get(b * n + c, 0) | (1 << a)
        self._deg[a] += 1
        self._deg[b] += 1
        self._deg[c] += 1

    def remove(self, t):
        a, b, c = t
        n = self.n
        self.edges.discard(t)
        self._links[a * n + b] &= ~(1 << c)
        self._links[a * n + c] &= ~(1 << b)
        self._links[b * n + c] &= ~(1 << a)
        self._deg[a] -= 1
        self._deg[b] -= 1
        self._deg[c] -= 1

    def freeze(self) -> TripleSystem:
        return build(self.n, self.edges)


def exact_turan(
    n: int,
    forbidden,
    budget: int = DEFAULT_SEARCH_BUDGET,
    symmetry_breaking: bool = False,
    witness_cap: int = 4,
) -> SearchResult:
    """Maximum edges of an n-vertex system avoiding every given pattern.

    Branch and bound over triples in lexicographic order with the
    remaining-triples optimistic bound.  ``proved_optimal`` is set only
    when the space was exhausted within budget and n is at most
    :data:`PROOF_VERTEX_LIMIT`.  With ``symmetry_breaking`` the search
    only visits systems containing the first triple (every nonempty
    system has an isomorphic relabeling whose lexicographically least
    edge is (0,1,2)), which is sound for the maximum.
    """
    pats = tuple(forbidden)
    start = time.perf_counter()
    triples = list(itertools.combinations(range(n), 3))
    host = _MutableHost(n)
    best = 0
    witnesses: list = []
    nodes = 0
    exhausted = True

    def dfs(i, size):
        nonlocal best, nodes, exhausted
        if nodes > budget:
            exhausted = False
            return
        remaining = len(triples) - i
        if size + remaining < best:
            return
        if size + remaining == best and len(witnesses) >= witness_cap:
            return
        if i == len(triples):
            if size > best:
                best = size
                witnesses.clear()
            if size == best and len(witnesses) < witness_cap:
                witnesses.append(host.freeze())
            return
        t = triples[i]
        nodes += 1
        host.add(t)
        if not any(contains_copy_through_edge(host, p, t) for p in pats):
            dfs(i + 1, size + 1)
        host.remove(t)
        if symmetry_breaking and i == 0:
            # only the empty system lives in the exclude branch
            if best == 0 and not witnesses:
                witnesses.append(host.freeze())
            return
        dfs(i + 1, size)

    dfs(0, 0)
    proved = exhausted and n <= PROOF_VERTEX_LIMIT
    millis = int((time.perf_counter() - start) * 1000)
    witnesses.sort(key=lambda w: sorted(w.edges))
    return SearchResult(
        n=n,
        forbidden=tuple(p.name for p in pats),
        best_size=best,
        witnesses=tuple(witnesses),
        proved_optimal=proved,
        nodes=nodes,
        millis=millis,
    )


# -- one-added-edge minima ----------------------------------------------------


def base_for_pattern(pat: Pattern, n: int):
    """The extremal base whose one-edge perturbation defines the minimum."""
    from . import constructions as cons

    if pat.name == "fano":
        return cons.bipartite_max(n)
    if pat.name == "f5":
        return cons.tripartite_max(n)
    if pat.name == "b5":
        return cons.two_one_max(n)
    if pat.name.startswith("L"):
        s = int(pat.name[1:])
        return cons.r_partite_max(n, s - 1)
    raise DomainError(f"no extremal base registered for pattern {pat.name!r}")


def _signature(t, labeling):
    return tuple(sorted(labeling.parts[v] for v in t))


def c_exact(
    pat: Pattern,
    n: int,
    r: int | None = None,
    orbit_reduction: bool = True,
    workers: int = 1,
) -> CopyBound:
    """Minimum copies through one added edge, over all non-edges of the
    pattern's extremal base.

    With ``orbit_reduction`` only one representative non-edge per
    part-signature class is counted; within-part permutations are base
    automorphisms, so classmates give equal counts.  The witness is the
    lexicographically first minimizing representative.
    """
    if isinstance(pat, str):
        pat = by_name(pat)
    if pat.name.startswith("L") and r is not None and r != int(pat.name[1:]) - 1:
        raise DomainError(f"pattern {pat.name} pairs with r={int(pat.name[1:]) - 1}, got r={r}")
    if n < pat.f:
        raise DomainError(f"n={n} below pattern size {pat.f}")
    base, labeling = base_for_pattern(pat, n)
    if orbit_reduction:
        reps = {}
        for t in base.non_edges():
            sig = _signature(t, labeling)
            if sig not in reps:
                reps[sig] = t
        candidates = [reps[s] for s in sorted(reps)]
    else:
        candidates = list(base.non_edges())
    best = None
    witness = None
    for e in candidates:
        host = base.add_edges([e])
        c = copies_through_edge(host, pat, e, workers=workers)
        if best is None or c < best:
            best, witness = c, e
    if best is None:
        raise DomainError(f"base for {pat.name} at n={n} has no non-edges")
    return CopyBound(
        pattern=pat.name, n=n, value=best, provenance="engine-min", witness=witness
    )


# -- audits --------------------------------------------------------------------


@dataclass
class AuditReport:
    """Engine-counted totals for a construction against q * c_exact."""

    spec: str
    pattern: str
    q: int
    total_copies: int
    per_added_edge: dict
    exactly_one_marked: int
    bound: int
    margin: int
    trial: int = 0

    def to_dict(self) -> dict:
        return {
            "spec": self.spec,
            "pattern": self.pattern,
            "q": self.q,
            "trial": self.trial,
            "total_copies": self.total_copies,
            "per_added_edge": {
                " ".join(map(str, e)): c for e, c in sorted(self.per_added_edge.items())
            },
            "exactly_one_marked": self.exactly_one_marked,
            "bound": self.bound,
            "margin": self.margin,
        }


def _audit_system(
    spec_str, pat, system, added, bound, workers: int = 1, trial: int = 0
) -> AuditReport:
    total = count_copies(system, pat, workers=workers)
    per_edge = {e: copies_through_edge(system, pat, e, workers=workers) for e in added}
    exactly_one = copies_exactly_one_marked(system, pat, added, workers=workers) if added else 0
    return AuditReport(
        spec=spec_str,
        pattern=pat.name,
        q=len(added),
        total_copies=total,
        per_added_edge=per_edge,
        exactly_one_marked=exactly_one,
        bound=bound,
        margin=total - bound,
        trial=trial,
    )


def _coerce_spec(spec) -> ConstructionSpec:
    if isinstance(spec, str):
        return parse_spec(spec)
    return spec


def audit_sharpness(spec, pat: Pattern, q: int, workers: int = 1) -> AuditReport:
    """Count copies in the realized construction and compare against
    q * c_exact; the margin is zero exactly when the addition is sharp."""
    spec = _coerce_spec(spec)
    if isinstance(pat, str):
        pat = by_name(pat)
    rc = realize(spec)
    if len(rc.added) != q:
        raise DomainError(f"spec adds {len(rc.added)} edges, audit expects q={q}")
    n = rc.system.n
    bound = q * c_exact(pat, n).value if q else 0
    return _audit_system(spec.format(), pat, rc.system, rc.added, bound, workers)


def audit_perturbed(
    spec,
    pat: Pattern,
    q: int,
    trials: int,
    seed: int = 0,
    mode: str = "add",
    workers: int = 1,
) -> list:
    """Engine counts over randomized variants of a construction.

    Trial 0 is always the spec's own (sharp) addition; later trials add
    q random non-edges to the base (``mode="add"``) or swap one random
    added edge for a random non-edge at fixed edge count
    (``mode="rewire"``).  Margins are reported, never asserted.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if mode not in ("add", "rewire"):
        raise DomainError(f"unknown perturbation mode {mode!r}")
    spec = _coerce_spec(spec)
    if isinstance(pat, str):
        pat = by_name(pat)
    rc = realize(spec)
    if len(rc.added) != q:
        raise DomainError(f"spec adds {len(rc.added)} edges, audit expects q={q}")
    n = rc.system.n
    bound = q * c_exact(pat, n).value if q else 0
    rng = random.Random(seed)
    base = rc.system.remove_edges(rc.added)
    reports = [_audit_system(spec.format(), pat, rc.system, rc.added, bound, workers, 0)]
    for trial in range(1, trials):
        if mode == "add":
            pool = [t for t in base.non_edges()]
            added = tuple(sorted(rng.sample(pool, q)))
            system = base.add_edges(added)
        else:
            drop = rng.choice(rc.added)
            kept = tuple(t for t in rc.added if t != drop)
            stripped = rc.system.remove_edges([drop])
            pool = [t for t in stripped.non_edges()]
            new_edge = rng.choice(pool)
            system = stripped.add_edges([new_edge])
            added = tuple(sorted(kept + (new_edge,)))
        reports.append(
            _audit_system(spec.format(), pat, system, added, bound, workers, trial)
        )
    return reports
