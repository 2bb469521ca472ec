"""Extremal hosts and the edge-addition strategies behind sharpness claims.

Generators return ``(TripleSystem, PartitionLabeling)`` pairs.  Addition
strategies take a generated base and return the enlarged system together
with the ordered tuple of added edges, which downstream audits treat as
the marked set.  Every strategy has an independent structural validator
here so generated outputs can be re-checked from scratch.

A construction is also expressible as a compact spec string, e.g.
``p3:n=8+zero2:q=4`` or ``t3r:n=12,r=3+apex:q=3``, accepted by the CLI.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    CapacityError,
    Error,
    PartitionLabeling,
    SearchBudgetError,
    TripleSystem,
    build,
)
from .formulas import DomainError, b3_part_size, t3r_part_sizes

DEFAULT_PACK_BUDGET = 500_000


class SpecError(Error):
    """A construction spec string is malformed or inconsistent."""


# -- base generators ---------------------------------------------------------


def _labeled_system(n, parts, keep):
    lab = PartitionLabeling(parts)
    edges = [t for t in itertools.combinations(range(n), 3) if keep(t, parts)]
    return build(n, edges), lab


def bipartite_max(n: int):
    """All triples crossing a balanced 2-split; parts of size floor(n/2)
    (part 0) and ceil(n/2) (part 1)."""
    if n < 3:
        raise DomainError(f"bipartite_max needs n >= 3, got {n}")
    small = n // 2
    parts = [0] * small + [1] * (n - small)
    return _labeled_system(n, parts, lambda t, p: len({p[v] for v in t}) == 2)


def tripartite_max(n: int):
    """All transversal triples of a balanced 3-split (ascending part sizes)."""
    return r_partite_max(n, 3)


def r_partite_max(n: int, r: int):
    """All transversal triples of a balanced r-split, part sizes
    floor((n+i-1)/r) ascending."""
    sizes = t3r_part_sizes(n, r)
    parts = []
    for i, s in enumerate(sizes):
        parts.extend([i] * s)
    return _labeled_system(n, parts, lambda t, p: len({p[v] for v in t}) == 3)


def two_one_max(n: int):
    """All triples with exactly two points in part 0, one in part 1; part 0
    has the smallest size maximizing C(a,2)*(n-a)."""
    a = b3_part_size(n)
    parts = [0] * a + [1] * (n - a)
    return _labeled_system(
        n, parts, lambda t, p: sorted(p[v] for v in t) == [0, 0, 1]
    )


# -- addition strategies -------------------------------------------------------


def _part_zero_two_capacity(v: int) -> int:
    # disjoint 4-blocks of 4 edges each, plus one edge on a leftover of 3
    return 4 * (v // 4) + (1 if v % 4 == 3 else 0)


def zero_two_capacity(n: int) -> int:
    """Max edges addable under the pairwise zero-or-two-point rule."""
    if n % 2 == 0:
        return 2 * _part_zero_two_capacity(n // 2)
    return _part_zero_two_capacity((n + 1) // 2)


def _zero_two_edges(verts, k):
    out = []
    i = 0
    while k > 0 and i + 4 <= len(verts):
        block = verts[i:i + 4]
        for t in itertools.combinations(block, 3):
            if k == 0:
                break
            out.append(t)
            k -= 1
        i += 4
    if k > 0 and len(verts) - i >= 3:
        out.append(tuple(verts[i:i + 3]))
        k -= 1
    if k > 0:
        raise CapacityError("zero-or-two-sharing capacity exceeded")
    return out


def add_zero_two_sharing(system: TripleSystem, labeling: PartitionLabeling, q: int):
    """Add q in-part edges with every two added edges sharing 0 or 2 points.

    Packed as disjoint 4-vertex blocks (4 edges each) plus at most one
    leftover edge per part.  For odd n only the larger part receives
    edges; for even n part 0 fills before part 1.
    """
    if q < 0:
        raise CapacityError(f"q must be nonnegative, got {q}")
    n = system.n
    if n % 2 == 1:
        targets = [1]
    else:
        targets = [0, 1]
    added = []
    for part in targets:
        if len(added) == q:
            break
        verts = labeling.members(part)
        cap = _part_zero_two_capacity(len(verts))
        take = min(q - len(added), cap)
        added.extend(_zero_two_edges(verts, take))
    if len(added) < q:
        raise CapacityError(
            f"q={q} exceeds zero-or-two-sharing capacity {zero_two_capacity(n)}"
        )
    return system.add_edges(added), tuple(added)


def _greedy_pack(cands, q, accepts, budget):
    """Greedy insertion in candidate order with backtracking.

    ``accepts(chosen, chosen_set, t)`` decides whether t is compatible
    with the already-chosen triples.
    """
    chosen = []
    chosen_set = set()
    nodes = 0

    def rec(start):
        nonlocal nodes
        if len(chosen) == q:
            return True
        for i in range(start, len(cands)):
            nodes += 1
            if nodes > budget:
                raise SearchBudgetError(
                    f"packing budget {budget} exhausted at {len(chosen)}/{q} triples"
                )
            t = cands[i]
            if accepts(chosen, chosen_set, t):
                chosen.append(t)
                chosen_set.add(t)
                if rec(i + 1):
                    return True
                chosen.pop()
                chosen_set.discard(t)
        return False

    if not rec(0):
        raise CapacityError(f"could not place q={q} triples")
    return chosen


def _linear_ok(chosen, t):
    ts = set(t)
    return all(len(ts & set(c)) <= 1 for c in chosen)


def _completes_pasch(chosen, chosen_set, t):
    # adding t closes a linear quadrilateral iff two chosen edges meet t in
    # distinct single points, meet each other off t, and the fourth triple
    # deduced from the three leftovers is already chosen
    ts = set(t)
    for i, c1 in enumerate(chosen):
        m1 = ts & set(c1)
        if len(m1) != 1:
            continue
        (p1,) = m1
        for c2 in chosen[i + 1:]:
            m2 = ts & set(c2)
            if len(m2) != 1:
                continue
            (p2,) = m2
            if p1 == p2:
                continue
            mw = set(c1) & set(c2)
            if len(mw) != 1:
                continue
            (w,) = mw
            if w in ts:
                continue
            (p3,) = ts - {p1, p2}
            (b3,) = set(c1) - {p1, w}
            (c3,) = set(c2) - {p2, w}
            if tuple(sorted((p3, b3, c3))) in chosen_set:
                return True
    return False


def _ordered_triples(verts, seed):
    cands = list(itertools.combinations(sorted(verts), 3))
    if seed is not None:
        random.Random(seed).shuffle(cands)
    return cands


def add_anti_pasch(
    system: TripleSystem,
    labeling: PartitionLabeling,
    part: int,
    q: int,
    seed: int | None = None,
    budget: int = DEFAULT_PACK_BUDGET,
):
    """Add q triples inside a part, pairwise sharing at most one point and
    containing no linear quadrilateral (deleted-point plane) among them.

    Deterministic given the seed; ``seed=None`` packs in lexicographic
    order.
    """
    verts = labeling.members(part)
    if len(verts) < 7:
        raise DomainError(f"anti-pasch addition needs part size >= 7, got {len(verts)}")
    cands = _ordered_triples(verts, seed)

    def accepts(chosen, chosen_set, t):
        return _linear_ok(chosen, t) and not _completes_pasch(chosen, chosen_set, t)

    added = _greedy_pack(cands, q, accepts, budget)
    return system.add_edges(added), tuple(added)


def add_partite_inside_part(
    system: TripleSystem,
    labeling: PartitionLabeling,
    part: int,
    q: int,
    seed: int | None = None,
):
    """Add q transversal triples of a balanced 3-split of one part."""
    verts = labeling.members(part)
    if len(verts) < 3:
        raise DomainError(f"part {part} too small to subsplit, size {len(verts)}")
    sizes = t3r_part_sizes(len(verts), 3)
    subs = []
    at = 0
    for s in sizes:
        subs.append(verts[at:at + s])
        at += s
    cands = [
        tuple(sorted((a, b, c)))
        for a in subs[0]
        for b in subs[1]
        for c in subs[2]
    ]
    cands.sort()
    if seed is not None:
        random.Random(seed).shuffle(cands)
    if q > len(cands):
        raise CapacityError(
            f"q={q} exceeds sub-partition transversal capacity {len(cands)}"
        )
    added = cands[:q]
    return system.add_edges(added), tuple(added)


def add_linear_inside_part(
    system: TripleSystem,
    labeling: PartitionLabeling,
    q: int,
    seed: int | None = None,
    budget: int = DEFAULT_PACK_BUDGET,
    part: int = 0,
):
    """Add q triples inside the pair-carrying part, pairwise sharing at
    most one point (a partial Steiner system)."""
    verts = labeling.members(part)
    if len(verts) < 7:
        raise DomainError(f"linear addition needs part size >= 7, got {len(verts)}")
    cands = _ordered_triples(verts, seed)

    def accepts(chosen, chosen_set, t):
        return _linear_ok(chosen, t)

    added = _greedy_pack(cands, q, accepts, budget)
    return system.add_edges(added), tuple(added)


def _largest_part(labeling: PartitionLabeling) -> int:
    sizes = labeling.part_sizes
    return max(range(len(sizes)), key=lambda i: (sizes[i], i))


def add_disjoint_edges(system: TripleSystem, labeling: PartitionLabeling, q: int):
    """Add q pairwise-disjoint edges, each with exactly two points in a
    largest part and one point elsewhere."""
    big_idx = _largest_part(labeling)
    big = labeling.members(big_idx)
    others = []
    for i in range(labeling.num_parts()):
        if i != big_idx:
            others.extend(labeling.members(i))
    cap = min(len(big) // 2, len(others))
    if q > cap:
        raise CapacityError(f"q={q} exceeds disjoint-edge capacity {cap}")
    added = [
        tuple(sorted((big[2 * k], big[2 * k + 1], others[k]))) for k in range(q)
    ]
    return system.add_edges(added), tuple(added)


def add_fixed_apex_pairs(system: TripleSystem, labeling: PartitionLabeling, q: int):
    """Add q edges {x, x', y} with x, x' from part 0 and one fixed apex
    vertex y from part 1."""
    v1 = labeling.members(0)
    v2 = labeling.members(1)
    if not v2:
        raise DomainError("apex addition needs a nonempty second part")
    y = v2[0]
    pairs = list(itertools.combinations(v1, 2))
    if q > len(pairs):
        raise CapacityError(f"q={q} exceeds apex capacity {len(pairs)}")
    added = [tuple(sorted((a, b, y))) for a, b in pairs[:q]]
    return system.add_edges(added), tuple(added)


def f5_density_counterexample(n: int, eps: Fraction):
    """A balanced 3-partite host perturbed to have eps*n extra edges while
    keeping all five-vertex three-edge copies confined to the added edges.

    Deletes eps*n/3 transversal edges through a fixed cross pair (x, y)
    and adds 4*eps*n/3 edges {x_i, x, y_j} with both x-points in the
    first part.  When the fixed apex pair's supply of x_i runs out, the
    fan continues with further apexes y_j from the second part, which
    preserves the defining properties at every size.
    """
    eps = Fraction(eps)
    k_del = eps * n / 3
    k_add = 4 * eps * n / 3
    if k_del.denominator != 1 or k_add.denominator != 1:
        raise DomainError(f"eps*n/3 and 4*eps*n/3 must be integers, got eps={eps}, n={n}")
    k_del, k_add = int(k_del), int(k_add)
    system, labeling = tripartite_max(n)
    xs = labeling.members(0)
    ys = labeling.members(1)
    zs = labeling.members(2)
    if k_del > len(zs):
        raise DomainError(f"deletion count {k_del} exceeds part size {len(zs)}")
    if k_add > (len(xs) - 1) * len(ys):
        raise DomainError(f"addition count {k_add} exceeds capacity {(len(xs) - 1) * len(ys)}")
    x0 = xs[0]
    removed = [tuple(sorted((x0, ys[0], zs[i]))) for i in range(k_del)]
    added = []
    for y in ys:
        for xi in xs[1:]:
            if len(added) == k_add:
                break
            added.append(tuple(sorted((xi, x0, y))))
        if len(added) == k_add:
            break
    out = system.remove_edges(removed).add_edges(added)
    return out, labeling, tuple(added), tuple(removed)


# -- validators ---------------------------------------------------------------


def validate_inside_part(edges, labeling: PartitionLabeling, part: int) -> bool:
    """Every edge entirely within the given part."""
    return all(all(labeling.parts[v] == part for v in e) for e in edges)


def validate_zero_two_sharing(edges) -> bool:
    """Every two edges share zero or two points."""
    return all(
        len(set(a) & set(b)) in (0, 2) for a, b in itertools.combinations(edges, 2)
    )


def validate_linear(edges) -> bool:
    """Every two edges share at most one point."""
    return all(
        len(set(a) & set(b)) <= 1 for a, b in itertools.combinations(edges, 2)
    )


def validate_pasch_free(edges) -> bool:
    """No four edges form the 6-point linear quadrilateral.

    Assumes the family is linear; under linearity, four edges spanning
    exactly six points with every point on exactly two of them are the
    quadrilateral.
    """
    for quad in itertools.combinations(edges, 4):
        deg: dict = {}
        for e in quad:
            for v in e:
                deg[v] = deg.get(v, 0) + 1
        if len(deg) == 6 and all(d == 2 for d in deg.values()):
            return False
    return True


def validate_disjoint(edges) -> bool:
    """Edges pairwise vertex-disjoint."""
    return all(
        not (set(a) & set(b)) for a, b in itertools.combinations(edges, 2)
    )


# -- spec strings --------------------------------------------------------------

_BASES = {"p3", "t3", "b3", "t3r"}
_ADDITIONS = {"zero2", "antipasch", "partite", "linear", "disjoint", "apex", "f5cx"}
_COMPAT = {
    "zero2": "p3",
    "antipasch": "p3",
    "partite": "t3",
    "linear": "b3",
    "disjoint": "t3r",
    "apex": "t3r",
    "f5cx": "t3",
}
_PARAM_ORDER = ("n", "r", "part", "q", "eps", "seed")


@dataclass(frozen=True)
class ConstructionSpec:
    """A base generator plus an ordered list of addition strategies."""

    base: str
    params: tuple  # sorted (key, value) pairs
    additions: tuple = ()  # of (kind, sorted (key, value) pairs)

    def param(self, key, default=None):
        return dict(self.params).get(key, default)

    def format(self) -> str:
        out = [_format_clause(self.base, dict(self.params))]
        out.extend(_format_clause(k, dict(p)) for k, p in self.additions)
        return "+".join(out)


@dataclass
class RealizedConstruction:
    """A built construction: the system, its labeling, and the edit lists."""

    spec: ConstructionSpec
    system: TripleSystem
    labeling: PartitionLabeling
    added: tuple = ()
    removed: tuple = ()


def _format_value(v) -> str:
    if isinstance(v, Fraction) and v.denominator != 1:
        return f"{v.numerator}/{v.denominator}"
    return str(int(v))


def _format_clause(kind, params) -> str:
    body = ",".join(
        f"{k}={_format_value(params[k])}" for k in _PARAM_ORDER if k in params
    )
    return f"{kind}:{body}" if body else kind


def _parse_value(key, raw):
    if key == "eps":
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise SpecError(f"bad fraction {raw!r}") from None
    try:
        return int(raw)
    except ValueError:
        raise SpecError(f"bad integer {raw!r} for {key}") from None


def _parse_clause(text):
    kind, _, body = text.partition(":")
    params = {}
    if body:
        for item in body.split(","):
            key, eq, raw = item.partition("=")
            if not eq or not key or not raw:
                raise SpecError(f"bad parameter {item!r} in {text!r}")
            if key in params:
                raise SpecError(f"duplicate parameter {key!r} in {text!r}")
            params[key] = _parse_value(key, raw)
    return kind, params


def parse_spec(text: str) -> ConstructionSpec:
    """Parse a compact construction string like ``p3:n=8+zero2:q=4``."""
    clauses = text.strip().split("+")
    if not clauses or not clauses[0]:
        raise SpecError("empty construction spec")
    base, bp = _parse_clause(clauses[0])
    if base not in _BASES:
        raise SpecError(f"unknown base {base!r}")
    if "n" not in bp:
        raise SpecError(f"base {base!r} needs n=")
    if base == "t3r" and "r" not in bp:
        raise SpecError("base 't3r' needs r=")
    allowed_base = {"n"} | ({"r"} if base == "t3r" else set())
    extra = set(bp) - allowed_base
    if extra:
        raise SpecError(f"unexpected base parameters {sorted(extra)}")
    additions = []
    for clause in clauses[1:]:
        kind, kp = _parse_clause(clause)
        if kind not in _ADDITIONS:
            raise SpecError(f"unknown addition {kind!r}")
        if _COMPAT[kind] != base:
            raise SpecError(f"addition {kind!r} requires base {_COMPAT[kind]!r}, got {base!r}")
        if kind == "f5cx":
            if "eps" not in kp:
                raise SpecError("f5cx needs eps=")
        elif "q" not in kp:
            raise SpecError(f"addition {kind!r} needs q=")
        allowed = {
            "zero2": {"q"},
            "antipasch": {"part", "q", "seed"},
            "partite": {"part", "q", "seed"},
            "linear": {"q", "seed"},
            "disjoint": {"q"},
            "apex": {"q"},
            "f5cx": {"eps"},
        }[kind]
        extra = set(kp) - allowed
        if extra:
            raise SpecError(f"unexpected parameters {sorted(extra)} for {kind!r}")
        additions.append((kind, tuple(sorted(kp.items()))))
    if any(k == "f5cx" for k, _ in additions) and len(additions) != 1:
        raise SpecError("f5cx rebuilds the base and must be the only addition")
    return ConstructionSpec(base, tuple(sorted(bp.items())), tuple(additions))


def realize(spec: ConstructionSpec, budget: int = DEFAULT_PACK_BUDGET) -> RealizedConstruction:
    """Build the base and apply each addition strategy in order."""
    params = dict(spec.params)
    n = params["n"]
    added_all: list = []
    removed_all: list = []
    if spec.base == "p3":
        system, labeling = bipartite_max(n)
    elif spec.base == "t3":
        system, labeling = tripartite_max(n)
    elif spec.base == "b3":
        system, labeling = two_one_max(n)
    else:
        system, labeling = r_partite_max(n, params["r"])
    for kind, kp in spec.additions:
        kp = dict(kp)
        if kind == "zero2":
            system, added = add_zero_two_sharing(system, labeling, kp["q"])
        elif kind == "antipasch":
            system, added = add_anti_pasch(
                system, labeling, kp.get("part", 1), kp["q"], kp.get("seed"), budget
            )
        elif kind == "partite":
            part = kp.get("part", labeling.num_parts() - 1)
            system, added = add_partite_inside_part(
                system, labeling, part, kp["q"], kp.get("seed")
            )
        elif kind == "linear":
            system, added = add_linear_inside_part(
                system, labeling, kp["q"], kp.get("seed"), budget
            )
        elif kind == "disjoint":
            system, added = add_disjoint_edges(system, labeling, kp["q"])
        elif kind == "apex":
            system, added = add_fixed_apex_pairs(system, labeling, kp["q"])
        else:  # f5cx rebuilds from scratch: it also deletes base edges
            system, labeling, added, removed = f5_density_counterexample(n, kp["eps"])
            removed_all.extend(removed)
        added_all.extend(added)
    return RealizedConstruction(
        spec, system, labeling, tuple(added_all), tuple(removed_all)
    )
