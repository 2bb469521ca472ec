"""Acceptance suite.

One test per criterion; each prints a single pass/fail line (run with
``pytest -s`` to see them) and asserts exact values only.
"""

import itertools
import math
import random
import time

from hyperturan.core import build, complete
from hyperturan.counting import (
    contains_copy,
    copies_exactly_one_marked,
    copies_through_edge,
    copies_through_vertex,
    count_copies,
    count_embeddings,
)
from hyperturan.constructions import (
    add_anti_pasch,
    bipartite_max,
    parse_spec,
    r_partite_max,
    realize,
    tripartite_max,
    two_one_max,
    validate_inside_part,
    validate_linear,
    validate_pasch_free,
)
from hyperturan.formulas import (
    c_fano,
    lemma1_check,
    lemma1_hypothesis,
    lemma2_check,
    lemma2_hypothesis,
    p3_size,
    q_fano,
    t3_size,
    t3r_part_sizes,
)
from hyperturan.patterns import by_name
from hyperturan.search import c_exact, exact_turan

from oracle import naive_automorphism_count, naive_copies

L4 = by_name("L4")


def _conclude(num, name, start, failures):
    elapsed = time.perf_counter() - start
    status = "PASS" if not failures else "FAIL"
    print(f"[criterion {num:02d}] {name}: {status} ({elapsed:.1f}s)")
    assert not failures, f"criterion {num} failures: {failures[:10]}"


def test_criterion_01_fano_self_consistency():
    start = time.perf_counter()
    failures = []
    fano = by_name("fano")
    k7 = complete(7)
    if count_copies(k7, fano) != 30:
        failures.append("engine copies != 30")
    if fano.aut_count != 168:
        failures.append("aut != 168")
    if naive_copies(7, k7.edges, 7, fano.edges) != 30:
        failures.append("oracle copies != 30")
    if naive_automorphism_count(7, fano.edges) != 168:
        failures.append("oracle aut != 168")
    _conclude(1, "fano self-consistency (30 copies, 168 automorphisms)", start, failures)


def test_criterion_02_extremal_bases_are_pattern_free():
    start = time.perf_counter()
    failures = []
    fano = by_name("fano")
    for n in range(7, 15):
        if contains_copy(bipartite_max(n)[0], fano):
            failures.append(f"fano in bipartite host n={n}")
    for n in range(3, 13):
        host, _ = tripartite_max(n)
        for name in ("f5", "k4minus"):
            if contains_copy(host, by_name(name)):
                failures.append(f"{name} in tripartite host n={n}")
    for n in range(3, 13):
        if contains_copy(two_one_max(n)[0], by_name("b5")):
            failures.append(f"b5 in two-one host n={n}")
    for n in range(3, 13):
        if contains_copy(r_partite_max(n, 3)[0], L4):
            failures.append(f"L4 in 3-partite host n={n}")
    _conclude(2, "extremal bases contain no forbidden pattern", start, failures)


def test_criterion_03_one_edge_minimum_matches_closed_form():
    start = time.perf_counter()
    failures = []
    fano = by_name("fano")
    for n in (8, 9, 10, 12):
        bound = c_exact(fano, n)
        if bound.value != c_fano(n):
            failures.append(f"n={n}: engine {bound.value} != formula {c_fano(n)}")
        if n % 2 == 1:
            _, lab = bipartite_max(n)
            if not validate_inside_part([bound.witness], lab, 1):
                failures.append(f"n={n}: witness {bound.witness} not in larger part")
    _conclude(3, "one-added-edge fano minimum equals closed form", start, failures)


def test_criterion_04_sharp_construction_identity():
    start = time.perf_counter()
    failures = []
    fano = by_name("fano")
    for n in (8, 10):
        for q in range(0, q_fano(n) + 1):
            rc = realize(parse_spec(f"p3:n={n}+zero2:q={q}"))
            total = count_copies(rc.system, fano)
            if total != q * c_fano(n):
                failures.append(f"n={n} q={q}: total {total} != {q * c_fano(n)}")
            exactly_one = (
                copies_exactly_one_marked(rc.system, fano, rc.added) if q else 0
            )
            if exactly_one != total:
                failures.append(f"n={n} q={q}: exactly-one {exactly_one} != total {total}")
    _conclude(4, "zero-or-two additions give exactly q*c copies", start, failures)


def test_criterion_05_cancellative_turan_numbers():
    start = time.perf_counter()
    failures = []
    pats = [by_name("f5"), by_name("k4minus")]
    for n in (5, 6):
        res = exact_turan(n, pats)
        if res.best_size != t3_size(n):
            failures.append(f"n={n}: best {res.best_size} != t3 {t3_size(n)}")
        if not res.proved_optimal:
            failures.append(f"n={n}: not proved optimal")
    _conclude(5, "cancellative maxima match the 3-partite size (proved)", start, failures)


def test_criterion_06_sharpness_structure():
    start = time.perf_counter()
    failures = []
    ran = 0

    def check(spec_text, pat):
        nonlocal ran
        rc = realize(parse_spec(spec_text))
        total = count_copies(rc.system, pat)
        exactly_one = copies_exactly_one_marked(rc.system, pat, rc.added)
        if exactly_one != total:
            failures.append(f"{spec_text}: exactly-one {exactly_one} != total {total}")
        ran += 1

    f5 = by_name("f5")
    b5 = by_name("b5")
    for n in range(9, 13):
        part_size = t3r_part_sizes(n, 3)[2]
        cap = math.prod(t3r_part_sizes(part_size, 3))
        for q in range(1, min(3, cap) + 1):
            check(f"t3:n={n}+partite:part=2,q={q}", f5)
    for n in range(9, 13):
        from hyperturan.formulas import b3_part_size

        if b3_part_size(n) < 7:
            continue  # linear packing is defined from part size 7 upward
        for q in range(1, 4):
            check(f"b3:n={n}+linear:q={q}", b5)
    for n in range(9, 13):
        n1 = t3r_part_sizes(n, 3)[0]
        for q in range(1, min(3, math.comb(n1, 2)) + 1):
            check(f"t3r:n={n},r=3+apex:q={q}", L4)
    _conclude(6, f"no copy spans two added edges ({ran} constructions)", start, failures)


def test_criterion_07_density_counterexample():
    start = time.perf_counter()
    failures = []
    f5 = by_name("f5")
    rc = realize(parse_spec("t3:n=12+f5cx:eps=1/2"))
    if len(rc.system.edges) != t3_size(12) + 6:
        failures.append(f"edge count {len(rc.system.edges)} != {t3_size(12) + 6}")
    stripped = rc.system.remove_edges(rc.added)
    if count_copies(stripped, f5) != 0:
        failures.append("a copy avoids every added edge")
    total = count_copies(rc.system, f5)
    if not total < 864:
        failures.append(f"total {total} not below 864")
    _conclude(7, "perturbed 3-partite host keeps copies scarce and confined", start, failures)


def test_criterion_08_lemma_suites():
    start = time.perf_counter()
    failures = []
    rng = random.Random(11)
    checked1 = 0
    for n in range(20, 61):
        p3 = p3_size(n)
        fvals = [
            math.comb(x, 2) * (n - x) + math.comb(n - x, 2) * x for x in range(n + 1)
        ]
        for t in range(1, n * n):
            for x in range(1, n):
                if fvals[x] >= p3 - t:
                    checked1 += 1
                    if not lemma1_check(n, x, t):
                        failures.append(f"lemma1 n={n} x={x} t={t}")
            # the inline hypothesis filter must agree with the public one
            xs = rng.randrange(1, n)
            if (fvals[xs] >= p3 - t) != lemma1_hypothesis(n, xs, t):
                failures.append(f"filter mismatch n={n} x={xs} t={t}")
    if checked1 < 500_000:
        failures.append(f"lemma1 domain unexpectedly small: {checked1}")
    vacuous = 0
    for _ in range(2000):
        n = rng.randrange(20, 61)
        x, t = rng.randrange(1, n), rng.randrange(1, n * n)
        if not lemma1_hypothesis(n, x, t):
            vacuous += 1
            if not lemma1_check(n, x, t):
                failures.append(f"vacuous lemma1 case failed n={n} x={x} t={t}")
    checked2 = 0
    for n in range(20, 61):
        for s in range(1, (n + 9) // 10):
            if s * 10 >= n:
                break
            for x in range(1, n):
                if lemma2_hypothesis(n, x, s):
                    checked2 += 1
                if not lemma2_check(n, x, s):
                    failures.append(f"lemma2 n={n} x={x} s={s}")
    if checked2 < 500:
        failures.append(f"lemma2 domain unexpectedly small: {checked2}")
    _conclude(
        8,
        f"inequality suites hold ({checked1} + {checked2} hypothesis-true cases)",
        start,
        failures,
    )


def test_criterion_09_engine_property_suite():
    start = time.perf_counter()
    failures = []
    rng = random.Random(97)
    catalog = [by_name(x) for x in ("f5", "k4minus", "b5", "pasch", "fano")]
    cases = 0
    oracle_cases = 0
    fano_nine_oracles = 0
    while cases < 500:
        n = rng.randint(5, 9)
        pool = list(itertools.combinations(range(n), 3))
        host = build(n, rng.sample(pool, rng.randint(0, len(pool))))
        pat = rng.choice([p for p in catalog if p.f <= n])
        cases += 1
        tag = f"case {cases} ({pat.name}, n={n}, m={len(host.edges)})"
        total = count_copies(host, pat)
        if count_embeddings(host, pat) != total * pat.aut_count:
            failures.append(f"{tag}: embeddings not |Aut| * copies")
        edge_sum = sum(copies_through_edge(host, pat, e) for e in host.edge_list())
        if edge_sum != len(pat.edges) * total:
            failures.append(f"{tag}: edge double counting")
        vertex_sum = sum(copies_through_vertex(host, pat, v) for v in range(n))
        if vertex_sum != pat.f * total:
            failures.append(f"{tag}: vertex double counting")
        non_edges = [t for t in pool if t not in host.edges]
        if non_edges:
            grown = host.add_edges([rng.choice(non_edges)])
            if count_copies(grown, pat) < total:
                failures.append(f"{tag}: not monotone")
        perm = list(range(n))
        rng.shuffle(perm)
        relabeled = build(n, [tuple(perm[v] for v in e) for e in host.edges])
        if count_copies(relabeled, pat) != total:
            failures.append(f"{tag}: not relabeling-invariant")
        if cases % 50 == 0 and count_copies(host, pat, workers=2) != total:
            failures.append(f"{tag}: worker count changed the total")
        run_oracle = math.perm(n, pat.f) <= 70_000 or (
            pat.name == "fano" and n == 9 and fano_nine_oracles < 5
        )
        if run_oracle:
            oracle_cases += 1
            if pat.name == "fano" and n == 9:
                fano_nine_oracles += 1
            if naive_copies(n, host.edges, pat.f, pat.edges) != total:
                failures.append(f"{tag}: disagrees with naive oracle")
    if oracle_cases < 300:
        failures.append(f"too few oracle-checked cases: {oracle_cases}")
    _conclude(
        9,
        f"engine properties on {cases} random hosts ({oracle_cases} oracle-checked)",
        start,
        failures,
    )


def test_criterion_10_anti_pasch_generator():
    start = time.perf_counter()
    failures = []
    host, lab = bipartite_max(50)
    assert lab.part_sizes == (25, 25)
    grown, added = add_anti_pasch(host, lab, 1, 25)
    if len(added) != 25:
        failures.append(f"generated {len(added)} triples, wanted 25")
    if not validate_linear(added):
        failures.append("pairwise intersection above one")
    if not validate_pasch_free(added):
        failures.append("added family closes a linear quadrilateral")
    if not validate_inside_part(added, lab, 1):
        failures.append("edge escapes the target part")
    standalone = build(grown.n, added)
    if contains_copy(standalone, by_name("pasch")):
        failures.append("engine finds a deleted-point plane among additions")
    _conclude(10, "anti-quadrilateral packing reaches 25 triples on 25 points", start, failures)
