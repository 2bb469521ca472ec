"""Closed-form edge counts, copy-count formulas, and inequality checkers.

Everything here is exact integer or rational arithmetic; no floats enter
any asserted value.  The size formulas are written as the maximizations
that define them (brute force over part sizes), which doubles as an
independent check of the balanced-part closed forms used elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt

from .core import Error


class DomainError(Error):
    """Arguments outside the declared domain of a formula."""


# -- extremal sizes ---------------------------------------------------------


@lru_cache(maxsize=None)
def p3_size(n: int) -> int:
    """Max edges of an n-vertex 3-graph in which every edge crosses a
    2-part vertex split: max over a of C(a,2)(n-a) + C(n-a,2)a."""
    if n < 3:
        raise DomainError(f"p3_size needs n >= 3, got {n}")
    return max(comb(a, 2) * (n - a) + comb(n - a, 2) * a for a in range(n + 1))


@lru_cache(maxsize=None)
def t3_size(n: int) -> int:
    """Edges of the balanced complete 3-partite 3-graph."""
    if n < 3:
        raise DomainError(f"t3_size needs n >= 3, got {n}")
    return (n // 3) * ((n + 1) // 3) * ((n + 2) // 3)


@lru_cache(maxsize=None)
def b3_part_size(n: int) -> int:
    """The smallest a maximizing C(a,2)(n-a)."""
    if n < 3:
        raise DomainError(f"b3_part_size needs n >= 3, got {n}")
    best_a, best = 0, -1
    for a in range(n + 1):
        v = comb(a, 2) * (n - a)
        if v > best:
            best, best_a = v, a
    return best_a


@lru_cache(maxsize=None)
def b3_size(n: int) -> int:
    """Max edges over all (2,1)-partitioned 3-graphs: max_a C(a,2)(n-a)."""
    if n < 3:
        raise DomainError(f"b3_size needs n >= 3, got {n}")
    return max(comb(a, 2) * (n - a) for a in range(n + 1))


def t3r_part_sizes(n: int, r: int) -> list:
    """Part sizes floor((n+i-1)/r) for i = 1..r (ascending)."""
    if r < 3:
        raise DomainError(f"t3r needs r >= 3, got {r}")
    if r > n:
        raise DomainError(f"t3r needs r <= n, got r={r} n={n}")
    sizes = [(n + i - 1) // r for i in range(1, r + 1)]
    assert sum(sizes) == n
    return sizes


@lru_cache(maxsize=None)
def t3r_size(n: int, r: int) -> int:
    """Edges of the balanced complete r-partite 3-graph."""
    sizes = t3r_part_sizes(n, r)
    return sum(
        sizes[i] * sizes[j] * sizes[k]
        for i, j, k in itertools.combinations(range(r), 3)
    )


# -- one-added-edge copy counts ---------------------------------------------


@lru_cache(maxsize=None)
def c_fano(n: int) -> int:
    """Minimum Fano copies created by one edge added to the extremal
    bipartite host: 6*(C(h,4) + (H-3)*C(h,3)) with h = floor(n/2),
    H = ceil(n/2)."""
    if n < 7:
        raise DomainError(f"c_fano needs n >= 7, got {n}")
    h = n // 2
    return 6 * (comb(h, 4) + ((n + 1) // 2 - 3) * comb(h, 3))


def q_fano(n: int) -> int:
    """Maximum number of edges addable to the bipartite extremal host with
    every two added edges sharing zero or two points (piecewise in the
    residue of the in-part capacity mod 4)."""
    if n < 8:
        raise DomainError(f"q_fano needs n >= 8, got {n}")
    if n % 2 == 0:
        h = n // 2
        if h % 4 == 0:
            return n
        if h % 4 == 1:
            return n - 2
        return n - 4
    big = (n + 1) // 2
    if big % 4 == 0:
        return big
    if big % 4 == 1:
        return big - 1
    return big - 2


def c_asymptotic(pattern: str, n: int, r: int | None = None) -> Fraction:
    """Leading term of the one-added-edge copy count, as an exact rational.

    Never asserted against engine values; reports only.  Supported
    patterns: ``f5`` (3*(n/3)^2), ``b5`` (2*(n/3)^2) and ``L`` with an
    explicit r (((1-2/r)*n)^(C(r+1,2)-1) * (n/r)^(r-1)).
    """
    if pattern == "f5":
        return 3 * Fraction(n, 3) ** 2
    if pattern == "b5":
        return 2 * Fraction(n, 3) ** 2
    if pattern == "L":
        if r is None or r < 3:
            raise DomainError("pattern 'L' needs r >= 3")
        return (Fraction(r - 2, r) * n) ** (comb(r + 1, 2) - 1) * Fraction(n, r) ** (r - 1)
    raise DomainError(f"unsupported pattern {pattern!r} for c_asymptotic")


@dataclass(frozen=True)
class CopyBound:
    """A one-added-edge copy-count value with its provenance.

    ``provenance`` is ``"closed-form"`` for formula values and
    ``"engine-min"`` for minima computed by exhaustive counting; the
    latter always carries the minimizing edge as a witness.
    """

    pattern: str
    n: int
    value: int
    provenance: str
    witness: tuple | None = None

    def __post_init__(self):
        if self.provenance not in ("closed-form", "engine-min"):
            raise DomainError(f"bad provenance {self.provenance!r}")
        if self.provenance == "engine-min" and self.witness is None:
            raise DomainError("engine-min bounds must carry a witness edge")
        if self.value < 0:
            raise DomainError("copy bounds are nonnegative")


# -- inequality checkers ------------------------------------------------------


def ceil_sqrt_ratio(num: int, den: int) -> int:
    """Smallest integer s with s*s*den >= num (exact, no floats)."""
    if den <= 0 or num < 0:
        raise DomainError(f"invalid ratio {num}/{den}")
    s = isqrt(num // den)
    while s * s * den < num:
        s += 1
    return s


@dataclass(frozen=True)
class LemmaParams:
    """Validated inputs for the inequality checkers.

    ``x + y = n`` with all of x, y positive; ``t`` positive below n^2
    when given; ``s`` positive below n/10 when given.  ``derive_s``
    computes s = ceil(sqrt(2t/(n-2))) exactly.
    """

    n: int
    x: int
    t: int | None = None
    s: int | None = None

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"n >= 3 required, got {self.n}")
        if not (0 < self.x < self.n):
            raise DomainError(f"x must satisfy 0 < x < n, got x={self.x}")
        if self.t is not None and not (0 < self.t < self.n * self.n):
            raise DomainError(f"t must satisfy 0 < t < n^2, got t={self.t}")
        if self.s is not None and not (0 < self.s * 10 < self.n):
            raise DomainError(f"s must satisfy 0 < s < n/10, got s={self.s}")

    @property
    def y(self) -> int:
        return self.n - self.x

    def derive_s(self) -> int:
        if self.t is None:
            raise DomainError("s derivation needs t")
        return ceil_sqrt_ratio(2 * self.t, self.n - 2)


def lemma1_hypothesis(n: int, x: int, t: int) -> bool:
    """C(x,2)y + C(y,2)x >= p3_size(n) - t with y = n - x."""
    p = LemmaParams(n=n, x=x, t=t)
    y = p.y
    return comb(x, 2) * y + comb(y, 2) * x >= p3_size(n) - t


def lemma1_check(n: int, x: int, t: int) -> bool:
    """Part-balance bound from an edge deficit.

    If the crossing-edge count is within t of the bipartite maximum,
    then x lies within s = ceil(sqrt(2t/(n-2))) of n/2, strictly when
    t < (n-2)/2.  Returns True when the implication holds (vacuously
    true when the hypothesis fails); use :func:`lemma1_hypothesis` to
    distinguish the vacuous case.
    """
    p = LemmaParams(n=n, x=x, t=t)
    if not lemma1_hypothesis(n, x, t):
        return True
    s = p.derive_s()
    lo, hi = n // 2 - s, (n + 1) // 2 + s
    if not (lo <= x <= hi):
        return False
    if 2 * t < n - 2 and not (lo < x < hi):
        return False
    return True


def lemma2_hypothesis(n: int, x: int, s: int) -> bool:
    """floor(n/2) - s <= x <= ceil(n/2) + s with 0 < s < n/10."""
    LemmaParams(n=n, x=x, s=s)
    return n // 2 - s <= x <= (n + 1) // 2 + s


def lemma2_check(n: int, x: int, s: int) -> bool:
    """Near-balanced parts keep the one-edge copy count nearly extremal.

    For x within s of n/2, 6*C(y,4) + 6*(x-3)*C(y,3) >= c_fano(n) -
    (s+3)*n^3.  Returns True when the implication holds (vacuously true
    when the hypothesis fails).
    """
    LemmaParams(n=n, x=x, s=s)
    if n < 7:
        raise DomainError(f"lemma2_check needs n >= 7, got {n}")
    if not lemma2_hypothesis(n, x, s):
        return True
    y = n - x
    lhs = 6 * comb(y, 4) + 6 * (x - 3) * comb(y, 3)
    return lhs >= c_fano(n) - (s + 3) * n**3
