"""Network generating functions for k <= 3 reticulations.

Two independent routes produce the same exponential generating functions:

* ``operator_N`` / ``operator_T`` assemble every skeleton case term by term
  from Motzkin-tree and path series in the marker ring, then read off the
  coefficient of y_1...y_k;
* ``CATALOG`` holds the closed algebraic forms
  z (a(z^2) - b(z^2) sqrt(1 - 2z^2)) / (1 - 2z^2)^p, expanded by
  ``expand_algebraic``.

A third route, ``component_T``, counts tree-child networks by cutting every
edge that enters a reticulation.  What remains is a forest of unary-binary
trees, one hanging from the root and one from each reticulation, and the cut
edges are put back in every way that keeps the component graph acyclic.  The
printed closed forms for tree-child networks with two and three
reticulations disagree with exhaustive enumeration; ``CORRECTED`` holds the
closed forms fitted to ``component_T`` and those are what ``count`` uses.

Counts are n! [z^n] of the closed forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .algebra import MultilinearElem
from .series import (
    TruncSeries,
    build_M,
    build_Mtilde,
    build_P,
    build_Phat,
    extract_full,
    ts_mul,
    ts_recip,
    ts_shift,
    ts_sqrt,
    ts_truncate,
)

CLASSES = ("normal", "treechild")


class UnsupportedK(ValueError):
    pass


def check_class(klass: str) -> str:
    if klass not in CLASSES:
        raise ValueError(f"unknown network class {klass!r}; expected one of {CLASSES}")
    return klass


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class AlgebraicGF:
    """F(z) = z (a(z^2) - b(z^2) sqrt(1 - 2z^2)) / (1 - 2z^2)^(two_p/2).

    Polynomials are coefficient tuples in w = z^2, lowest degree first.
    """

    a_poly: tuple
    b_poly: tuple
    two_p: int

    def __post_init__(self):
        if self.two_p <= 0 or self.two_p % 2 == 0:
            raise ValueError("the exponent must be a positive half-integer (odd two_p)")
        object.__setattr__(self, "a_poly", tuple(Fraction(c) for c in self.a_poly))
        object.__setattr__(self, "b_poly", tuple(Fraction(c) for c in self.b_poly))

    @property
    def p(self) -> Fraction:
        return Fraction(self.two_p, 2)

    def a_at(self, w: Fraction) -> Fraction:
        return sum((c * w**i for i, c in enumerate(self.a_poly)), Fraction(0))

    def b_at(self, w: Fraction) -> Fraction:
        return sum((c * w**i for i, c in enumerate(self.b_poly)), Fraction(0))


def _F(num: int, den: int = 1) -> Fraction:
    return Fraction(num, den)


CATALOG: dict[tuple[str, int], AlgebraicGF] = {
    ("normal", 1): AlgebraicGF((2, -3), (2, -1), 3),
    ("normal", 2): AlgebraicGF((0, -3, 30, _F(-87, 2), 6), (0, -3, 27, -18), 7),
    ("normal", 3): AlgebraicGF(
        (0, 0, 0, -9, 576, _F(-2187, 2), 270), (0, 0, 0, -9, 567, -531, 18), 11
    ),
    ("treechild", 1): AlgebraicGF((0, 1), (0, 1), 3),
    ("treechild", 2): AlgebraicGF((0, 0, _F(-1, 2), _F(21, 2), -4), (0, 0, _F(-1, 2), 9), 7),
    ("treechild", 3): AlgebraicGF(
        (0, 0, 0, -1, 20, _F(249, 2), -6), (0, 0, 0, -1, 19, 144, 30), 11
    ),
}


# Closed forms for tree-child networks that agree with exhaustive enumeration
# (see ``component_T``); the printed k = 2, 3 entries above do not.
CORRECTED: dict[tuple[str, int], AlgebraicGF] = {
    ("treechild", 2): AlgebraicGF((0, 0, 0, 8, -1), (0, 0, 0, 8), 7),
    ("treechild", 3): AlgebraicGF((0, 0, 0, 0, 0, 175, -35), (0, 0, 0, 0, 0, 175, 34), 11),
}


def closed_form(klass: str, k: int) -> AlgebraicGF:
    """The closed form used for counting: corrected where the printed one is wrong."""
    check_class(klass)
    key = (klass, k)
    if key not in CATALOG:
        raise UnsupportedK(f"closed forms exist only for k in 1..3, got {k}")
    return CORRECTED.get(key, CATALOG[key])


def _in_w(poly: tuple, N: int) -> TruncSeries:
    coeffs = [0] * (N + 1)
    for i, c in enumerate(poly):
        if 2 * i <= N:
            coeffs[2 * i] = c
    return TruncSeries.from_coeffs(coeffs, N)


@lru_cache(maxsize=64)
def _one_minus_2z2_root(N: int) -> TruncSeries:
    return ts_sqrt(TruncSeries.from_coeffs([1, 0, -2], N))


def expand_algebraic(gf: AlgebraicGF, N: int) -> TruncSeries:
    """Series of the closed form up to z^N."""
    if N < 0:
        raise ValueError("order must be nonnegative")
    root = _one_minus_2z2_root(N)
    den = root * (TruncSeries.from_coeffs([1, 0, -2], N) ** ((gf.two_p - 1) // 2))
    inner = (_in_w(gf.a_poly, N) - ts_mul(_in_w(gf.b_poly, N), root)) * ts_recip(den)
    return ts_truncate(ts_shift(inner, 1), N)


# ---------------------------------------------------------------------------
# skeleton expressions


class _Skeleton:
    """Shorthand for the pieces a skeleton case is built from, in k markers."""

    def __init__(self, N: int, k: int):
        self.N = N
        self.k = k

    def y(self, mask: int) -> MultilinearElem:
        return MultilinearElem.marker_sum(self.k, mask)

    def zpow(self, m: int) -> TruncSeries:
        return ts_shift(TruncSeries.const(1, self.N, self.k), m)

    def white(self, mask: int) -> TruncSeries:
        """A white tree, red vertices inside reachable by the markers in mask."""
        return build_Mtilde(self.N, self.y(mask))

    def tree(self, mask: int) -> TruncSeries:
        return build_M(self.N, self.y(mask))

    def white_seq(self, mask: int) -> TruncSeries:
        """1 / (1 - z Mtilde): a path whose vertices each carry a white tree."""
        return ts_recip(1 - ts_shift(self.white(mask), 1))

    def tree_seq(self, mask: int) -> TruncSeries:
        """1 / (1 - z M): a path whose vertices each carry any Motzkin tree."""
        return ts_recip(1 - ts_shift(self.tree(mask), 1))

    def path(self, on: int, inside: int, first: int) -> TruncSeries:
        return build_P(self.N, self.y(on), self.y(inside), self.y(first))

    def path_tc(self, on: int, inside: int, first: int) -> TruncSeries:
        return build_Phat(self.N, self.y(on), self.y(inside), self.y(first))

    @staticmethod
    def prod(*factors: TruncSeries) -> TruncSeries:
        out = factors[0]
        for f in factors[1:]:
            out = ts_mul(out, f)
        return out

    def Y(self, expr: TruncSeries) -> TruncSeries:
        return ts_truncate(extract_full(expr), self.N)


Y1, Y2, Y3 = 1, 2, 4
Y12, Y13, Y23, Y123 = 3, 5, 6, 7


def _half(s: TruncSeries) -> TruncSeries:
    return s * Fraction(1, 2)


# normal networks --------------------------------------------------------------


def _normal_k1(N: int) -> list[TruncSeries]:
    s = _Skeleton(N, 1)
    return [s.Y(s.prod(s.zpow(1), s.tree(0), s.white_seq(Y1)))]


def _normal_k2(N: int) -> list[TruncSeries]:
    s = _Skeleton(N, 2)
    n21 = s.Y(s.prod(s.zpow(2), s.tree(0), s.white_seq(Y1), s.white_seq(Y12)))
    n22 = _half(
        s.Y(
            s.prod(
                s.zpow(3),
                s.white(Y1),
                s.white(Y2),
                s.path(Y2, Y12, 0),
                s.path(Y1, Y12, 0),
                s.white_seq(Y12),
            )
        )
    )
    return [n21, n22]


def _normal_k3(N: int) -> list[TruncSeries]:
    s = _Skeleton(N, 3)
    n31 = s.Y(
        s.prod(s.zpow(3), s.tree(0), s.white_seq(Y1), s.white_seq(Y12), s.white_seq(Y123))
    )
    n32 = _half(
        s.Y(
            s.prod(
                s.zpow(4),
                s.white(Y1),
                s.white(Y2),
                s.path(Y1, Y12, 0),
                s.path(Y2, Y12, 0),
                s.white_seq(Y123),
                s.white_seq(Y12),
            )
        )
    )
    n33 = s.Y(
        s.prod(
            s.zpow(4),
            s.white(Y23),
            s.white(Y1),
            s.white_seq(Y123),
            s.path(Y1, Y13, 0),
            s.path(Y23, Y123, 0),
            s.path(Y1, Y123, 0),
        )
    )
    n34 = _half(
        s.Y(
            s.prod(
                s.zpow(5),
                s.white(Y12),
                s.white(Y13),
                s.white(Y23),
                s.white_seq(Y123),
                s.path(Y12, Y123, 0),
                s.path(Y13, Y123, Y3),
                s.path(Y23, Y123, Y3),
                s.path(Y3, Y123, 0),
            )
        )
    )
    return [n31, n32, n33, n34]


# tree-child networks ----------------------------------------------------------


def _tc_k1(N: int) -> list[TruncSeries]:
    s = _Skeleton(N, 1)
    return [s.Y(s.prod(s.zpow(1), s.white(Y1), s.tree_seq(Y1)))]


def _tc_k2(N: int) -> list[TruncSeries]:
    s = _Skeleton(N, 2)
    t21 = s.Y(s.prod(s.zpow(2), s.white(Y12), s.path_tc(Y2, Y12, 0), s.path_tc(0, Y12, 0)))
    main = s.Y(
        s.prod(
            s.zpow(3),
            s.white(Y12),
            s.white(Y12),
            s.tree_seq(Y12),
            s.path_tc(Y2, Y12, Y2),
            s.path_tc(Y1, Y12, Y1),
        )
    )
    # skeletons where both greens point at the children of their common ancestor
    m0 = build_M(N)
    bad = ts_shift(m0 * m0, 5) * ts_recip(1 - ts_shift(m0, 1)) ** 3
    t22 = _half(main) - _half(bad)
    return [t21, t22]


def _single(N: int, build: Callable[[_Skeleton], TruncSeries]) -> TruncSeries:
    """d/dy at y = 0 of a one-marker expression."""
    s = _Skeleton(N, 1)
    return s.Y(build(s))


def _tc_k3(N: int) -> list[TruncSeries]:
    s = _Skeleton(N, 3)
    t31 = s.Y(
        s.prod(
            s.zpow(3),
            s.white(Y123),
            s.path_tc(Y3, Y123, 0),
            s.path_tc(Y23, Y123, 0),
            s.tree_seq(Y123),
        )
    )

    t32_main = s.Y(
        s.prod(
            s.zpow(4),
            s.white(Y123),
            s.white(Y123),
            s.tree_seq(Y123),
            s.path_tc(Y3, Y123, 0),
            s.path_tc(Y13, Y123, Y13),
            s.path_tc(Y23, Y123, Y23),
        )
    )
    c_a = _single(
        N,
        lambda u: u.prod(
            u.zpow(6), u.white(1), u.white(1), u.tree_seq(1) ** 3, u.path_tc(1, 1, 0)
        ),
    )
    c_b = _single(
        N,
        lambda u: u.prod(
            u.zpow(6), u.white(1), u.white(1), u.tree_seq(1), u.path_tc(1, 1, 0) ** 3
        ),
    )
    # the y1 and y2 corrections are the same expression in a renamed marker
    t32 = _half(t32_main) - _half(c_a) - _half(c_a) - _half(c_b)

    t33_main = s.Y(
        s.prod(
            s.zpow(4),
            s.white(Y123),
            s.white(Y123),
            s.tree_seq(Y123),
            s.path_tc(Y23, Y123, Y23),
            s.path_tc(Y1, Y123, Y1),
            s.path_tc(Y12, Y123, 0),
        )
    )
    c_c = _single(
        N,
        lambda u: u.prod(
            u.zpow(6), u.white(1), u.white(1), u.tree_seq(1) ** 2, u.path_tc(1, 1, 0) ** 2
        ),
    )
    c_d = _single(
        N,
        lambda u: u.prod(
            u.zpow(6), u.white(1), u.white(1), u.tree_seq(1) ** 3, u.path_tc(1, 1, 0)
        ),
    )
    t33 = t33_main - c_c - c_d

    t34_main = s.Y(
        s.prod(
            s.zpow(5),
            s.white(Y123) ** 3,
            s.tree_seq(Y123),
            s.path_tc(Y12, Y123, Y12),
            s.path_tc(Y13, Y123, Y13),
            s.path_tc(Y23, Y123, Y23),
            s.path_tc(Y3, Y123, Y3),
        )
    )
    c_e = _single(
        N,
        lambda u: u.prod(
            u.zpow(7),
            u.white(1) ** 3,
            u.tree_seq(1) ** 2,
            u.path_tc(1, 1, 1),
            u.path_tc(1, 1, 0) ** 2,
        ),
    )
    c_f = _single(
        N,
        lambda u: u.prod(
            u.zpow(7),
            u.white(1) ** 3,
            u.tree_seq(1) ** 3,
            u.path_tc(1, 1, 1),
            u.path_tc(1, 1, 0),
        ),
    )
    t34 = _half(t34_main) - _half(c_e) - c_f - c_f
    return [t31, t32, t33, t34]


_CASES = {
    ("normal", 1): _normal_k1,
    ("normal", 2): _normal_k2,
    ("normal", 3): _normal_k3,
    ("treechild", 1): _tc_k1,
    ("treechild", 2): _tc_k2,
    ("treechild", 3): _tc_k3,
}


def skeleton_cases(klass: str, k: int, N: int) -> list[TruncSeries]:
    """Per-skeleton-case series (before the 1/2^k multiplicity correction)."""
    check_class(klass)
    if (klass, k) not in _CASES:
        raise UnsupportedK(f"operator construction exists only for k in 1..3, got {k}")
    return _CASES[klass, k](N)


def _operator(klass: str, k: int, N: int) -> TruncSeries:
    cases = skeleton_cases(klass, k, N)
    total = cases[0]
    for c in cases[1:]:
        total = total + c
    return total * Fraction(1, 2**k)


def operator_N(k: int, N: int) -> TruncSeries:
    """EGF of vertex-labeled normal networks with k reticulations, via skeletons."""
    return _operator("normal", k, N)


def operator_T(k: int, N: int) -> TruncSeries:
    """EGF of vertex-labeled tree-child networks with k reticulations, via skeletons."""
    return _operator("treechild", k, N)


def unicyclic_gf(klass: str, N: int) -> TruncSeries:
    """k = 1 EGF rebuilt from binary trees around the single cycle."""
    check_class(klass)
    m = build_M(N + 4)
    zm = ts_shift(m, 1)
    inv = ts_recip(1 - zm) ** 3
    if klass == "normal":
        out = ts_shift(m**3, 4) * inv
    else:
        out = ts_shift(m * m, 3) * (2 - zm) * inv
    return ts_truncate(out * Fraction(1, 2), N)


# ---------------------------------------------------------------------------
# tree-child networks via the component graph


def unary_binary_parts(N: int, m_max: int) -> list[TruncSeries]:
    """U_m: EGF of labeled unary-binary trees with exactly m unary vertices.

    U(z, u) = z + z u U + z U^2 / 2; comparing powers of u gives
    U_m (1 - z U_0) = z U_{m-1} + (z/2) sum_{0<i<m} U_i U_{m-i}.
    """
    root = _one_minus_2z2_root(N + 1)
    u0 = ts_truncate(ts_shift(1 - root, -1), N)
    inv = ts_recip(1 - ts_shift(u0, 1))
    parts = [u0]
    for m in range(1, m_max + 1):
        acc = ts_shift(parts[m - 1], 1)
        for i in range(1, m):
            acc = acc + ts_shift(parts[i] * parts[m - i], 1) * Fraction(1, 2)
        parts.append(ts_truncate(acc * inv, N))
    return parts


def _acyclic_on(nodes: int, arcs) -> bool:
    out = {v: set() for v in range(nodes)}
    for a, b in arcs:
        out[a].add(b)
    indeg = [0] * nodes
    for a in out:
        for b in out[a]:
            indeg[b] += 1
    ready = [v for v in range(nodes) if indeg[v] == 0]
    seen = 0
    while ready:
        v = ready.pop()
        seen += 1
        for b in out[v]:
            indeg[b] -= 1
            if indeg[b] == 0:
                ready.append(b)
    return seen == nodes


@lru_cache(maxsize=None)
def attachment_count(sizes: tuple[int, ...]) -> int:
    """Ways to send the unary vertices of each component to reticulations.

    ``sizes[0]`` is the number of unary vertices in the root component and
    ``sizes[r]`` the number in the component below reticulation r.  Every
    reticulation must receive exactly two edges, and the component graph
    must stay acyclic.
    """
    k = len(sizes) - 1
    owner = [c for c, m in enumerate(sizes) for _ in range(m)]
    if len(owner) != 2 * k:
        return 0
    total = 0
    for target in itertools.product(range(1, k + 1), repeat=2 * k):
        if any(target.count(r) != 2 for r in range(1, k + 1)):
            continue
        if _acyclic_on(k + 1, zip(owner, target)):
            total += 1
    return total


def component_T(k: int, N: int) -> TruncSeries:
    """EGF of vertex-labeled tree-child networks with k reticulations.

    Deleting the edges into reticulations leaves a root component and one
    component per reticulation (the reticulation plus the unary-binary tree
    below it).  Tree-child forces every unary vertex to send exactly one of the
    deleted edges, so a network is a choice of components plus an acyclic
    attachment.  The k reticulation components are unordered, hence 1/k!.
    """
    if not 0 <= k <= 3:
        raise UnsupportedK(f"k must be in 0..3, got {k}")
    parts = unary_binary_parts(N, 2 * k)
    if k == 0:
        return parts[0]
    total = TruncSeries.zero(N)
    z = TruncSeries.z(N)
    for sizes in itertools.product(range(2 * k + 1), repeat=k + 1):
        ways = attachment_count(sizes)
        if not ways:
            continue
        # the root needs two children, so it cannot be a lone leaf
        term = parts[sizes[0]] - z if sizes[0] == 0 else parts[sizes[0]]
        for m in sizes[1:]:
            term = term * ts_shift(parts[m], 1)
        total = total + term * ways
    return ts_truncate(total * Fraction(1, math.factorial(k)), N)


# ---------------------------------------------------------------------------
# counts


def _factorial_times(coeff: Fraction, n: int) -> int:
    value = coeff * math.factorial(n)
    if value.denominator != 1:
        raise ArithmeticError(f"n![z^{n}] = {value} is not an integer")
    return value.numerator


class _SeriesCache:
    """Keeps the longest expansion computed so far per (class, k)."""

    def __init__(self):
        self._store: dict[tuple[str, int], TruncSeries] = {}

    def get(self, klass: str, k: int, n: int) -> TruncSeries:
        have = self._store.get((klass, k))
        if have is None or have.order < n:
            order = max(n, 2 * have.order if have is not None else 0, 63)
            if k == 0:
                have = build_M(order)
            else:
                have = expand_algebraic(closed_form(klass, k), order)
            self._store[klass, k] = have
        return have


_cache = _SeriesCache()


def egf(klass: str, k: int, N: int) -> TruncSeries:
    """Closed-form EGF (k >= 1) or the binary-tree EGF M(z, 0) (k = 0) up to z^N."""
    check_class(klass)
    if not 0 <= k <= 3:
        raise UnsupportedK(f"k must be in 0..3, got {k}")
    return ts_truncate(_cache.get(klass, k, N), N)


def count(klass: str, k: int, n: int) -> int:
    """Number of vertex-labeled networks of the class with n vertices and k reticulations."""
    check_class(klass)
    if not 0 <= k <= 3:
        raise UnsupportedK(f"k must be in 0..3, got {k}")
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2 == 0:
        return 0
    return _factorial_times(_cache.get(klass, k, n)[n], n)


def counts(klass: str, k: int, ns) -> list[int]:
    ns = list(ns)
    if ns:
        egf(klass, k, max(ns))
    return [count(klass, k, n) for n in ns]


def leaf_labeled_count(klass: str, k: int, leaves: int) -> int:
    """Leaf-labeled count from the vertex-labeled one: l!/(2l+2k-1)! N_{k,2l+2k-1}."""
    if leaves < 1:
        raise ValueError("need at least one leaf")
    n = 2 * leaves + 2 * k - 1
    num = math.factorial(leaves) * count(klass, k, n)
    den = math.factorial(n)
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(
            f"leaf-label conversion is not exact for class={klass}, k={k}, l={leaves}"
        )
    return q


# ---------------------------------------------------------------------------
# caterpillar lower bound


def caterpillar_path(N: int) -> TruncSeries:
    """Closed form of d/dy z^2 M(z,0) / (1 - z Mtilde(z,y))^2 at y = 0."""
    root = _one_minus_2z2_root(N)
    num = TruncSeries.from_coeffs([0, 0, 8, 0, -12], N) - ts_mul(
        TruncSeries.from_coeffs([0, 0, 8, 0, -4], N), root
    )
    return num * ts_recip(TruncSeries.from_coeffs([1, 0, -2], N) ** 2)


def caterpillar_path_operator(N: int) -> TruncSeries:
    """The same path series, straight from its derivative definition."""
    s = _Skeleton(N, 1)
    return s.Y(s.prod(s.zpow(2), s.tree(0), s.white_seq(Y1) ** 2))


def caterpillar_lower_bound(k: int, N: int) -> TruncSeries:
    """N_1(z) P(z)^(k-1): a subclass of normal networks with k reticulations."""
    if k < 2:
        raise ValueError("the caterpillar bound needs k >= 2")
    return egf("normal", 1, N) * caterpillar_path(N) ** (k - 1)
