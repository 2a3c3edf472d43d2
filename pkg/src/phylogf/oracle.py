"""Brute-force enumeration of small vertex-labeled phylogenetic networks.

Ground truth for the generating-function counts.  Networks are generated by
backtracking over parent choices; nothing here uses series or formulas
beyond the degree constraints of the network definition.

Labels are 1..n.  Counting exploits that every class is closed under
relabeling: the number of networks is the same for every assignment of
roles (root / tree / reticulation / leaf) to labels, so by default one
canonical role assignment is enumerated and multiplied by the number of
role assignments.  ``symmetric=False`` enumerates every role assignment.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

log = logging.getLogger(__name__)

ROOT, TREE, RETICULATION, LEAF = "root", "tree", "reticulation", "leaf"
OUT_DEGREE = {ROOT: 2, TREE: 2, RETICULATION: 1, LEAF: 0}
IN_DEGREE = {ROOT: 0, TREE: 1, RETICULATION: 2, LEAF: 1}

ORACLE_CLASSES = ("all", "treechild", "normal")
DEFAULT_CAP = 9


class OracleLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class NetworkGraph:
    """A network on vertices 1..n; ``children[v-1]`` lists the out-neighbours of v."""

    n: int
    children: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[tuple[int, int]]) -> NetworkGraph:
        ch: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            ch[u - 1].append(v)
        return cls(n, tuple(tuple(sorted(c)) for c in ch))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u + 1, v) for u, cs in enumerate(self.children) for v in cs]

    def parents(self) -> list[list[int]]:
        par: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            par[v - 1].append(u)
        return par

    def roles(self) -> list[str]:
        par = self.parents()
        out = []
        for v in range(self.n):
            indeg, outdeg = len(par[v]), len(self.children[v])
            for role in (ROOT, TREE, RETICULATION, LEAF):
                if IN_DEGREE[role] == indeg and OUT_DEGREE[role] == outdeg:
                    out.append(role)
                    break
            else:
                if self.n == 1 and indeg == outdeg == 0:
                    out.append(ROOT)
                else:
                    raise ValueError(f"vertex {v + 1} has in/out degree {indeg}/{outdeg}")
        return out

    def relabel(self, perm: Sequence[int]) -> NetworkGraph:
        """Apply label map v -> perm[v-1]."""
        return NetworkGraph.from_edges(self.n, [(perm[u - 1], perm[v - 1]) for u, v in self.edges])

    def is_valid(self) -> bool:
        """Degree profile, single root, acyclic (hence everything reachable from the root)."""
        try:
            roles = self.roles()
        except ValueError:
            return False
        if roles.count(ROOT) != 1:
            return False
        return _acyclic(self.children)

    def reticulation_count(self) -> int:
        return self.roles().count(RETICULATION)


def _acyclic(children: Sequence[Sequence[int]]) -> bool:
    n = len(children)
    indeg = [0] * n
    for cs in children:
        for v in cs:
            indeg[v - 1] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for v in children[u]:
            indeg[v - 1] -= 1
            if indeg[v - 1] == 0:
                stack.append(v - 1)
    return seen == n


def is_tree_child(g: NetworkGraph) -> bool:
    """Root and tree vertices keep a non-reticulation child; reticulations never feed a reticulation."""
    roles = g.roles()
    for v, role in enumerate(roles):
        kids = g.children[v]
        if role in (ROOT, TREE) and kids:
            if all(roles[c - 1] == RETICULATION for c in kids):
                return False
        elif role == RETICULATION:
            if roles[kids[0] - 1] == RETICULATION:
                return False
    return True


def _reach_avoiding(g: NetworkGraph, u: int, v: int) -> bool:
    """Is there a u -> v path that does not use the edge (u, v)?"""
    stack = [c for c in g.children[u - 1] if c != v]
    seen = set(stack)
    while stack:
        w = stack.pop()
        if w == v:
            return True
        for c in g.children[w - 1]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def has_shortcut(g: NetworkGraph) -> bool:
    return any(_reach_avoiding(g, u, v) for u, v in g.edges)


def is_normal(g: NetworkGraph) -> bool:
    """Tree-child and free of shortcut edges."""
    return is_tree_child(g) and not has_shortcut(g)


def has_double_edge(g: NetworkGraph) -> bool:
    return any(len(set(cs)) < len(cs) for cs in g.children)


def classify(g: NetworkGraph, allow_double: bool = False) -> set[str]:
    """Classes containing g; ``all`` admits double edges only on request."""
    double = has_double_edge(g)
    out = {"all"} if allow_double or not double else set()
    if not double and is_tree_child(g):
        out.add("treechild")
        if not has_shortcut(g):
            out.add("normal")
    return out


# ---------------------------------------------------------------------------
# enumeration


def role_counts(n: int, k: int) -> tuple[int, int, int] | None:
    """(tree vertices, reticulations, leaves) for n vertices, or None if infeasible."""
    if n == 1:
        return (0, 0, 0) if k == 0 else None
    if n % 2 == 0 or k < 0:
        return None
    leaves = (n + 1) // 2 - k
    tree = n - 1 - k - leaves
    if leaves < 1 or tree < 0:
        return None
    return tree, k, leaves


def _networks_with_roles(
    roles: Sequence[str], allow_double: bool
) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All valid child lists for a fixed role per vertex (0-based roles list)."""
    n = len(roles)
    cap = [OUT_DEGREE[r] for r in roles]
    children: list[list[int]] = [[] for _ in range(n)]
    order = [v for v in range(n) if roles[v] != ROOT]

    def reaches(src: int, dst: int) -> bool:
        stack = [src]
        seen = {src}
        while stack:
            w = stack.pop()
            if w == dst:
                return True
            for c in children[w]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return False

    def rec(i: int):
        if i == len(order):
            yield tuple(tuple(sorted(c + 1 for c in cs)) for cs in children)
            return
        v = order[i]
        cands = [p for p in range(n) if p != v and cap[p] > 0]
        if roles[v] == RETICULATION:
            choices = list(itertools.combinations(cands, 2))
            if allow_double:
                choices += [(p, p) for p in cands if cap[p] >= 2]
        else:
            choices = [(p,) for p in cands]
        for ps in choices:
            if any(reaches(v, p) for p in set(ps)):
                continue
            for p in ps:
                cap[p] -= 1
                children[p].append(v)
            yield from rec(i + 1)
            for p in ps:
                cap[p] += 1
                children[p].pop()

    yield from rec(0)


def _canonical_roles(n: int, k: int) -> list[str]:
    tree, ret, leaves = role_counts(n, k)
    return [ROOT] + [TREE] * tree + [RETICULATION] * ret + [LEAF] * leaves


def _all_role_assignments(n: int, k: int) -> Iterator[list[str]]:
    tree, ret, leaves = role_counts(n, k)
    labels = range(n)
    for root in labels:
        rest = [v for v in labels if v != root]
        for rets in itertools.combinations(rest, ret):
            rest2 = [v for v in rest if v not in rets]
            for lvs in itertools.combinations(rest2, leaves):
                roles = [TREE] * n
                roles[root] = ROOT
                for v in rets:
                    roles[v] = RETICULATION
                for v in lvs:
                    roles[v] = LEAF
                yield roles


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise OracleLimitExceeded(f"n = {n} exceeds the enumeration cap {cap}")
    if n >= 11:
        log.warning("enumerating n = %d; this can take a long time", n)


def enumerate_networks(
    n: int, k: int, klass: str = "all", cap: int = DEFAULT_CAP, allow_double: bool = False
) -> Iterator[NetworkGraph]:
    """Every labeled network on {1..n} with k reticulations in the class (all role assignments)."""
    if klass not in ORACLE_CLASSES:
        raise ValueError(f"unknown class {klass!r}")
    _check_cap(n, cap)
    if role_counts(n, k) is None:
        return
    if n == 1:
        yield NetworkGraph(1, ((),))
        return
    for roles in _all_role_assignments(n, k):
        for ch in _networks_with_roles(roles, allow_double=allow_double and klass == "all"):
            g = NetworkGraph(n, ch)
            if klass in classify(g, allow_double):
                yield g


def enumerate_counts(
    n: int, k: int, cap: int = DEFAULT_CAP, symmetric: bool = True, allow_double: bool = False
) -> dict[str, int]:
    """Counts for all three classes from one enumeration pass."""
    _check_cap(n, cap)
    totals = dict.fromkeys(ORACLE_CLASSES, 0)
    rc = role_counts(n, k)
    if rc is None:
        return totals
    if n == 1:
        return dict.fromkeys(ORACLE_CLASSES, 1)
    if symmetric:
        tree, ret, leaves = rc
        assignments = [_canonical_roles(n, k)]
        mult = math.factorial(n) // (
            math.factorial(tree) * math.factorial(ret) * math.factorial(leaves)
        )
    else:
        assignments = _all_role_assignments(n, k)
        mult = 1
    for roles in assignments:
        for ch in _networks_with_roles(roles, allow_double=allow_double):
            for c in classify(NetworkGraph(n, ch), allow_double):
                totals[c] += 1
    return {c: v * mult for c, v in totals.items()}


def enumerate_count(
    n: int,
    k: int,
    klass: str = "all",
    cap: int = DEFAULT_CAP,
    symmetric: bool = True,
    allow_double: bool = False,
) -> int:
    """Exact number of labeled networks on n vertices with k reticulations in the class.

    ``all`` means all networks without multiple edges unless ``allow_double``
    is set, in which case a root or tree vertex may send both of its edges
    to the same reticulation.
    """
    if klass not in ORACLE_CLASSES:
        raise ValueError(f"unknown class {klass!r}")
    if n % 2 == 0:
        return 0
    return enumerate_counts(n, k, cap, symmetric, allow_double)[klass]
