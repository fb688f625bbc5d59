"""Independent oracle implementations used to cross-check library results.

These deliberately recompute answers from definitions by exhaustive
enumeration instead of reusing the library's formulas.
"""

from __future__ import annotations

import itertools


def powerset(items):
    items = list(items)
    for r in range(len(items) + 1):
        for combo in itertools.combinations(items, r):
            yield frozenset(combo)


def brute_opens(T) -> set:
    """All opens by scanning every subset against the definition."""
    out = set()
    for S in powerset(T.carrier):
        if all(T.min_open[x] <= S for x in S):
            out.add(S)
    return out


def brute_closure(T, S) -> frozenset:
    """Smallest closed superset, by complement scan over all subsets."""
    S = frozenset(S)
    best = None
    carrier = frozenset(T.carrier)
    opens = brute_opens(T)
    for C in powerset(T.carrier):
        if S <= C and (carrier - C) in opens:
            if best is None or len(C) < len(best):
                best = C
    return best


def bfs_orbits(A) -> list:
    """Orbit partition via breadth-first closure of the raw map tables."""
    edges = {x: set() for x in A.carrier}
    for g in A.groupoid.elements:
        for x, y in A.maps[g].items():
            edges[x].add(y)
            edges[y].add(x)
    seen = set()
    blocks = []
    for x in A.carrier:
        if x in seen:
            continue
        block = {x}
        frontier = [x]
        while frontier:
            p = frontier.pop()
            for q in edges[p]:
                if q not in block:
                    block.add(q)
                    frontier.append(q)
        blocks.append(frozenset(block))
        seen |= block
    return sorted(blocks, key=min)


def is_invariant_subset(B, S) -> bool:
    S = frozenset(S)
    G = B.groupoid
    for g in G.elements:
        for x in S & B.domains[G.inv[g]]:
            if B.maps[g][x] not in S:
                return False
    return True


def brute_minimal_invariant_superset(B, S) -> frozenset:
    """Exhaustive scan over all subsets of the carrier."""
    S = frozenset(S)
    invariant_supersets = [
        T for T in powerset(B.carrier) if S <= T and is_invariant_subset(B, T)
    ]
    smallest = frozenset(B.carrier)
    for T in invariant_supersets:
        smallest &= T
    assert smallest in invariant_supersets
    return smallest


def gmap_condition_scan(A, B, table) -> list:
    """Exhaustive scan of the two equivariance conditions; returns witnesses."""
    G = A.groupoid
    bad = []
    for g in G.elements:
        for x in A.domains[g]:
            if table[x] not in B.domains[g]:
                bad.append(("(i)", g, x))
    for g in G.elements:
        for x in A.domains[G.inv[g]]:
            if table[x] in B.domains[G.inv[g]]:
                if table[A.maps[g][x]] != B.maps[g][table[x]]:
                    bad.append(("(ii)", g, x))
    return bad


def all_preorders(n: int):
    """Every reflexive transitive relation on range(n), as min-open maps."""
    points = list(range(n))
    off_diagonal = [(i, j) for i in points for j in points if i != j]
    for bits in itertools.product([False, True], repeat=len(off_diagonal)):
        rel = {(i, i) for i in points}
        rel.update(p for p, b in zip(off_diagonal, bits) if b)
        if all(
            ((i, k) in rel)
            for (i, j) in rel
            for (j2, k) in rel
            if j == j2
        ):
            yield {i: frozenset(j for j in points if (i, j) in rel) for i in points}
