"""Equivariant maps between partial actions and isomorphism search."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .core import PreconditionError, Report, StructuralError, Violation
from .action import PartialAction, classify, orbit_of, stabilizer


@dataclass(frozen=True, eq=True)
class GMap:
    """A carrier map between two partial actions of the same groupoid."""

    source: PartialAction
    target: PartialAction
    table: dict


def validate_gmap(f: GMap) -> Report:
    """Check domain preservation and equivariance; witnesses are (g, x) pairs."""
    A, B = f.source, f.target
    if A.groupoid != B.groupoid:
        raise StructuralError("source and target are actions of different groupoids")
    if set(f.table) != set(A.carrier):
        raise StructuralError("map is not total on the source carrier")
    if not set(f.table.values()) <= set(B.carrier):
        raise StructuralError("map leaves the target carrier")
    G = A.groupoid
    viol: list[Violation] = []
    for g in G.elements:
        for x in sorted(A.domains[g]):
            if f.table[x] not in B.domains[g]:
                viol.append(Violation("(i)", (g, x), "image leaves the matching domain"))
    for g in G.elements:
        for x in sorted(A.domains[G.inv[g]]):
            y = f.table[x]
            if y in B.domains[G.inv[g]] and f.table[A.maps[g][x]] != B.maps[g][y]:
                viol.append(Violation("(ii)", (g, x), "map does not commute with the action"))
    for x in A.carrier:
        if B.anchor[f.table[x]] != A.anchor[x]:
            viol.append(Violation("(anchor)", (x,), "anchors do not commute"))
    return Report(ok=not viol, violations=tuple(viol))


def build_gmap(source: PartialAction, target: PartialAction, table: dict) -> GMap:
    f = GMap(source=source, target=target, table=dict(table))
    validate_gmap(f).raise_if_failed("equivariant map validation")
    return f


def identity_gmap(A: PartialAction) -> GMap:
    return build_gmap(A, A, {x: x for x in A.carrier})


def compose_gmaps(f: GMap, g: GMap) -> GMap:
    """Composite applying f first; endpoints must match."""
    if f.target != g.source:
        raise PreconditionError("target of the first map must be the source of the second")
    return build_gmap(f.source, g.target, {x: g.table[f.table[x]] for x in f.source.carrier})


def is_isomorphism(f: GMap) -> bool:
    """Bijective with an inverse table that is itself a valid equivariant map."""
    if not validate_gmap(f).ok:
        return False
    values = set(f.table.values())
    if len(values) != len(f.table) or values != set(f.target.carrier):
        return False
    inverse = GMap(source=f.target, target=f.source, table={y: x for x, y in f.table.items()})
    return validate_gmap(inverse).ok


def inverse_gmap(f: GMap) -> GMap:
    if not is_isomorphism(f):
        raise PreconditionError("map is not an isomorphism")
    return build_gmap(f.target, f.source, {y: x for x, y in f.table.items()})


def _membership_profile(A: PartialAction, x: str) -> frozenset:
    return frozenset(g for g in A.groupoid.elements if x in A.domains[g])


def find_isomorphism(A: PartialAction, B: PartialAction):
    """Search for an invertible equivariant map, or return None.

    Backtracking over carrier assignments, pruned by isomorphism invariants:
    anchor fibers, orbit-size multisets, stabilizer-order multisets, and the
    per-point domain-membership profile.  Candidates are tried in canonical
    token order, so the first map found is deterministic.
    """
    if A.groupoid != B.groupoid:
        return None
    if len(A.carrier) != len(B.carrier):
        return None
    if classify(A) != classify(B):
        return None
    G = A.groupoid
    if Counter(A.anchor.values()) != Counter(B.anchor.values()):
        return None
    if Counter(len(orbit_of(A, x)) for x in A.carrier) != Counter(
        len(orbit_of(B, y)) for y in B.carrier
    ):
        return None
    if Counter(len(stabilizer(A, x)) for x in A.carrier) != Counter(
        len(stabilizer(B, y)) for y in B.carrier
    ):
        return None
    if any(len(A.domains[g]) != len(B.domains[g]) for g in G.elements):
        return None

    keyed = {}
    for y in B.carrier:
        keyed.setdefault(
            (_membership_profile(B, y), len(orbit_of(B, y)), stabilizer(B, y)), []
        ).append(y)
    candidates = {}
    for x in A.carrier:
        key = (_membership_profile(A, x), len(orbit_of(A, x)), stabilizer(A, x))
        pool = keyed.get(key)
        if not pool:
            return None
        candidates[x] = sorted(pool)

    order = list(A.carrier)
    assignment: dict = {}
    used: set = set()

    def consistent(x: str, y: str) -> bool:
        for g in G.elements:
            if x in A.domains[G.inv[g]]:
                x2 = A.maps[g][x]
                y2 = B.maps[g][y]
                if x2 in assignment and assignment[x2] != y2:
                    return False
            if x in A.domains[g]:
                x0 = A.maps[G.inv[g]][x]
                y0 = B.maps[G.inv[g]][y]
                if x0 in assignment and assignment[x0] != y0:
                    return False
        return True

    def backtrack(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        for y in candidates[x]:
            if y in used or not consistent(x, y):
                continue
            assignment[x] = y
            used.add(y)
            if backtrack(i + 1):
                return True
            del assignment[x]
            used.remove(y)
        return False

    if not backtrack(0):
        return None
    found = GMap(source=A, target=B, table=dict(assignment))
    if not is_isomorphism(found):
        return None
    return found
