"""Partial actions of a finite groupoid on a finite set.

Validation, orbits, stabilizers, classification, restriction, invariant
closure, action graphs, and the orbit space.  Values are immutable after
validation; every operation is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    FalsificationError,
    PreconditionError,
    Report,
    StructuralError,
    Violation,
)
from .groupoid import Groupoid, isotropy_group
from . import topology as topo
from .topology import FiniteTopology


@dataclass(frozen=True, eq=True)
class PartialAction:
    """A partial action: per-element domains and bijections between them.

    ``domains[g]`` is the image set of the bijection ``maps[g]``, whose key
    set is ``domains[inv(g)]``.  ``tainted`` marks values built with the
    validation bypass; downstream results inherit the marker.
    """

    groupoid: Groupoid
    carrier: tuple[str, ...]
    anchor: dict
    domains: dict
    maps: dict
    tainted: bool = False

    def fiber(self, e: str) -> frozenset:
        return frozenset(x for x in self.carrier if self.anchor[x] == e)

    def domain(self, g: str) -> frozenset:
        return self.domains[g]

    def act(self, g: str, x: str) -> str:
        return self.maps[g][x]


def _structural(groupoid: Groupoid, carrier, anchor, domains, maps):
    points = sorted(str(x) for x in carrier)
    if len(set(points)) != len(points):
        raise StructuralError("duplicate carrier points")
    anchor = dict(anchor)
    if set(anchor) != set(points):
        raise StructuralError("anchor must be defined on exactly the carrier")
    bad = sorted(x for x, e in anchor.items() if e not in groupoid.identities)
    if bad:
        raise StructuralError(f"anchor of {bad} is not an identity")
    domains = {g: frozenset(s) for g, s in dict(domains).items()}
    if set(domains) != set(groupoid.elements):
        raise StructuralError("domains must be defined on exactly the groupoid elements")
    for g, s in domains.items():
        if not s <= set(points):
            raise StructuralError(f"domain of {g!r} leaves the carrier")
    maps = {g: dict(t) for g, t in dict(maps).items()}
    if set(maps) != set(groupoid.elements):
        raise StructuralError("maps must be defined on exactly the groupoid elements")
    for g, table in maps.items():
        expected_keys = domains[groupoid.inv[g]]
        if set(table) != expected_keys:
            raise StructuralError(f"table of {g!r} is not defined on the domain of its inverse")
        if set(table.values()) != domains[g] or len(set(table.values())) != len(table):
            raise StructuralError(f"table of {g!r} is not a bijection onto its domain")
    return points, anchor, domains, maps


def validate_partial_action(groupoid: Groupoid, carrier, anchor, domains, maps) -> Report:
    """Check the partial-action conditions; violations carry a label and witness.

    Labels: "(i)" for the disjoint fiber partition and identity maps, "(pre)"
    for domains escaping their range fiber, "(ii)" for the exchanged-domain
    equality on composable pairs, "(iii)" for composition compatibility, and
    "(inv)" for stored tables disagreeing with inverses.
    """
    points, anchor, domains, maps = _structural(groupoid, carrier, anchor, domains, maps)
    G = groupoid
    viol: list[Violation] = []
    notes: list[str] = []
    units = sorted(G.identities)

    for i, e in enumerate(units):
        for f in units[i + 1 :]:
            overlap = domains[e] & domains[f]
            if overlap:
                viol.append(
                    Violation("(i)", (min(overlap),), f"domains of units {e!r} and {f!r} overlap")
                )
    for e in units:
        fiber = frozenset(x for x in points if anchor[x] == e)
        if domains[e] != fiber:
            witness = min(domains[e] ^ fiber)
            viol.append(
                Violation("(i)", (witness,), f"domain of unit {e!r} differs from its anchor fiber")
            )
        for x in sorted(domains[e] & frozenset(maps[e])):
            if maps[e][x] != x:
                viol.append(Violation("(i)", (e, x), "unit does not act as the identity"))

    for g in G.elements:
        extra = domains[g] - domains[G.rng[g]]
        if extra:
            viol.append(Violation("(pre)", (g, min(extra)), "domain escapes the range fiber"))

    for g in G.elements:
        inverse_table = {y: x for x, y in maps[g].items()}
        if maps[G.inv[g]] != inverse_table:
            bad = sorted(set(maps[G.inv[g]].items()) ^ set(inverse_table.items()))
            viol.append(
                Violation("(inv)", (g,) + bad[0], "stored table of the inverse is not the inverse table")
            )

    for (g, h) in G.mul:
        gh = G.mul[(g, h)]
        lhs = frozenset(maps[g][x] for x in domains[G.inv[g]] & domains[h] if x in maps[g])
        rhs = domains[g] & domains[gh]
        if lhs != rhs:
            viol.append(
                Violation("(ii)", (g, h, min(lhs ^ rhs)), "image of the overlap misses the target overlap")
            )

    for (g, h) in G.mul:
        gh = G.mul[(g, h)]
        for y in sorted(domains[G.inv[g]] & domains[h]):
            x = maps[G.inv[h]].get(y)
            if x is None:
                continue  # already reported as a table defect
            expected = maps[gh].get(x)
            if expected is None or maps[g][y] != expected:
                viol.append(Violation("(iii)", (g, h, x), "composite map disagrees with the product"))

    missing = sorted(set(units) - {anchor[x] for x in points})
    if missing:
        notes.append(f"anchor is not surjective; unreached units: {missing}")

    return Report(ok=not viol, violations=tuple(viol), notes=tuple(notes))


def build_partial_action(
    groupoid: Groupoid, carrier, anchor, domains, maps, bypass: bool = False
) -> PartialAction:
    """Validate and freeze a partial action.

    With ``bypass`` the semantic checks still run but do not block
    construction; the resulting value is marked tainted.  Structural defects
    (broken tables, dangling references) are never bypassable.
    """
    points, anchor, domains, maps = _structural(groupoid, carrier, anchor, domains, maps)
    report = validate_partial_action(groupoid, carrier, anchor, domains, maps)
    if not bypass:
        report.raise_if_failed("partial action validation")
    return PartialAction(
        groupoid=groupoid,
        carrier=tuple(points),
        anchor=anchor,
        domains=domains,
        maps=maps,
        tainted=bypass,
    )


def is_global(A: PartialAction) -> bool:
    """True when every domain is the full range fiber.

    The domain characterization and the composition characterization
    (products act as composites everywhere) are both evaluated; they must
    agree on validated data.
    """
    G = A.groupoid
    by_domains = all(A.domains[g] == A.domains[G.rng[g]] for g in G.elements)
    by_composition = True
    for (g, h) in G.mul:
        gh = G.mul[(g, h)]
        composite = {}
        for x in A.domains[G.inv[h]]:
            y = A.maps[h][x]
            if y in A.domains[G.inv[g]]:
                composite[x] = A.maps[g][y]
        if composite != A.maps[gh]:
            by_composition = False
            break
    if not A.tainted and by_domains != by_composition:
        raise FalsificationError("the two characterizations of globality disagree on validated data")
    return by_domains and by_composition


@dataclass(frozen=True)
class OrbitRelation:
    classes: tuple
    one_step: dict
    is_equivalence: bool
    witness: tuple | None
    via: str | None
    tainted: bool


def _one_step(A: PartialAction) -> dict:
    G = A.groupoid
    rel = {x: set() for x in A.carrier}
    for g in G.elements:
        for x, y in A.maps[g].items():
            rel[x].add(y)
    return rel


def orbit_relation(A: PartialAction) -> OrbitRelation:
    """Partition of the carrier by the reachability of the one-step relation.

    On validated data the one-step relation is itself an equivalence and must
    equal its transitive closure; a mismatch aborts.  On tainted data the
    first non-transitivity witness (x, z) is reported instead.
    """
    rel = _one_step(A)
    reflexive = all(x in rel[x] for x in A.carrier)
    symmetric = all(all(x in rel[y] for y in rel[x]) for x in A.carrier)
    witness = None
    via = None
    for x in A.carrier:
        for y in sorted(rel[x]):
            for z in sorted(rel[y]):
                if z not in rel[x]:
                    witness = (x, z)
                    via = y
                    break
            if witness:
                break
        if witness:
            break
    is_equiv = reflexive and symmetric and witness is None
    if not is_equiv and not A.tainted:
        raise FalsificationError(
            f"one-step orbit relation is not an equivalence on validated data: "
            f"reflexive={reflexive} symmetric={symmetric} witness={witness}"
        )

    seen: set = set()
    classes = []
    for x in A.carrier:
        if x in seen:
            continue
        block, frontier = {x}, [x]
        while frontier:
            p = frontier.pop()
            for q in rel[p]:
                if q not in block:
                    block.add(q)
                    frontier.append(q)
        classes.append(frozenset(block))
        seen |= block
    return OrbitRelation(
        classes=tuple(sorted(classes, key=min)),
        one_step={x: frozenset(rel[x]) for x in A.carrier},
        is_equivalence=is_equiv,
        witness=witness,
        via=via,
        tainted=A.tainted,
    )


def moving_elements(A: PartialAction, x: str) -> frozenset:
    """All g whose map is defined at x (x lying in the domain of the inverse)."""
    if x not in A.carrier:
        raise PreconditionError(f"{x!r} is not a carrier point")
    G = A.groupoid
    return frozenset(g for g in G.elements if x in A.domains[G.inv[g]])


def orbit_of(A: PartialAction, x: str) -> frozenset:
    return frozenset(A.maps[g][x] for g in moving_elements(A, x))


@dataclass(frozen=True)
class OrbitMap:
    basepoint: str
    gx: frozenset
    table: dict


def orbit_map(A: PartialAction, x: str) -> OrbitMap:
    gx = moving_elements(A, x)
    return OrbitMap(basepoint=x, gx=gx, table={g: A.maps[g][x] for g in sorted(gx)})


def stabilizer(A: PartialAction, x: str) -> frozenset:
    """Elements fixing x; always a subgroup of the isotropy group at the anchor."""
    stab = frozenset(g for g in moving_elements(A, x) if A.maps[g][x] == x)
    if not A.tainted:
        G = A.groupoid
        e = A.anchor[x]
        iso = set(G.isotropy_elements(e))
        closed = (
            stab <= iso
            and e in stab
            and all(G.inv[g] in stab for g in stab)
            and all(G.mul[(g, h)] in stab for g in stab for h in stab)
        )
        if not closed:
            raise FalsificationError(f"stabilizer of {x!r} is not a subgroup of its isotropy group")
    return stab


@dataclass(frozen=True)
class Classification:
    transitive: bool
    free: bool


def classify(A: PartialAction) -> Classification:
    rel = orbit_relation(A)
    transitive = len(rel.classes) == 1 and bool(A.carrier)
    free = all(stabilizer(A, x) == frozenset({A.anchor[x]}) for x in A.carrier)
    return Classification(transitive=transitive, free=free)


def restrict(B: PartialAction, S) -> PartialAction:
    """Induced partial action on a subset: keep the points that stay inside.

    Works for any validated action, global or not; restricting twice along
    nested subsets agrees with restricting once.
    """
    S = frozenset(S)
    if not S <= set(B.carrier):
        raise PreconditionError("restriction subset leaves the carrier")
    G = B.groupoid
    domains = {}
    for g in G.elements:
        inside = S & B.domains[G.inv[g]]
        domains[g] = frozenset(B.maps[g][x] for x in inside) & S
    maps = {}
    for g in G.elements:
        maps[g] = {x: B.maps[g][x] for x in domains[G.inv[g]]}
    out = build_partial_action(
        G,
        sorted(S),
        {x: B.anchor[x] for x in S},
        domains,
        maps,
        bypass=B.tainted,
    )
    return out


def invariant_closure(B: PartialAction, S) -> frozenset:
    """Smallest invariant superset of S inside the carrier of a global action."""
    if not is_global(B):
        raise PreconditionError("invariant closure is defined for global actions")
    S = frozenset(S)
    if not S <= set(B.carrier):
        raise PreconditionError("subset leaves the carrier")
    G = B.groupoid
    restricted = restrict(B, S)
    closed: set = set()
    for h in G.elements:
        for x in restricted.domains[G.src[h]]:
            closed.add(B.maps[h][x])
    # same set, computed as one-step saturation of S under every map
    saturated = set(S)
    for h in G.elements:
        for x in S & B.domains[G.inv[h]]:
            saturated.add(B.maps[h][x])
    if closed != saturated:
        raise FalsificationError("fiberwise closure disagrees with one-step saturation")
    return frozenset(closed)


def restrict_to_isotropy(A: PartialAction, e: str) -> PartialAction:
    """The induced partial action of the isotropy group at e on the fiber of e."""
    if e not in A.groupoid.identities:
        raise PreconditionError(f"{e!r} is not an identity")
    H = isotropy_group(A.groupoid, e)
    carrier = sorted(A.domains[e])
    return build_partial_action(
        H,
        carrier,
        {x: e for x in carrier},
        {g: A.domains[g] for g in H.elements},
        {g: dict(A.maps[g]) for g in H.elements},
        bypass=A.tainted,
    )


@dataclass(frozen=True)
class ActionGraph:
    gamma: frozenset  # pairs (g, x) with the map of g defined at x
    full: frozenset  # triples (g, x, image)


def action_graph(A: PartialAction) -> ActionGraph:
    G = A.groupoid
    gamma = set()
    full = set()
    for g in G.elements:
        for x in A.domains[G.inv[g]]:
            gamma.add((g, x))
            full.add((g, x, A.maps[g][x]))
    return ActionGraph(gamma=frozenset(gamma), full=frozenset(full))


@dataclass(frozen=True)
class GraphOpenness:
    graph_open: bool
    graph_closed: bool


def action_graphs(A: PartialAction, T_G: FiniteTopology, T_X: FiniteTopology) -> GraphOpenness:
    """Openness of the domain graph and closedness of the full graph."""
    if set(T_G.carrier) != set(A.groupoid.elements):
        raise StructuralError("groupoid topology carrier mismatch")
    if set(T_X.carrier) != set(A.carrier):
        raise StructuralError("carrier topology mismatch")
    graph = action_graph(A)
    open_in = topo.product(T_G, T_X)
    closed_in = topo.product(T_G, T_X, T_X)
    return GraphOpenness(
        graph_open=topo.is_open(open_in, graph.gamma),
        graph_closed=topo.is_closed(closed_in, graph.full),
    )


@dataclass(frozen=True)
class OrbitSpace:
    classes: tuple
    projection: dict
    quotient_topology: FiniteTopology | None
    projection_open: bool | None
    preimage_formula_verified: bool


def orbit_space(A: PartialAction, T_X: FiniteTopology | None = None) -> OrbitSpace:
    """Orbit classes with projection; quotient topology when one is supplied.

    For every open U the saturation identity (preimage of the image equals
    the union of the partial translates of U) is verified, and when every
    domain is open the projection is asserted to be an open map.
    """
    rel = orbit_relation(A)
    projection = {}
    for block in rel.classes:
        rep = min(block)
        for x in block:
            projection[x] = rep
    quotient_T = None
    projection_open = None
    formula_checked = False
    if T_X is not None:
        if set(T_X.carrier) != set(A.carrier):
            raise StructuralError("carrier topology mismatch")
        G = A.groupoid
        for U in topo.all_opens(T_X):
            hit = {projection[x] for x in U}
            lhs = frozenset(x for x in A.carrier if projection[x] in hit)
            rhs = set()
            for g in G.elements:
                for x in U & A.domains[G.inv[g]]:
                    rhs.add(A.maps[g][x])
            if lhs != frozenset(rhs):
                raise FalsificationError(
                    f"orbit saturation identity failed for open {sorted(U)}"
                )
        formula_checked = True
        if rel.classes:
            quotient_T = topo.quotient(T_X, rel.classes)
            projection_open = topo.is_open_map(projection, T_X, quotient_T)
            # openness of the projection is guaranteed only when the action is
            # compatible with the topology: open domains and open partial maps
            domains_open = all(topo.is_open(T_X, A.domains[g]) for g in G.elements)
            maps_open = domains_open and all(
                topo.is_open_map(
                    A.maps[g],
                    topo.subspace(T_X, A.domains[G.inv[g]]),
                    topo.subspace(T_X, A.domains[g]),
                )
                for g in G.elements
                if A.domains[g]
            )
            if domains_open and maps_open and not projection_open:
                raise FalsificationError(
                    "orbit projection is not open although the action is open-compatible"
                )
    return OrbitSpace(
        classes=rel.classes,
        projection=projection,
        quotient_topology=quotient_T,
        projection_open=projection_open,
        preimage_formula_verified=formula_checked,
    )


def relabel_action(A: PartialAction, mapping: dict) -> PartialAction:
    """Transport a partial action along a bijective renaming of carrier points."""
    if set(mapping) != set(A.carrier) or len(set(mapping.values())) != len(A.carrier):
        raise StructuralError("relabeling must be a bijection on the carrier")
    return build_partial_action(
        A.groupoid,
        sorted(mapping.values()),
        {mapping[x]: e for x, e in A.anchor.items()},
        {g: frozenset(mapping[x] for x in s) for g, s in A.domains.items()},
        {g: {mapping[x]: mapping[y] for x, y in t.items()} for g, t in A.maps.items()},
        bypass=A.tainted,
    )
