"""The enveloping globalization of a partial action.

Pairs (g, x) with x in the fiber of src(g) are merged by the translation
relation; the quotient carries a global action by left multiplication on the
first coordinate, and the base embeds via x -> [anchor(x), x].
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import FalsificationError, PreconditionError, Violation
from .action import (
    PartialAction,
    action_graph,
    action_graphs,
    build_partial_action,
    is_global,
    restrict,
)
from .morphisms import GMap, build_gmap, is_isomorphism, validate_gmap
from . import topology as topo
from .topology import FiniteTopology, star_open_report

ENVELOPE_TOPOLOGY_CAP = 64


class _UnionFind:
    """Union-find with path compression and union by size."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]

    def blocks(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), set()).add(x)
        return [frozenset(b) for b in out.values()]


def class_token(rep: tuple) -> str:
    return f"[{rep[0]},{rep[1]}]"


@dataclass(frozen=True, eq=True)
class EnvelopingAction:
    base: PartialAction
    pairs: tuple
    classes: tuple
    class_of: dict
    action: PartialAction
    embedding: dict


def _pair_neighbours(A: PartialAction, g: str, x: str):
    """Pairs identified with (g, x): one per l with src(l)=src(g) acting at x."""
    G = A.groupoid
    for l in G.d_fiber(G.src[g]):
        if x in A.domains[G.inv[l]]:
            yield (G.mul[(g, G.inv[l])], A.maps[l][x])


def globalize(A: PartialAction) -> EnvelopingAction:
    """Construct the enveloping action of a validated partial action.

    The merge relation is verified to be an equivalence before quotienting,
    the induced action is evaluated on every member of every class to catch
    representative-dependent defects, and the result is validated as a global
    action with an injective embedding.
    """
    G = A.groupoid
    pairs = tuple(
        (g, x) for g in G.elements for x in A.carrier if A.anchor[x] == G.src[g]
    )
    rel = {p: set() for p in pairs}
    for g, x in pairs:
        for q in _pair_neighbours(A, g, x):
            rel[(g, x)].add(q)

    problems = []
    for p in pairs:
        if p not in rel[p]:
            problems.append(("reflexive", p))
    for p in pairs:
        for q in rel[p]:
            if p not in rel[q]:
                problems.append(("symmetric", (p, q)))
    for p in pairs:
        for q in rel[p]:
            for r in rel[q]:
                if r not in rel[p]:
                    problems.append(("transitive", (p, q, r)))
    if problems:
        kind, witness = problems[0]
        message = f"merge relation is not {kind}: witness {witness}"
        if A.tainted:
            raise PreconditionError(message + " (input was built with the validation bypass)")
        raise FalsificationError(message)

    uf = _UnionFind(pairs)
    for p in pairs:
        for q in rel[p]:
            uf.union(p, q)
    classes = tuple(sorted(uf.blocks(), key=min))
    class_of = {}
    anchor_of_class = {}
    for block in classes:
        token = class_token(min(block))
        ranges = {G.rng[g] for g, _ in block}
        if len(ranges) != 1:
            raise FalsificationError(f"class {token} mixes range units {sorted(ranges)}")
        anchor_of_class[token] = next(iter(ranges))
        for p in block:
            class_of[p] = token

    tokens = sorted(anchor_of_class)
    block_of_token = {class_of[min(b)]: b for b in classes}
    domains = {
        k: frozenset(t for t in tokens if anchor_of_class[t] == G.rng[k]) for k in G.elements
    }
    maps = {}
    for k in G.elements:
        table = {}
        for token in sorted(domains[G.inv[k]]):
            targets = {class_of[(G.mul[(k, h)], x)] for h, x in block_of_token[token]}
            if len(targets) != 1:
                raise FalsificationError(
                    f"action of {k!r} is not well defined on class {token}: {sorted(targets)}"
                )
            table[token] = next(iter(targets))
        maps[k] = table
    action = build_partial_action(G, tokens, anchor_of_class, domains, maps, bypass=A.tainted)
    if not is_global(action):
        raise FalsificationError("constructed enveloping action is not global")

    embedding = {x: class_of[(A.anchor[x], x)] for x in A.carrier}
    if len(set(embedding.values())) != len(A.carrier):
        raise FalsificationError("embedding of the base into the envelope is not injective")
    return EnvelopingAction(
        base=A,
        pairs=pairs,
        classes=classes,
        class_of=class_of,
        action=action,
        embedding=embedding,
    )


@dataclass(frozen=True)
class GlobalizationReport:
    ok: bool
    condition_i: bool
    condition_ii: bool
    condition_iii: bool
    violations: tuple


def verify_globalization(E: EnvelopingAction) -> GlobalizationReport:
    """Exhaustively check the three defining conditions of a globalization.

    (i) embedded domains are recovered by restriction, (ii) the global action
    extends the partial one through the embedding, (iii) every domain is the
    union of the translates of the embedded fibers.
    """
    A, B = E.base, E.action
    G = A.groupoid
    emb = E.embedding
    image = frozenset(emb.values())
    viol: list[Violation] = []

    ok_i = True
    for g in G.elements:
        lhs = frozenset(emb[x] for x in A.domains[g])
        inner = image & B.domains[G.inv[g]]
        rhs = frozenset(B.maps[g][c] for c in inner) & image
        if lhs != rhs:
            ok_i = False
            viol.append(Violation("(i)", (g, min(lhs ^ rhs)), "restriction does not recover the domain"))

    ok_ii = True
    for g in G.elements:
        for x in sorted(A.domains[G.inv[g]]):
            if B.maps[g][emb[x]] != emb[A.maps[g][x]]:
                ok_ii = False
                viol.append(Violation("(ii)", (g, x), "embedding does not intertwine the actions"))

    ok_iii = True
    for g in G.elements:
        union = set()
        for h in G.elements:
            if G.rng[h] != G.rng[g]:
                continue
            for x in A.domains[G.src[h]]:
                union.add(B.maps[h][emb[x]])
        if frozenset(union) != B.domains[g]:
            ok_iii = False
            witness = min(frozenset(union) ^ B.domains[g])
            viol.append(Violation("(iii)", (g, witness), "translate union misses the domain"))

    return GlobalizationReport(
        ok=ok_i and ok_ii and ok_iii,
        condition_i=ok_i,
        condition_ii=ok_ii,
        condition_iii=ok_iii,
        violations=tuple(viol),
    )


def restrict_back(E: EnvelopingAction) -> tuple[PartialAction, GMap]:
    """Restrict the envelope to the embedded image and return the witnessing isomorphism."""
    restricted = restrict(E.action, frozenset(E.embedding.values()))
    witness = build_gmap(E.base, restricted, dict(E.embedding))
    if not is_isomorphism(witness):
        raise FalsificationError("embedding is not an isomorphism onto the restricted envelope")
    return restricted, witness


def compare_globalizations(E1: EnvelopingAction, E2: EnvelopingAction) -> GMap:
    """Canonical isomorphism between two envelopes of the same base.

    Classes of the first envelope are sent through the second action applied
    to the embedded base point; the value must not depend on the member
    chosen, and the induced map must be an isomorphism.
    """
    if E1.base != E2.base:
        raise PreconditionError("envelopes are not over the same base action")
    B2 = E2.action
    table = {}
    for block in E1.classes:
        token = E1.class_of[min(block)]
        targets = {B2.maps[g][E2.embedding[x]] for g, x in block}
        if len(targets) != 1:
            raise FalsificationError(
                f"uniqueness map is not well defined on {token}: {sorted(targets)}"
            )
        table[token] = next(iter(targets))
    witness = GMap(source=E1.action, target=B2, table=table)
    report = validate_gmap(witness)
    if not report.ok or not is_isomorphism(witness):
        raise FalsificationError("canonical comparison map is not an isomorphism")
    return witness


def relabel_envelope_base(E: EnvelopingAction, mapping: dict) -> EnvelopingAction:
    """Transport an envelope along a renaming of its base carrier.

    Class tokens are recomputed from the renamed canonical members, so two
    envelopes of the same action built under different orderings can be
    compared directly.
    """
    from .action import relabel_action

    base = relabel_action(E.base, mapping)
    pairs = tuple(sorted((g, mapping[x]) for g, x in E.pairs))
    classes = tuple(sorted((frozenset((g, mapping[x]) for g, x in b) for b in E.classes), key=min))
    token_map = {}
    for block in E.classes:
        renamed = frozenset((g, mapping[x]) for g, x in block)
        token_map[E.class_of[min(block)]] = class_token(min(renamed))
    class_of = {}
    for block in classes:
        token = class_token(min(block))
        for p in block:
            class_of[p] = token
    action = build_partial_action(
        E.action.groupoid,
        sorted(token_map.values()),
        {token_map[t]: e for t, e in E.action.anchor.items()},
        {g: frozenset(token_map[t] for t in s) for g, s in E.action.domains.items()},
        {g: {token_map[a]: token_map[b] for a, b in t.items()} for g, t in E.action.maps.items()},
        bypass=E.action.tainted,
    )
    embedding = {mapping[x]: token_map[t] for x, t in E.embedding.items()}
    return EnvelopingAction(
        base=base,
        pairs=pairs,
        classes=classes,
        class_of=class_of,
        action=action,
        embedding=embedding,
    )


@dataclass(frozen=True)
class EnvelopeTopologyReport:
    skipped: bool
    reasons: tuple
    graph_open: bool | None = None
    star_open: bool | None = None
    pi_open: bool | None = None
    iota_open_embedding: bool | None = None
    beta_continuous: bool | None = None
    fiber_formula_holds: bool | None = None
    MG_hausdorff: bool | None = None
    relation_closed: bool | None = None
    graph_closed: bool | None = None

    def booleans(self) -> dict:
        return {
            "graph_open": self.graph_open,
            "graph_closed": self.graph_closed,
            "pi_open": self.pi_open,
            "iota_open_embedding": self.iota_open_embedding,
            "beta_continuous": self.beta_continuous,
            "fiber_formula_holds": self.fiber_formula_holds,
            "MG_hausdorff": self.MG_hausdorff,
            "relation_closed": self.relation_closed,
        }


def envelope_topology(
    E: EnvelopingAction, T_G: FiniteTopology, T_M: FiniteTopology
) -> EnvelopeTopologyReport:
    """Topological report on the envelope of a graph-open base.

    Preconditions (graph-open base, star-open groupoid topology, size cap)
    are reported rather than raised; when they fail the checks are skipped.
    ``pi_open`` covers both openness of the projection and the explicit
    saturation formula for every pair of basic opens.
    """
    A = E.base
    G = A.groupoid
    reasons = []
    if len(G.elements) * len(A.carrier) > ENVELOPE_TOPOLOGY_CAP:
        reasons.append("size_cap_exceeded")
    star = star_open_report(G, T_G)
    if not star.star_open:
        reasons.append("groupoid_topology_not_star_open")
    graphs = action_graphs(A, T_G, T_M)
    if not graphs.graph_open:
        reasons.append("base_action_not_graph_open")
    if reasons:
        return EnvelopeTopologyReport(
            skipped=True,
            reasons=tuple(reasons),
            graph_open=graphs.graph_open,
            star_open=star.star_open,
            graph_closed=graphs.graph_closed,
        )

    pair_set = frozenset(E.pairs)
    T_pairs = topo.subspace(topo.product(T_G, T_M), pair_set)
    rep_quotient = topo.quotient(T_pairs, E.classes)
    T_MG = topo.rename_points(
        rep_quotient, {rep: E.class_of[rep] for rep in rep_quotient.carrier}
    )
    projection = {p: E.class_of[p] for p in E.pairs}

    pi_open_map = topo.is_open_map(projection, T_pairs, T_MG)
    opens_G = topo.all_opens(T_G)
    opens_M = topo.all_opens(T_M)
    if len(opens_G) * len(opens_M) > 4096:
        # both sides of the identity distribute over unions of basis opens,
        # so the minimal-open pairs carry the full content
        opens_G = sorted({T_G.min_open[g] for g in T_G.carrier}, key=sorted)
        opens_M = sorted({T_M.min_open[x] for x in T_M.carrier}, key=sorted)
    formula_ok = True
    for V in opens_G:
        for U in opens_M:
            window = [p for p in E.pairs if p[0] in V and p[1] in U]
            hit = {projection[p] for p in window}
            lhs = frozenset(p for p in E.pairs if projection[p] in hit)
            rhs = set()
            for k in G.elements:
                left = [v for v in V if G.src[v] == G.src[k]]
                right = [u for u in U if u in A.domains[G.inv[k]]]
                for v in left:
                    gv = G.mul[(v, G.inv[k])]
                    for u in right:
                        rhs.add((gv, A.maps[k][u]))
            if lhs != frozenset(rhs):
                formula_ok = False
    pi_open = pi_open_map and formula_ok

    image = frozenset(E.embedding.values())
    T_image = topo.subspace(T_MG, image)
    iota = dict(E.embedding)
    iota_ok = (
        len(set(iota.values())) == len(iota)
        and topo.is_continuous(iota, T_M, T_MG)
        and topo.is_open_map(iota, T_M, T_image)
    )

    fiber_ok = True
    B = E.action
    for e in sorted(G.identities):
        fiber_classes = B.domains[e]
        for U in opens_M:
            lhs = frozenset(iota[u] for u in U) & fiber_classes
            rhs = frozenset(iota[u] for u in U if u in A.domains[e])
            if lhs != rhs:
                fiber_ok = False

    fp = sorted((k, c) for k in G.elements for c in B.carrier if B.anchor[c] == G.src[k])
    T_fp = topo.subspace(topo.product(T_G, T_MG), frozenset(fp))
    beta = {(k, c): B.maps[k][c] for k, c in fp}
    beta_ok = topo.is_continuous(beta, T_fp, T_MG)

    hausdorff = topo.is_hausdorff(T_MG)
    relation = frozenset(
        (p, q) for p in E.pairs for q in E.pairs if projection[p] == projection[q]
    )
    relation_closed = topo.is_closed(topo.product(T_pairs, T_pairs), relation)
    graph = action_graph(A)
    graph_closed = topo.is_closed(topo.product(T_G, T_M, T_M), graph.full)

    return EnvelopeTopologyReport(
        skipped=False,
        reasons=(),
        graph_open=True,
        star_open=True,
        pi_open=pi_open,
        iota_open_embedding=iota_ok,
        beta_continuous=beta_ok,
        fiber_formula_holds=fiber_ok,
        MG_hausdorff=hausdorff,
        relation_closed=relation_closed,
        graph_closed=graph_closed,
    )
