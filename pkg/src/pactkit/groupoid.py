"""Finite groupoids: explicit partial multiplication tables, validation, queries.

Elements are opaque string tokens ordered lexicographically; that order fixes
canonical representatives and deterministic iteration everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import PreconditionError, Report, StructuralError, Violation

_RAW_KEYS = {"elements", "mul", "inv", "src", "rng", "identities"}


@dataclass(frozen=True, eq=True)
class Groupoid:
    """A finite groupoid described by explicit tables.

    ``mul`` holds exactly the composable pairs; looking up a non-composable
    pair yields None rather than an error, since partial definedness is
    semantic, not exceptional.  ``identities`` is derived during validation,
    never trusted from input.  Values are immutable after construction and
    every operation is a pure function, so concurrent reads are safe.
    """

    elements: tuple[str, ...]
    mul: dict
    inv: dict
    src: dict
    rng: dict
    identities: frozenset

    def compose(self, g: str, h: str):
        """Product g*h, or None when the pair is not composable."""
        return self.mul.get((g, h))

    def composable(self, g: str, h: str) -> bool:
        return (g, h) in self.mul

    def d_fiber(self, e: str) -> frozenset:
        return frozenset(g for g in self.elements if self.src[g] == e)

    def r_fiber(self, e: str) -> frozenset:
        return frozenset(g for g in self.elements if self.rng[g] == e)

    def isotropy_elements(self, e: str) -> tuple[str, ...]:
        return tuple(g for g in self.elements if self.src[g] == e and self.rng[g] == e)

    def is_group(self) -> bool:
        return len(self.identities) == 1


def _as_pairs(value, what: str) -> dict:
    if isinstance(value, dict):
        return dict(value)
    try:
        return {k: v for k, v in value}
    except (TypeError, ValueError):
        raise StructuralError(f"{what} must be a map or a list of pairs")


def _as_mul(value) -> dict:
    if isinstance(value, dict):
        return dict(value)
    try:
        return {(g, h): k for g, h, k in value}
    except (TypeError, ValueError):
        raise StructuralError("mul must be a map on pairs or a list of triples")


def _tables(candidate):
    """Normalize raw input into (elements, mul, inv, src, rng, declared_identities)."""
    if isinstance(candidate, Groupoid):
        return (
            list(candidate.elements),
            dict(candidate.mul),
            dict(candidate.inv),
            dict(candidate.src),
            dict(candidate.rng),
            set(candidate.identities),
        )
    if not isinstance(candidate, dict):
        raise StructuralError("groupoid data must be a mapping or a Groupoid")
    unknown = set(candidate) - _RAW_KEYS
    if unknown:
        raise StructuralError(f"unknown keys in groupoid data: {sorted(unknown)}")
    for key in ("elements", "mul", "inv", "src", "rng"):
        if key not in candidate:
            raise StructuralError(f"groupoid data is missing {key!r}")
    elements = list(candidate["elements"])
    if any(not isinstance(g, str) for g in elements):
        raise StructuralError("element tokens must be strings")
    if len(set(elements)) != len(elements):
        raise StructuralError("duplicate element tokens")
    mul = _as_mul(candidate["mul"])
    inv = _as_pairs(candidate["inv"], "inv")
    src = _as_pairs(candidate["src"], "src")
    rng = _as_pairs(candidate["rng"], "rng")
    declared = set(candidate["identities"]) if "identities" in candidate else None

    universe = set(elements)
    for m, what in ((inv, "inv"), (src, "src"), (rng, "rng")):
        if set(m) != universe:
            raise StructuralError(f"{what} must be defined on exactly the element set")
        dangling = sorted(set(m.values()) - universe)
        if dangling:
            raise StructuralError(f"dangling {what} reference: {dangling}")
    for (g, h), k in mul.items():
        if g not in universe or h not in universe or k not in universe:
            raise StructuralError(f"dangling mul reference in ({g!r}, {h!r}) -> {k!r}")
    if declared is not None and not declared <= universe:
        raise StructuralError("declared identities outside the element set")
    return elements, mul, inv, src, rng, declared


def validate_groupoid(candidate) -> Report:
    """Check the groupoid axioms and derived identities on raw table data.

    Structural problems (dangling references, missing tables) raise
    StructuralError; genuine axiom violations come back in the report, each
    naming the axiom and a witness tuple.
    """
    elements, mul, inv, src, rng, declared = _tables(candidate)
    viol: list[Violation] = []

    # axiom 3: unique right/left units, and they agree with the declared maps
    for g in elements:
        rights = [u for u in elements if mul.get((g, u)) == g]
        lefts = [u for u in elements if mul.get((u, g)) == g]
        if len(rights) != 1:
            viol.append(Violation("axiom3", (g,), f"right units {sorted(rights)} not unique"))
        elif rights[0] != src[g]:
            viol.append(Violation("axiom3", (g,), "declared src is not the right unit"))
        if len(lefts) != 1:
            viol.append(Violation("axiom3", (g,), f"left units {sorted(lefts)} not unique"))
        elif lefts[0] != rng[g]:
            viol.append(Violation("axiom3", (g,), "declared rng is not the left unit"))

    # axiom 4 plus the derived inverse identities
    for g in elements:
        i = inv[g]
        if mul.get((i, g)) != src[g]:
            viol.append(Violation("axiom4", (g,), "inv(g)*g != src(g)"))
        if mul.get((g, i)) != rng[g]:
            viol.append(Violation("axiom4", (g,), "g*inv(g) != rng(g)"))
        if inv[i] != g:
            viol.append(Violation("axiom4", (g,), "inv is not an involution"))
        if src[i] != rng[g] or rng[i] != src[g]:
            viol.append(Violation("axiom4", (g,), "src/rng of the inverse are swapped wrongly"))

    # composability domain: mul defined exactly when src(g) = rng(h)
    for g in elements:
        for h in elements:
            if ((g, h) in mul) != (src[g] == rng[h]):
                viol.append(Violation("domain", (g, h), "mul defined iff src(g)=rng(h) fails"))

    # axioms 1 and 2 over all triples
    for g in elements:
        for h in elements:
            gh = mul.get((g, h))
            for k in elements:
                hk = mul.get((h, k))
                left = mul.get((gh, k)) if gh is not None else None
                right = mul.get((g, hk)) if hk is not None else None
                if (left is not None) != (gh is not None and hk is not None):
                    viol.append(Violation("axiom2", (g, h, k), "(gh)k defined iff gh and hk defined fails"))
                if (left is None) != (right is None):
                    viol.append(Violation("axiom1", (g, h, k), "one association defined, the other not"))
                elif left is not None and left != right:
                    viol.append(Violation("axiom1", (g, h, k), "(gh)k != g(hk)"))

    derived = {src[g] for g in elements} | {rng[g] for g in elements}
    for e in sorted(derived):
        if src[e] != e or rng[e] != e:
            viol.append(Violation("identity-set", (e,), "unit is not idempotent under src/rng"))
    if declared is not None and declared != derived:
        diff = tuple(sorted(declared ^ derived))
        viol.append(Violation("identity-set", diff, "supplied identity list disagrees with the derived one"))

    return Report(ok=not viol, violations=tuple(viol))


def build_groupoid(candidate) -> Groupoid:
    """Validate raw tables and freeze them into a Groupoid."""
    elements, mul, inv, src, rng, _ = _tables(candidate)
    report = validate_groupoid(candidate)
    report.raise_if_failed("groupoid validation")
    identities = frozenset({src[g] for g in elements} | {rng[g] for g in elements})
    return Groupoid(
        elements=tuple(sorted(elements)),
        mul=mul,
        inv=inv,
        src=src,
        rng=rng,
        identities=identities,
    )


def composable_pairs(G: Groupoid) -> frozenset:
    """All ordered pairs (g, h) whose product is defined."""
    return frozenset(G.mul)


def isotropy_group(G: Groupoid, e: str) -> Groupoid:
    """The group of all elements with source and range e, as a one-unit groupoid."""
    if e not in G.identities:
        raise PreconditionError(f"{e!r} is not an identity of the groupoid")
    members = set(G.isotropy_elements(e))
    sub = {
        "elements": sorted(members),
        "mul": {(g, h): k for (g, h), k in G.mul.items() if g in members and h in members},
        "inv": {g: G.inv[g] for g in members},
        "src": {g: G.src[g] for g in members},
        "rng": {g: G.rng[g] for g in members},
    }
    out = build_groupoid(sub)
    assert out.identities == frozenset({e})
    return out


def star_fibers(G: Groupoid, e: str) -> tuple[frozenset, frozenset]:
    """The source fiber and range fiber over an identity."""
    if e not in G.identities:
        raise PreconditionError(f"{e!r} is not an identity of the groupoid")
    return G.d_fiber(e), G.r_fiber(e)


def translation_map(G: Groupoid, k: str, side: str = "right") -> dict:
    """Translation by k as an explicit bijection table between fibers.

    Right translation sends g to g*k on the source fiber of rng(k); left
    translation sends g to k*g on the range fiber of src(k).
    """
    if k not in G.src:
        raise PreconditionError(f"{k!r} is not an element of the groupoid")
    if side == "right":
        return {g: G.mul[(g, k)] for g in sorted(G.d_fiber(G.rng[k]))}
    if side == "left":
        return {g: G.mul[(k, g)] for g in sorted(G.r_fiber(G.src[k]))}
    raise PreconditionError(f"side must be 'left' or 'right', got {side!r}")


def relabel_groupoid(G: Groupoid, mapping: dict) -> Groupoid:
    """Transport the groupoid along a bijective renaming of its elements."""
    if set(mapping) != set(G.elements) or len(set(mapping.values())) != len(G.elements):
        raise StructuralError("relabeling must be a bijection defined on every element")
    return build_groupoid(
        {
            "elements": sorted(mapping.values()),
            "mul": {(mapping[g], mapping[h]): mapping[k] for (g, h), k in G.mul.items()},
            "inv": {mapping[g]: mapping[v] for g, v in G.inv.items()},
            "src": {mapping[g]: mapping[v] for g, v in G.src.items()},
            "rng": {mapping[g]: mapping[v] for g, v in G.rng.items()},
        }
    )


# ---------------------------------------------------------------------------
# constructors


def from_group(table: dict) -> Groupoid:
    """One-unit groupoid from a finite group multiplication table.

    ``table`` maps ordered pairs to products and must be total on its token
    set; the identity and inverses are derived, not supplied.
    """
    mul = _as_mul(table)
    tokens = sorted({g for g, _ in mul} | {h for _, h in mul} | set(mul.values()))
    for g in tokens:
        for h in tokens:
            if (g, h) not in mul:
                raise StructuralError(f"group table is not total: missing ({g!r}, {h!r})")
    units = [e for e in tokens if all(mul[(e, x)] == x and mul[(x, e)] == x for x in tokens)]
    if len(units) != 1:
        raise StructuralError("group table has no unique identity")
    e = units[0]
    inv = {}
    for g in tokens:
        candidates = [h for h in tokens if mul[(g, h)] == e and mul[(h, g)] == e]
        if len(candidates) != 1:
            raise StructuralError(f"group table has no unique inverse for {g!r}")
        inv[g] = candidates[0]
    return build_groupoid(
        {
            "elements": tokens,
            "mul": mul,
            "inv": inv,
            "src": {g: e for g in tokens},
            "rng": {g: e for g in tokens},
        }
    )


def pair_token(i: str, j: str) -> str:
    return f"({i},{j})"


def pair_groupoid(objects) -> Groupoid:
    """The pair groupoid on a finite object set: one arrow (i,j) per ordered pair."""
    objs = sorted(str(o) for o in objects)
    if not objs:
        raise StructuralError("pair groupoid needs at least one object")
    elements = [pair_token(i, j) for i in objs for j in objs]
    mul = {}
    for i in objs:
        for j in objs:
            for k in objs:
                mul[(pair_token(i, j), pair_token(j, k))] = pair_token(i, k)
    return build_groupoid(
        {
            "elements": elements,
            "mul": mul,
            "inv": {pair_token(i, j): pair_token(j, i) for i in objs for j in objs},
            "src": {pair_token(i, j): pair_token(j, j) for i in objs for j in objs},
            "rng": {pair_token(i, j): pair_token(i, i) for i in objs for j in objs},
        }
    )


def disjoint_union(parts) -> Groupoid:
    """Disjoint union of groupoids; tokens are prefixed with the summand index."""
    parts = list(parts)
    if not parts:
        raise StructuralError("disjoint union needs at least one summand")
    elements, mul, inv, src, rng = [], {}, {}, {}, {}
    for i, G in enumerate(parts):
        tag = lambda t, i=i: f"{i}.{t}"
        elements.extend(tag(g) for g in G.elements)
        mul.update({(tag(g), tag(h)): tag(k) for (g, h), k in G.mul.items()})
        inv.update({tag(g): tag(v) for g, v in G.inv.items()})
        src.update({tag(g): tag(v) for g, v in G.src.items()})
        rng.update({tag(g): tag(v) for g, v in G.rng.items()})
    return build_groupoid({"elements": elements, "mul": mul, "inv": inv, "src": src, "rng": rng})


def action_groupoid(table: dict, action: dict) -> Groupoid:
    """Groupoid of a group acting on a finite set.

    ``action[g]`` is the permutation induced by group element g, given as a
    point-to-point map.  Arrows are pairs (g, x) from the unit at x to the
    unit at g*x.
    """
    group = from_group(table)
    e = next(iter(group.identities))
    points = None
    for g in group.elements:
        if g not in action:
            raise StructuralError(f"action is missing group element {g!r}")
        perm = dict(action[g])
        if points is None:
            points = set(perm)
        if set(perm) != points or set(perm.values()) != points:
            raise StructuralError(f"action of {g!r} is not a permutation of the point set")
    if not points:
        raise StructuralError("action groupoid needs a nonempty point set")
    for x in points:
        if action[e][x] != x:
            raise StructuralError("identity of the group must act trivially")
    for g in group.elements:
        for h in group.elements:
            for x in points:
                if action[g][action[h][x]] != action[group.mul[(g, h)]][x]:
                    raise StructuralError("action table is not a homomorphism")

    tok = lambda g, x: f"({g},{x})"
    elements = [tok(g, x) for g in group.elements for x in sorted(points)]
    src = {tok(g, x): tok(e, x) for g in group.elements for x in points}
    rng = {tok(g, x): tok(e, action[g][x]) for g in group.elements for x in points}
    inv = {tok(g, x): tok(group.inv[g], action[g][x]) for g in group.elements for x in points}
    mul = {}
    for g in group.elements:
        for h in group.elements:
            for x in points:
                # (g, h*x) composes with (h, x) to give (g*h, x)
                mul[(tok(g, action[h][x]), tok(h, x))] = tok(group.mul[(g, h)], x)
    return build_groupoid({"elements": elements, "mul": mul, "inv": inv, "src": src, "rng": rng})
