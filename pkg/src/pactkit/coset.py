"""Coset spaces of a basepoint and their comparison with the envelope.

The source fiber over the anchor of a point, divided by the stabilizer,
carries a global left-multiplication action; for transitive bases that
action is isomorphic to any envelope of the base.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import FalsificationError, PreconditionError
from .action import (
    PartialAction,
    build_partial_action,
    classify,
    is_global,
    restrict_to_isotropy,
    stabilizer,
)
from .envelope import EnvelopingAction, verify_globalization
from .morphisms import GMap, find_isomorphism, is_isomorphism, validate_gmap


def coset_token(rep: str) -> str:
    return f"[{rep}]"


@dataclass(frozen=True, eq=True)
class CosetSpace:
    base: PartialAction
    basepoint: str
    hx: frozenset
    classes: tuple
    class_of: dict
    delta: PartialAction


def build_coset_action(A: PartialAction, x: str) -> CosetSpace:
    """Quotient the source fiber over anchor(x) by the stabilizer of x.

    Two fiber elements are identified when they share a range unit and their
    difference stabilizes x; the relation is verified to be an equivalence.
    The induced left-multiplication action is validated and global, and for
    free bases every class is a singleton.
    """
    if x not in A.carrier:
        raise PreconditionError(f"{x!r} is not a carrier point")
    G = A.groupoid
    stab = stabilizer(A, x)
    hx = sorted(G.d_fiber(A.anchor[x]))

    def related(h1: str, h2: str) -> bool:
        if G.rng[h1] != G.rng[h2]:
            return False
        return G.mul[(G.inv[h2], h1)] in stab

    def broken(message: str):
        if A.tainted:
            return PreconditionError(message + " (input was built with the validation bypass)")
        return FalsificationError(message)

    for h1 in hx:
        if not related(h1, h1):
            raise broken("coset relation is not reflexive")
        for h2 in hx:
            if related(h1, h2) != related(h2, h1):
                raise broken("coset relation is not symmetric")
            for h3 in hx:
                if related(h1, h2) and related(h2, h3) and not related(h1, h3):
                    raise broken("coset relation is not transitive")

    blocks = []
    seen: set = set()
    for h in hx:
        if h in seen:
            continue
        block = frozenset(k for k in hx if related(h, k))
        blocks.append(block)
        seen |= block
    classes = tuple(sorted(blocks, key=min))
    class_of = {h: coset_token(min(b)) for b in classes for h in b}

    tokens = sorted({class_of[h] for h in hx})
    anchor = {class_of[min(b)]: G.rng[min(b)] for b in classes}
    domains = {g: frozenset(t for t in tokens if anchor[t] == G.rng[g]) for g in G.elements}
    maps = {}
    for g in G.elements:
        table = {}
        for b in classes:
            token = class_of[min(b)]
            if anchor[token] != G.src[g]:
                continue
            targets = {class_of[G.mul[(g, h)]] for h in b}
            if len(targets) != 1:
                raise FalsificationError(f"coset action of {g!r} is not well defined on {token}")
            table[token] = next(iter(targets))
        maps[g] = table
    delta = build_partial_action(G, tokens, anchor, domains, maps)
    if not is_global(delta):
        raise FalsificationError("coset action is not global")
    if classify(A).free and any(len(b) != 1 for b in classes):
        raise FalsificationError("free base produced a non-singleton coset class")
    return CosetSpace(
        base=A, basepoint=x, hx=frozenset(hx), classes=classes, class_of=class_of, delta=delta
    )


def coset_envelope_isomorphism(C: CosetSpace, E: EnvelopingAction) -> GMap:
    """Isomorphism from the coset action onto the envelope of a transitive base.

    Classes are sent through the envelope action applied to the embedded
    basepoint.  Transitivity of the base is a hard precondition; on valid
    transitive input a failure of well-definedness, bijectivity, or
    equivariance is a falsification event and aborts loudly.
    """
    if C.base != E.base:
        raise PreconditionError("coset space and envelope are not over the same base action")
    if not classify(C.base).transitive:
        raise PreconditionError(
            "coset comparison requires a transitive base action; this base is not transitive"
        )
    B = E.action
    anchored = E.embedding[C.basepoint]
    table = {}
    for block in C.classes:
        token = C.class_of[min(block)]
        targets = {B.maps[h][anchored] for h in block}
        if len(targets) != 1:
            raise FalsificationError(f"comparison map is not well defined on {token}")
        table[token] = next(iter(targets))
    witness = GMap(source=C.delta, target=B, table=table)
    if not validate_gmap(witness).ok or not is_isomorphism(witness):
        raise FalsificationError("coset comparison map is not an isomorphism")
    return witness


@dataclass(frozen=True)
class IsotropyComparison:
    basepoint: str
    witness: GMap
    coset_class_count: int
    stabilizer_order: int


def isotropy_restriction_check(
    A: PartialAction, x: str, E: EnvelopingAction
) -> IsotropyComparison:
    """Group case: the envelope restricted to the isotropy group is a coset action.

    Only one-unit groupoids are supported, mirroring the scope of the
    underlying statement; multi-unit input is rejected.
    """
    G = A.groupoid
    if not G.is_group():
        raise PreconditionError(
            "isotropy comparison is stated for one-unit groupoids (group actions) only"
        )
    if not classify(A).transitive:
        raise PreconditionError("isotropy comparison requires a transitive base action")
    report = verify_globalization(E)
    if not report.ok:
        raise PreconditionError("envelope fails its defining conditions")
    e = A.anchor[x]
    lhs = restrict_to_isotropy(E.action, e)
    C = build_coset_action(A, x)
    rhs = restrict_to_isotropy(C.delta, e)
    witness = find_isomorphism(rhs, lhs)
    if witness is None:
        raise FalsificationError(
            "coset action and isotropy-restricted envelope are not isomorphic"
        )
    return IsotropyComparison(
        basepoint=x,
        witness=witness,
        coset_class_count=len(C.classes),
        stabilizer_order=len(stabilizer(A, x)),
    )
