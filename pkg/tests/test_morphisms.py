import random

import pytest

import helpers
from pactkit import (
    GMap,
    PreconditionError,
    StructuralError,
    build_gmap,
    build_partial_action,
    compose_gmaps,
    find_isomorphism,
    identity_gmap,
    inverse_gmap,
    is_isomorphism,
    orbit_of,
    relabel_action,
    restrict,
    validate_gmap,
)
from pactkit.fixtures import fix_b, fix_c, z2
from pactkit.sampling import random_partial_action, random_relabeling


def test_identity_map_is_valid():
    f = identity_gmap(fix_c())
    assert validate_gmap(f).ok
    assert is_isomorphism(f)


def test_restriction_embedding_is_valid():
    C = fix_c()
    S = restrict(C, {"u"})
    f = build_gmap(S, C, {"u": "u"})
    assert validate_gmap(f).ok
    assert not is_isomorphism(f)  # not surjective


def test_broken_swap_map_flagged_by_exhaustive_scan():
    C = fix_c()
    table = {"u": "v", "v": "u"}  # anchors cannot commute
    f = GMap(source=C, target=C, table=table)
    report = validate_gmap(f)
    assert not report.ok
    oracle = helpers.gmap_condition_scan(C, C, table)
    assert oracle  # the independent scan agrees something is wrong
    assert {v.condition for v in report.violations} >= {"(i)"}


def test_compose_with_identities():
    C = fix_c()
    S = restrict(C, {"u"})
    f = build_gmap(S, C, {"u": "u"})
    assert compose_gmaps(identity_gmap(S), f).table == f.table
    assert compose_gmaps(f, identity_gmap(C)).table == f.table


def test_compose_requires_matching_endpoints():
    with pytest.raises(PreconditionError):
        compose_gmaps(identity_gmap(fix_c()), identity_gmap(fix_b()))


def test_nested_restriction_embeddings_compose_to_direct_embedding():
    base = build_partial_action(
        z2(),
        ["a", "b", "c"],
        {"a": "e", "b": "e", "c": "e"},
        {"e": {"a", "b", "c"}, "s": {"a", "b", "c"}},
        {"e": {"a": "a", "b": "b", "c": "c"}, "s": {"a": "b", "b": "a", "c": "c"}},
    )
    mid = restrict(base, {"a", "b"})
    small = restrict(mid, {"a"})
    inner = build_gmap(small, mid, {"a": "a"})
    outer = build_gmap(mid, base, {x: x for x in mid.carrier})
    direct = build_gmap(restrict(base, {"a"}), base, {"a": "a"})
    assert compose_gmaps(inner, outer).table == direct.table


def test_find_isomorphism_identity_first_in_canonical_order():
    C = fix_c()
    found = find_isomorphism(C, C)
    assert found is not None
    assert found.table == {"u": "u", "v": "v"}


def test_find_isomorphism_between_different_fixtures_is_none():
    assert find_isomorphism(fix_b(), fix_c()) is None


def test_find_isomorphism_none_when_classification_differs():
    Z = z2()
    fixed = build_partial_action(
        Z,
        ["a", "b"],
        {"a": "e", "b": "e"},
        {"e": {"a", "b"}, "s": {"a", "b"}},
        {"e": {"a": "a", "b": "b"}, "s": {"a": "a", "b": "b"}},
    )
    swap = build_partial_action(
        Z,
        ["a", "b"],
        {"a": "e", "b": "e"},
        {"e": {"a", "b"}, "s": {"a", "b"}},
        {"e": {"a": "a", "b": "b"}, "s": {"a": "b", "b": "a"}},
    )
    assert find_isomorphism(fixed, swap) is None


def test_find_isomorphism_on_relabeled_instances():
    rng = random.Random(55)
    for _ in range(15):
        A = random_partial_action(rng)
        mapping = random_relabeling(rng, A)
        B = relabel_action(A, mapping)
        found = find_isomorphism(A, B)
        assert found is not None
        assert is_isomorphism(found)


def test_find_isomorphism_symmetric():
    rng = random.Random(56)
    cases = [(fix_b(), fix_c()), (fix_c(), fix_c())]
    for _ in range(10):
        A = random_partial_action(rng)
        B = random_partial_action(rng)
        cases.append((A, B))
    for A, B in cases:
        assert (find_isomorphism(A, B) is None) == (find_isomorphism(B, A) is None)


def test_found_isomorphism_has_valid_inverse():
    C = fix_c()
    found = find_isomorphism(C, C)
    inv = inverse_gmap(found)
    assert validate_gmap(inv).ok


def test_bijective_gmap_without_gmap_inverse_is_not_an_isomorphism():
    Z = z2()
    small = build_partial_action(
        Z, ["a"], {"a": "e"}, {"e": {"a"}, "s": set()}, {"e": {"a": "a"}, "s": {}}
    )
    big = build_partial_action(
        Z, ["a"], {"a": "e"}, {"e": {"a"}, "s": {"a"}}, {"e": {"a": "a"}, "s": {"a": "a"}}
    )
    f = build_gmap(small, big, {"a": "a"})
    assert validate_gmap(f).ok
    assert not is_isomorphism(f)
    assert find_isomorphism(small, big) is None


def test_gmap_sends_orbits_into_orbits():
    C = fix_c()
    S = restrict(C, {"u"})
    f = build_gmap(S, C, {"u": "u"})
    for x in S.carrier:
        image_orbit = orbit_of(C, f.table[x])
        assert {f.table[y] for y in orbit_of(S, x)} <= image_orbit


def test_gmap_orbit_preservation_across_random_valid_maps():
    # pool of genuinely valid maps: envelope embeddings and their composites
    from pactkit import compose_gmaps as compose, globalize, restrict_back

    rng = random.Random(202)
    for _ in range(15):
        A = random_partial_action(rng)
        restricted, witness = restrict_back(globalize(A))
        pool = [witness, identity_gmap(A), compose(identity_gmap(A), witness)]
        for f in pool:
            for x in f.source.carrier:
                mapped = {f.table[y] for y in orbit_of(f.source, x)}
                assert mapped <= orbit_of(f.target, f.table[x])


def test_groupoid_mismatch_is_structural_for_validation():
    with pytest.raises(StructuralError):
        validate_gmap(GMap(source=fix_b(), target=fix_c(), table={"a": "u", "b": "v"}))
