import itertools

import pytest
from hypothesis import given, settings, strategies as st

from pactkit import (
    PreconditionError,
    StructuralError,
    action_groupoid,
    composable_pairs,
    disjoint_union,
    from_group,
    isotropy_group,
    pair_groupoid,
    relabel_groupoid,
    star_fibers,
    translation_map,
    validate_groupoid,
)
from pactkit.fixtures import pair2, remark_g, z2


def test_z2_validates():
    assert validate_groupoid(z2()).ok


def test_remark_groupoid_validates():
    G = remark_g()
    assert validate_groupoid(G).ok
    assert G.src["g"] == G.rng["g"] == "e"
    assert G.src["h"] == G.rng["h"] == "f"
    assert len(G.elements) == 6


def test_bad_z2_table_flags_axiom3():
    bad = {
        "elements": ["e", "s"],
        "mul": {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "s"},
        "inv": {"e": "e", "s": "s"},
        "src": {"e": "e", "s": "e"},
        "rng": {"e": "e", "s": "e"},
    }
    report = validate_groupoid(bad)
    assert not report.ok
    assert any(v.condition == "axiom3" and v.witness == ("s",) for v in report.violations)


def test_dangling_reference_is_structural_not_a_violation():
    bad = {
        "elements": ["e"],
        "mul": {("e", "e"): "e"},
        "inv": {"e": "ghost"},
        "src": {"e": "e"},
        "rng": {"e": "e"},
    }
    with pytest.raises(StructuralError):
        validate_groupoid(bad)


def test_supplied_identity_list_cross_checked():
    data = {
        "elements": ["e", "s"],
        "mul": {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"},
        "inv": {"e": "e", "s": "s"},
        "src": {"e": "e", "s": "e"},
        "rng": {"e": "e", "s": "e"},
        "identities": ["e", "s"],
    }
    report = validate_groupoid(data)
    assert any(v.condition == "identity-set" for v in report.violations)


def test_composable_pairs_z2_all_four():
    assert composable_pairs(z2()) == frozenset(itertools.product(["e", "s"], repeat=2))


def test_composable_pairs_pair2_matching_middle():
    G = pair2()
    # oracle: filter all 16 ordered pairs by source = range
    expected = frozenset(
        (g, h) for g in G.elements for h in G.elements if G.src[g] == G.rng[h]
    )
    assert len(expected) == 8
    assert composable_pairs(G) == expected


def test_composable_pairs_remark_blocks():
    G = remark_g()
    e_block = {"e", "g", "g_inv"}
    f_block = {"f", "h", "h_inv"}
    expected = frozenset(itertools.product(e_block, repeat=2)) | frozenset(
        itertools.product(f_block, repeat=2)
    )
    assert composable_pairs(G) == expected


def test_isotropy_groups():
    assert isotropy_group(z2(), "e") == z2()
    assert isotropy_group(pair2(), "(1,1)").elements == ("(1,1)",)
    iso = isotropy_group(remark_g(), "e")
    assert set(iso.elements) == {"e", "g", "g_inv"}
    assert len(iso.identities) == 1
    assert validate_groupoid(iso).ok


def test_isotropy_closed_under_mul_and_inv():
    for G in (z2(), pair2(), remark_g()):
        for e in sorted(G.identities):
            iso = isotropy_group(G, e)
            members = set(iso.elements)
            assert all(G.inv[g] in members for g in members)
            assert all(G.mul[(g, h)] in members for g in members for h in members)


def test_isotropy_rejects_non_identity():
    with pytest.raises(PreconditionError):
        isotropy_group(pair2(), "(1,2)")


def test_star_fibers():
    G = z2()
    assert star_fibers(G, "e") == (frozenset({"e", "s"}), frozenset({"e", "s"}))
    P = pair2()
    d, r = star_fibers(P, "(1,1)")
    assert d == frozenset({"(1,1)", "(2,1)"})
    assert r == frozenset({"(1,1)", "(1,2)"})
    # inversion carries one fiber onto the other
    assert frozenset(P.inv[g] for g in d) == r
    R = remark_g()
    d_f, _ = star_fibers(R, "f")
    assert d_f == frozenset({"f", "h", "h_inv"})


def test_right_translation_by_identity_is_identity_on_fiber():
    G = pair2()
    table = translation_map(G, "(1,1)", "right")
    assert table == {g: g for g in G.d_fiber("(1,1)")}


def test_right_translation_pair2():
    table = translation_map(pair2(), "(2,1)", "right")
    assert table == {"(1,2)": "(1,1)", "(2,2)": "(2,1)"}


def test_left_translation_permutes_range_fiber():
    G = remark_g()
    table = translation_map(G, "g", "left")
    assert set(table) == set(G.r_fiber("e"))
    assert set(table.values()) == set(G.r_fiber("e"))


def test_translation_round_trip():
    for G in (z2(), pair2(), remark_g()):
        for k in G.elements:
            forward = translation_map(G, k, "right")
            backward = translation_map(G, G.inv[k], "right")
            for g, gk in forward.items():
                assert backward[gk] == g


def test_inverse_antihomomorphism():
    # mul(g,h) defined iff mul(inv h, inv g) defined, and then inverses swap
    for G in (z2(), pair2(), remark_g()):
        for g in G.elements:
            for h in G.elements:
                lhs = G.compose(g, h)
                rhs = G.compose(G.inv[h], G.inv[g])
                assert (lhs is None) == (rhs is None)
                if lhs is not None:
                    assert G.inv[lhs] == rhs


def test_double_inverse_and_fiber_swap():
    for G in (z2(), pair2(), remark_g()):
        for g in G.elements:
            assert G.inv[G.inv[g]] == g
            assert G.src[G.inv[g]] == G.rng[g]


def test_from_group_single_identity():
    G = from_group({("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"})
    assert len(G.identities) == 1
    assert len(G.elements) == 2


def test_from_group_rejects_broken_table():
    with pytest.raises(StructuralError):
        from_group({("a", "a"): "a", ("a", "b"): "a", ("b", "a"): "a", ("b", "b"): "b"})


def test_pair_groupoid_counts():
    assert len(pair_groupoid(["1", "2"]).elements) == 4
    assert len(pair_groupoid(["1", "2"]).identities) == 2
    assert len(pair_groupoid(["1", "2", "3"]).elements) == 9


def test_disjoint_union_of_two_z2_copies():
    G = disjoint_union([z2(), z2()])
    assert validate_groupoid(G).ok
    assert len(G.elements) == 4
    assert len(G.identities) == 2
    # every element stays inside its summand
    for g in G.elements:
        assert g[0] == G.src[g][0]


def test_action_groupoid_shape():
    table = {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"}
    swap = {"0": {"p": "p", "q": "q"}, "1": {"p": "q", "q": "p"}}
    G = action_groupoid(table, swap)
    assert validate_groupoid(G).ok
    assert len(G.elements) == 4
    assert G.src["(1,p)"] == "(0,p)"
    assert G.rng["(1,p)"] == "(0,q)"


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_relabeling_equivariance(rnd):
    G = remark_g()
    fresh = [f"t{i}" for i in range(len(G.elements))]
    rnd.shuffle(fresh)
    mapping = dict(zip(G.elements, fresh))
    H = relabel_groupoid(G, mapping)
    assert validate_groupoid(H).ok
    assert composable_pairs(H) == frozenset(
        (mapping[g], mapping[h]) for g, h in composable_pairs(G)
    )
    for e in G.identities:
        d, r = star_fibers(G, e)
        d2, r2 = star_fibers(H, mapping[e])
        assert d2 == frozenset(mapping[g] for g in d)
        assert r2 == frozenset(mapping[g] for g in r)
    for k in G.elements:
        moved = translation_map(H, mapping[k], "right")
        assert moved == {
            mapping[g]: mapping[v] for g, v in translation_map(G, k, "right").items()
        }
