import random

from pactkit import (
    classify,
    is_continuous,
    is_global,
    is_open,
    is_open_map,
    orbit_relation,
    subspace,
    validate_groupoid,
    validate_partial_action,
)
from pactkit.sampling import (
    groupoid_pool,
    mulclose,
    random_compatible_topology,
    random_global_action,
    random_partial_action,
    random_topological_instance,
    small_groups,
)


def test_pool_members_validate_within_size_bound():
    pool = groupoid_pool()
    assert pool
    for G in pool:
        assert len(G.elements) <= 12
        assert validate_groupoid(G).ok


def test_small_groups_orders():
    orders = {name: len(G.elements) for name, G in small_groups().items()}
    assert orders == {"Z1": 1, "Z2": 2, "Z3": 3, "Z4": 4, "Z5": 5, "Z6": 6, "V4": 4, "S3": 6}


def test_mulclose_is_a_subgroup():
    G = small_groups()["S3"]
    e = next(iter(G.identities))
    rng = random.Random(1)
    for _ in range(10):
        sub = mulclose(G, {e, rng.choice(G.elements)})
        assert e in sub
        assert all(G.inv[g] in sub for g in sub)
        assert all(G.mul[(g, h)] in sub for g in sub for h in sub)
        assert len(G.elements) % len(sub) == 0


def test_random_global_actions_are_global_and_bounded():
    rng = random.Random(6)
    pool = groupoid_pool()
    for _ in range(30):
        B = random_global_action(rng, rng.choice(pool), max_points=8)
        assert len(B.carrier) <= 8
        assert is_global(B)
        report = validate_partial_action(B.groupoid, B.carrier, B.anchor, B.domains, B.maps)
        assert report.ok


def test_random_partial_actions_validate():
    rng = random.Random(7)
    for _ in range(30):
        A = random_partial_action(rng)
        report = validate_partial_action(A.groupoid, A.carrier, A.anchor, A.domains, A.maps)
        assert report.ok
        assert orbit_relation(A).is_equivalence


def test_compatible_topology_contract():
    # every domain open, every partial bijection a homeomorphism of subspaces
    rng = random.Random(8)
    for _ in range(15):
        A = random_partial_action(rng)
        if not A.carrier:
            continue
        T = random_compatible_topology(rng, A)
        G = A.groupoid
        for g in G.elements:
            assert is_open(T, A.domains[g])
            dom = subspace(T, A.domains[G.inv[g]])
            cod = subspace(T, A.domains[g])
            assert is_continuous(A.maps[g], dom, cod)
            assert is_open_map(A.maps[g], dom, cod)


def test_topological_instances_respect_the_product_bound():
    rng = random.Random(9)
    nontrivial = 0
    for _ in range(20):
        A, T_G, T_M = random_topological_instance(rng)
        assert len(A.groupoid.elements) * len(A.carrier) <= 24
        assert all(len(T_G.min_open[g]) == 1 for g in T_G.carrier)
        if any(len(T_M.min_open[x]) > 1 for x in T_M.carrier):
            nontrivial += 1
    assert nontrivial  # the sample must include genuinely non-discrete carriers


def test_generator_covers_all_classification_shapes():
    rng = random.Random(10)
    seen = set()
    for _ in range(200):
        A = random_partial_action(rng)
        cls = classify(A)
        seen.add((cls.transitive, cls.free))
    assert len(seen) >= 3
