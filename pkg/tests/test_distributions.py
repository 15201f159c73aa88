"""Hard-distribution sampling: census laws, conditioning, padding, weighting."""

from __future__ import annotations

from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ngc_lab.distributions import (
    Witness,
    auxiliary_edges_for,
    canon,
    census_of_edges,
    mst_augment,
    pad_to_k,
    sample_dhx,
    sample_dhx_segment,
    sample_hybrid,
    sample_hybrid_batched,
    sample_ngc,
    sample_ngc_batched,
    validate_instance,
)
from ngc_lab.gadgets import parity, to_edges, vertex_from_id, vertex_id
from ngc_lab.seeds import master_seed
from ngc_lab.stats import binomial_check, chi_square_uniform
from oracles import component_census

SEED = master_seed(2024)


def bits(s: str) -> tuple[int, ...]:
    return tuple(int(c) for c in s)


def witness_parity(witness: Witness, j: int) -> int:
    """Crossing parity from the witness algebra, bypassing the graph."""
    acc = 0
    if witness.form == "block":
        for x, sigma in zip(witness.X, witness.Sigma):
            acc ^= x[sigma[j - 1] - 1]
    else:
        for xs, sigmas in zip(witness.X, witness.Sigma):
            for x, sigma in zip(xs, sigmas):
                acc ^= x[sigma[j - 1] - 1]
    return acc


# --- frozen witness ----------------------------------------------------------


def test_frozen_width6_witness_has_all_ones_parity():
    w = Witness(
        "block",
        (bits("100101"), bits("011001")),
        ((3, 1, 4, 2, 6, 5), (2, 1, 4, 5, 3, 6)),
    )
    g = w.build()
    assert [parity(g, j) for j in (1, 2, 3)] == [1, 1, 1]
    assert [witness_parity(w, j) for j in (1, 2, 3)] == [1, 1, 1]


# --- census laws -------------------------------------------------------------


def assert_census_law(instance):
    census = validate_instance(instance)
    n, k = instance.n, instance.k
    assert census.degree_violations == ()
    assert census.count_paths(k - 1) == n // (2 * k)
    if instance.theta == 0:
        assert census.count_cycles(k) == n // (2 * k)
        assert census.count_cycles(2 * k) == 0
    else:
        assert census.count_cycles(2 * k) == n // (4 * k)
        assert census.count_cycles(k) == 0
    # cross-check against the BFS oracle
    paths, cycles = component_census(n, instance.all_edges())
    assert sorted(census.cycles.items()) == sorted(
        (length, cycles.count(length)) for length in set(cycles)
    )
    assert sorted((p + 1 for p in census.paths for _ in range(census.paths[p]))) == paths


def test_census_laws_small():
    for i in range(20):
        for n, k in ((28, 7), (56, 7), (104, 13)):
            assert_census_law(sample_ngc(n, k, SEED.child("law", n, k, i)))


def test_frozen_theta1_56_7():
    i = 0
    while True:
        inst = sample_ngc(56, 7, SEED.child("frozen17", i))
        if inst.theta == 1:
            break
        i += 1
    census = validate_instance(inst)
    assert census.cycles == {14: 2}
    assert census.paths == {6: 4}
    assert census.components == 6


def test_sample_ngc_rejects_bad_shapes():
    with pytest.raises(ValueError):
        sample_ngc(28, 6, SEED)
    with pytest.raises(ValueError):
        sample_ngc(30, 7, SEED)
    with pytest.raises(ValueError):
        sample_ngc(0, 7, SEED)


def test_determinism():
    a = sample_ngc(56, 7, SEED.child("det"))
    b = sample_ngc(56, 7, SEED.child("det"))
    assert a.witness == b.witness and a.theta == b.theta
    assert a.all_edges() == b.all_edges()
    c = sample_ngc(56, 7, SEED.child("det2"))
    assert c.witness != a.witness


# --- hybrids -----------------------------------------------------------------


def test_hybrid_endpoints_match_theta_branches():
    for i in range(10):
        h0 = sample_hybrid(2, 2, 0, SEED.child("h0", i), with_auxiliary=True)
        assert h0.theta == 1
        assert_census_law(h0)
        hm = sample_hybrid(2, 2, 2, SEED.child("hm", i), with_auxiliary=True)
        assert hm.theta == 0
        assert_census_law(hm)


def test_hybrid_forces_parities_exactly():
    m, t = 3, 2
    for h in range(m + 1):
        for i in range(30):
            inst = sample_hybrid(m, t, h, SEED.child("hyb", h, i))
            for j in range(1, m + 1):
                assert witness_parity(inst.witness, j) == (0 if j <= h else 1)


def test_hybrid_free_groups_are_unbiased():
    m, t, trials = 2, 2, 10_000
    ones = 0
    for i in range(trials):
        inst = sample_hybrid(m, t, 1, SEED.child("free", i))
        ones += witness_parity(inst.witness, m + 1)
    assert binomial_check(ones, trials, 0.5).within(3.0)


def test_hybrid_rejects_bad_h():
    with pytest.raises(ValueError):
        sample_hybrid(2, 2, 3, SEED)
    with pytest.raises(ValueError):
        sample_hybrid(2, 2, -1, SEED)


# --- unconditioned target distribution ----------------------------------------


def test_dhx_unbiased_and_roundtrips():
    ones = 0
    trials = 10_000
    for i in range(trials):
        _, w = sample_dhx(3, 2, SEED.child("dhx", i))
        ones += witness_parity(w, 1)
    assert binomial_check(ones, trials, 0.5).within(3.0)

    g, w = sample_dhx(4, 3, SEED.child("dhx-rt"))
    assert to_edges(w.build()) == to_edges(g)


def test_dhx_t1_w1():
    ones = 0
    trials = 10_000
    for i in range(trials):
        _, w = sample_dhx(1, 1, SEED.child("dhx11", i))
        ones += witness_parity(w, 1)
    assert binomial_check(ones, trials, 0.5).within(3.0)


def test_dhx_segment_roundtrip():
    g, w = sample_dhx_segment(3, 2, 2, SEED.child("dhxseg"))
    assert w.form == "segment"
    assert to_edges(w.build()) == to_edges(g)


# --- conditional sampling is exactly uniform on its support --------------------


def brute_support(m: int, t: int, theta: int) -> set:
    """Enumerate all (X, Sigma) with parity(j) = theta for j in [m] (w = 2m)."""
    w = 2 * m
    support = set()
    perms = list(permutations(range(1, w + 1)))
    for Sigma in product(perms, repeat=t):
        for X in product(product((0, 1), repeat=w), repeat=t):
            if all(
                theta
                == (
                    X[0][Sigma[0][j - 1] - 1]
                    ^ (X[1][Sigma[1][j - 1] - 1] if t > 1 else 0)
                )
                for j in range(1, m + 1)
            ):
                support.add((X, Sigma))
    return support


def test_conditional_sampler_uniform_on_support():
    m, t = 1, 2
    support = sorted(brute_support(m, t, 0))
    assert len(support) == 32  # half of 2^4 * (2!)^2
    index = {key: i for i, key in enumerate(support)}
    counts = [0] * len(support)
    kept = 0
    for i in range(100_000):
        inst = sample_ngc(4 * (3 * t + 1) * m, 3 * t + 1, SEED.child("cond", i))
        if inst.theta != 0:
            continue
        kept += 1
        counts[index[(inst.witness.X, inst.witness.Sigma)]] += 1
    assert kept > 40_000
    assert chi_square_uniform(counts) > 0.001


# --- padding ------------------------------------------------------------------


def test_pad_identity():
    inst = sample_ngc(28, 7, SEED.child("pad0"))
    assert pad_to_k(inst, 7) is inst


def test_pad_to_8_and_9():
    for target, i in ((8, 0), (9, 1)):
        core = sample_ngc(56, 7, SEED.child("pad", target, i))
        padded = pad_to_k(core, target)
        assert padded.k == target
        assert padded.n == 2 * padded.width * target
        assert padded.graph.depth == target
        assert padded.theta == core.theta
        census = validate_instance(padded)
        if padded.theta == 0:
            expected_cycle = target
            assert census.count_cycles(target) == padded.n // (2 * target)
        else:
            expected_cycle = 2 * target
            assert census.count_cycles(2 * target) == padded.n // (4 * target)
        assert census.count_paths(target - 1) == padded.n // (2 * target)
        paths, cycles = component_census(padded.n, padded.all_edges())
        assert set(cycles) == {expected_cycle}


def test_pad_rejects_bad_targets():
    inst = sample_ngc(28, 7, SEED.child("padbad"))
    with pytest.raises(ValueError):
        pad_to_k(inst, 3)
    with pytest.raises(ValueError):
        pad_to_k(inst, 10)  # would need core k=10, not 7
    with pytest.raises(ValueError):
        pad_to_k(inst, 6)  # core would be k=4


def test_pad_rewires_auxiliary_edges():
    core = sample_ngc(28, 7, SEED.child("padaux"))
    padded = pad_to_k(core, 9)
    w = padded.width
    assert padded.auxiliary_edges == auxiliary_edges_for(9, padded.m, w)
    for u, v in padded.auxiliary_edges:
        assert vertex_from_id(u, w).layer == 9
        assert vertex_from_id(v, w).layer == 1


# --- MST augmentation ---------------------------------------------------------


def test_mst_augment_structure():
    inst = sample_ngc(56, 7, SEED.child("mst"))
    W = 5
    weighted = mst_augment(inst, W)
    m, w, k = inst.m, inst.width, inst.k
    assert len(weighted.extra_edges) == 4 * m
    bridges = {
        canon((vertex_id(k, j, 0, w), vertex_id(k, j, 1, w))) for j in range(1, m + 1)
    }
    for e in weighted.all_edges():
        expected = W if canon(e) in bridges else 1
        assert weighted.edge_weight(e) == expected
    census = validate_instance(weighted)
    assert census.degree_violations != ()  # scaffolding adds degree-3 vertices


def test_mst_augment_requires_auxiliary():
    bare = sample_hybrid(2, 2, 1, SEED.child("mstbare"))
    with pytest.raises(ValueError):
        mst_augment(bare, 5)
    with pytest.raises(ValueError):
        mst_augment(sample_ngc(28, 7, SEED), 1)


def test_mst_augment_flags_degenerate_m1():
    inst = sample_ngc(28, 7, SEED.child("mstm1"))
    with pytest.warns(UserWarning):
        mst_augment(inst, 5)


# --- batched ------------------------------------------------------------------


def layer_group_side(vid, w):
    ref = vertex_from_id(vid, w)
    return ref.layer, ref.group, ref.side


def test_batched_shapes_and_pairing():
    inst = sample_ngc_batched(56, 7, 2, 1, SEED.child("bat"))
    assert inst.k == 7 and inst.s == 2 and inst.t == 1
    edges = inst.all_edges()
    assert inst.batches is not None
    assert len(inst.batches) == len(edges) // 2
    assert sorted(e for b in inst.batches for e in b) == sorted(edges)
    w = inst.width
    for e1, e2 in inst.batches:
        (l1, g1, s1) = layer_group_side(e1[0], w)
        (l2, g2, s2) = layer_group_side(e2[0], w)
        assert (l1, g1) == (l2, g2)  # same source layer and group
        assert {s1, s2} == {0, 1}  # one a-side, one b-side edge
    assert_census_law(inst)


def test_batched_rejects_bad_k():
    with pytest.raises(ValueError):
        sample_ngc_batched(56, 7, 2, 2, SEED)


def test_batched_hybrid_endpoints():
    h0 = sample_hybrid_batched(2, 2, 1, 0, SEED.child("bh0"), with_auxiliary=True)
    assert h0.theta == 1
    assert_census_law(h0)
    hm = sample_hybrid_batched(2, 2, 1, 2, SEED.child("bhm"), with_auxiliary=True)
    assert hm.theta == 0
    assert_census_law(hm)


# --- property: hybrid parities and batched conditioning -----------------------


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_property_hybrid_parities(data):
    m = data.draw(st.integers(1, 3))
    t = data.draw(st.integers(1, 3))
    h = data.draw(st.integers(0, m))
    i = data.draw(st.integers(0, 10_000))
    inst = sample_hybrid(m, t, h, SEED.child("prop", m, t, h, i))
    g = inst.graph
    for j in range(1, m + 1):
        assert parity(g, j) == (0 if j <= h else 1)


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_property_batched_theta(data):
    m = data.draw(st.integers(1, 2))
    s = data.draw(st.integers(1, 2))
    t = data.draw(st.integers(1, 2))
    i = data.draw(st.integers(0, 10_000))
    k = (2 * t + 1) * s + 1
    inst = sample_ngc_batched(4 * k * m, k, s, t, SEED.child("pbat", m, s, t, i))
    for j in range(1, m + 1):
        assert parity(inst.graph, j) == inst.theta
