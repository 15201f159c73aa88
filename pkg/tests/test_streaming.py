"""Stream construction, streaming census/decision, estimators, and walks."""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import pytest

from ngc_lab.distributions import (
    census_of_edges,
    mst_augment,
    sample_ngc,
    sample_ngc_batched,
)
from ngc_lab.stats import binomial_check, chi_square_expected, chi_square_uniform
from ngc_lab.streaming import (
    CensusThetaDecision,
    UnionFindCensusAlgorithm,
    WalkSample,
    cc_estimate,
    detect_cycle_length_from_walks,
    exact_census,
    make_stream,
    matching_size_exact,
    mis_size_exact,
    mst_weight_exact,
    random_walk,
    stream_from_edges,
    walk_distribution_exact,
)

from oracles import (
    brute_max_independent_set,
    brute_max_matching,
    component_census,
    scipy_mst_weight,
)

TRIANGLE = [(0, 1), (1, 2), (0, 2)]


def instance_with_theta(n: int, k: int, theta: int, base_seed: int):
    for s in range(base_seed, base_seed + 64):
        inst = sample_ngc(n, k, seed=s)
        if inst.theta == theta:
            return inst
    raise AssertionError(f"no theta={theta} draw in 64 tries")


# --- stream construction ------------------------------------------------------


def test_given_order_preserves_edges_and_weights():
    inst = mst_augment(instance_with_theta(56, 7, 0, 300), W=5)
    stream = make_stream(inst, "given", seed=1)
    assert [e for e, _ in stream.events] == inst.all_edges()
    for edge, weight in stream.events:
        assert weight == inst.edge_weight(edge)
    plain = make_stream(sample_ngc(28, 7, seed=2), "given", seed=1)
    assert all(w is None for _, w in plain.events)


def test_uniform_order_hits_all_six_orders_uniformly():
    trials = 12_000
    counts: Counter[tuple] = Counter()
    for s in range(trials):
        stream = stream_from_edges(3, TRIANGLE, "uniform_random", seed=s)
        counts[tuple(e for e, _ in stream.events)] += 1
    assert len(counts) == 6
    pvalue = chi_square_uniform(list(counts.values()))
    assert pvalue > 0.001, f"order chi-square p={pvalue}"


def test_uniform_order_is_permutation_and_deterministic():
    inst = sample_ngc(28, 7, seed=5)
    a = make_stream(inst, "uniform_random", seed=9)
    b = make_stream(inst, "uniform_random", seed=9)
    assert a == b
    assert sorted(e for e, _ in a.events) == sorted(inst.all_edges())


def test_batched_mode_never_splits_a_batch():
    inst = sample_ngc_batched(n=64, k=4, s=1, t=1, seed=11)
    assert inst.batches is not None
    batch_sets = [frozenset(b) for b in inst.batches]
    seen_orders: set[tuple] = set()
    for s in range(40):
        stream = make_stream(inst, "batched_random", seed=s)
        edges = [e for e, _ in stream.events]
        assert sorted(edges) == sorted(inst.all_edges())
        chunks = [
            frozenset(edges[i : i + 2]) for i in range(0, len(edges), 2)
        ]
        assert sorted(chunks, key=sorted) == sorted(batch_sets, key=sorted)
        seen_orders.add(tuple(edges[:2]))
    # both batch order and intra-batch order vary across seeds
    assert len(seen_orders) > 2


def test_batched_mode_requires_batches():
    inst = sample_ngc(28, 7, seed=3)
    with pytest.raises(ValueError):
        make_stream(inst, "batched_random", seed=0)


def test_stochastic_event_count_exact():
    inst = sample_ngc(28, 7, seed=4)
    m = len(inst.all_edges())
    assert len(make_stream(inst, "stochastic", seed=0, c=2).events) == 2 * m
    assert len(make_stream(inst, "stochastic", seed=0, c=0.3).events) == math.ceil(
        0.3 * m
    )
    assert len(make_stream(inst, "stochastic", seed=0, c=0).events) == 0
    with pytest.raises(ValueError):
        make_stream(inst, "stochastic", seed=0, c=-1)
    with pytest.raises(ValueError):
        make_stream(inst, "stochastic", seed=0)


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        stream_from_edges(3, TRIANGLE, "sorted", seed=0)


# --- census over streams ------------------------------------------------------


def test_exact_census_matches_law_and_oracle():
    inst = instance_with_theta(28, 7, 0, 20)
    census = exact_census(inst.n, make_stream(inst, "uniform_random", seed=7))
    assert census.components == 4  # 2 short cycles + 2 noisy paths
    assert census.count_cycles(7) == 2
    assert census.count_paths(6) == 2
    paths, cycles = component_census(inst.n, inst.all_edges())
    assert sorted(cycles) == [7, 7]
    assert sorted(p - 1 for p in paths) == [6, 6]


def test_exact_census_duplicates_idempotent():
    inst = sample_ngc(28, 7, seed=8)
    once = exact_census(inst.n, inst.all_edges())
    doubled = exact_census(inst.n, inst.all_edges() * 3)
    assert once == doubled
    flipped = exact_census(inst.n, [(v, u) for u, v in inst.all_edges()])
    assert once == flipped


def test_exact_census_empty_edge_set():
    census = exact_census(5, [])
    assert census.components == 5
    assert census.cycles == {} and census.paths == {0: 5}


def test_stochastic_census_recovery_rate():
    # Single triangle: census survives c=4 sampling iff all 3 edges appear,
    # which happens with probability 1 - 3*(2/3)^12 ~ 0.977.
    truth = exact_census(3, TRIANGLE)
    trials, hits = 1000, 0
    for s in range(trials):
        stream = stream_from_edges(3, TRIANGLE, "stochastic", seed=s, c=4)
        if exact_census(3, stream) == truth:
            hits += 1
    assert hits / trials >= 0.95, f"recovered {hits}/{trials}"


# --- streaming algorithm contract ---------------------------------------------


def test_union_find_algorithm_roundtrip_and_resume():
    inst = sample_ngc(56, 7, seed=12)
    stream = make_stream(inst, "uniform_random", seed=13)
    alg = UnionFindCensusAlgorithm(inst.n)

    full = alg.run(alg.init(), stream.events)
    assert alg.deserialize(alg.serialize(full)) == full
    assert alg.finalize(full) == census_of_edges(inst.n, inst.all_edges())

    # split mid-stream, ship the state as bytes, resume on the rest
    cut = len(stream.events) // 2
    head = alg.run(alg.init(), stream.events[:cut])
    blob = alg.serialize(head)
    resumed = alg.run(alg.deserialize(blob), stream.events[cut:])
    assert alg.finalize(resumed) == alg.finalize(full)
    assert len(blob) == 4 + 8 * len(head)


def test_census_theta_decision_separates():
    for n, k in ((56, 7), (104, 13)):
        for theta in (0, 1):
            inst = instance_with_theta(n, k, theta, 40)
            alg = CensusThetaDecision(inst.n, k)
            state = alg.run(alg.init(), make_stream(inst, "uniform_random", seed=1).events)
            assert alg.finalize(state) == theta


# --- connected-components estimator -------------------------------------------


def test_cc_estimate_isolated_vertices_exact():
    stream = stream_from_edges(40, [], "given", seed=0)
    result = cc_estimate(stream, epsilon=0.25, r=10, seed=1)
    assert result.estimate == 40.0
    assert result.clean_seeds == 10 and result.dirty_seeds == 0


def test_cc_estimate_triangles_exact():
    n = 24
    edges = [e for t in range(0, n, 3) for e in [(t, t + 1), (t + 1, t + 2), (t, t + 2)]]
    for s in range(5):
        stream = stream_from_edges(n, edges, "uniform_random", seed=s)
        result = cc_estimate(stream, epsilon=0.25, r=64, seed=s + 100)
        assert result.cap == 8
        assert result.clean_seeds == 64
        assert result.estimate == pytest.approx(n / 3)


def test_cc_estimate_caps_large_components():
    n = 30
    path = [(i, i + 1) for i in range(n - 1)]
    stream = stream_from_edges(n, path, "uniform_random", seed=2)
    result = cc_estimate(stream, epsilon=0.25, r=50, seed=3)
    assert result.dirty_seeds == 50
    assert result.estimate == 0.0


def test_cc_estimate_flags_growth_missed_by_arrival_order():
    # Path edges arrive far-end first: a seed at vertex <= 3 only ever absorbs
    # backwards, so its final set has a boundary edge and must read dirty.
    n = 6
    reversed_path = [(4, 5), (3, 4), (2, 3), (1, 2), (0, 1)]
    stream = stream_from_edges(n, reversed_path, "given", seed=0)
    result = cc_estimate(stream, epsilon=0.1, r=300, seed=7)
    assert result.dirty_seeds > 0 and result.clean_seeds > 0
    # every clean seed discovered the whole 6-vertex path
    assert result.estimate == pytest.approx(result.clean_seeds / 300)


def test_cc_estimate_bounds_and_validation():
    inst = sample_ngc(56, 7, seed=21)
    stream = make_stream(inst, "uniform_random", seed=22)
    for eps in (0.1, 0.5, 0.9):
        result = cc_estimate(stream, epsilon=eps, r=20, seed=23)
        assert 0.0 <= result.estimate <= inst.n
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(ValueError):
            cc_estimate(stream, epsilon=bad, r=4, seed=0)


def test_cc_estimate_state_accounting():
    stream = stream_from_edges(16, [(0, 1)], "given", seed=0)
    result = cc_estimate(stream, epsilon=0.5, r=8, seed=1)
    assert result.cap == 4
    assert result.state_bits == 8 * 4 * 4  # r * cap * bits-per-vertex-id


# --- matching / MIS closed forms ------------------------------------------------


def test_matching_and_mis_frozen_values():
    theta1 = instance_with_theta(56, 7, 1, 60)
    theta0 = instance_with_theta(56, 7, 0, 60)
    assert matching_size_exact(56, theta1.all_edges()) == 26
    assert matching_size_exact(56, theta0.all_edges()) == 24
    assert mis_size_exact(56, theta1.all_edges()) == 30
    assert mis_size_exact(56, theta0.all_edges()) == 28


def test_matching_mis_small_cases_and_rejection():
    assert matching_size_exact(2, [(0, 1)]) == 1
    assert mis_size_exact(1, []) == 1
    assert mis_size_exact(4, []) == 4
    star = [(0, 1), (0, 2), (0, 3)]
    with pytest.raises(ValueError):
        matching_size_exact(4, star)
    with pytest.raises(ValueError):
        mis_size_exact(4, star)


def random_deg2_graph(rng):
    n = rng.randrange(1, 15)
    verts = list(range(n))
    rng.shuffle(verts)
    edges = []
    i = 0
    while i < n:
        size = min(rng.randrange(1, 7), n - i)
        comp, i = verts[i : i + size], i + size
        edges.extend(zip(comp, comp[1:]))
        if size >= 3 and rng.random() < 0.5:
            edges.append((comp[-1], comp[0]))
    return n, edges


def test_matching_mis_agree_with_brute_force():
    import random

    rng = random.Random(424242)
    for _ in range(60):
        n, edges = random_deg2_graph(rng)
        assert matching_size_exact(n, edges) == brute_max_matching(n, edges)
        assert mis_size_exact(n, edges) == brute_max_independent_set(n, edges)


# --- MST ------------------------------------------------------------------------


def weighted_edge_list(inst):
    return [(u, v, inst.edge_weight((u, v))) for u, v in inst.all_edges()]


def test_mst_augmented_instances():
    theta1 = mst_augment(instance_with_theta(56, 7, 1, 80), W=5)
    result1 = mst_weight_exact(weighted_edge_list(theta1), theta1.n)
    assert result1.spanning and result1.weight == 55  # n - 1

    theta0 = mst_augment(instance_with_theta(56, 7, 0, 80), W=5)
    result0 = mst_weight_exact(weighted_edge_list(theta0), theta0.n)
    assert result0.spanning and result0.weight == 59  # n - m + W(m-1)
    assert result0.weight >= 59

    for inst in (theta1, theta0):
        assert (
            mst_weight_exact(weighted_edge_list(inst), inst.n).weight
            == scipy_mst_weight(inst.n, weighted_edge_list(inst))
        )


def test_mst_triangle_and_disconnected():
    assert mst_weight_exact([(0, 1, 1), (1, 2, 1), (0, 2, 1)], 3).weight == 2
    result = mst_weight_exact([(0, 1, 3), (2, 3, 4)], 5)
    assert not result.spanning
    assert result.weight == 7 and result.components == 3
    assert result.weight == scipy_mst_weight(5, [(0, 1, 3), (2, 3, 4)])


def test_mst_random_cross_check():
    import random

    rng = random.Random(77)
    for _ in range(25):
        n = rng.randrange(2, 12)
        possible = [(u, v) for u in range(n) for v in range(u + 1, n)]
        chosen = rng.sample(possible, min(len(possible), rng.randrange(1, 20)))
        weighted = [(u, v, rng.randrange(1, 10)) for u, v in chosen]
        assert mst_weight_exact(weighted, n).weight == scipy_mst_weight(n, weighted)


# --- random walks ----------------------------------------------------------------


def test_random_walk_respects_adjacency():
    inst = sample_ngc(28, 7, seed=30)
    edge_set = {frozenset(e) for e in inst.all_edges()}
    walk = random_walk(inst.all_edges(), start=0, steps=25, seed=31, n=inst.n)
    assert walk.start == 0 and walk.length == 25
    for u, v in zip(walk.vertices, walk.vertices[1:]):
        assert frozenset((u, v)) in edge_set


def test_random_walk_one_step_marginal():
    trials = 4000
    hits = sum(
        random_walk(TRIANGLE, 0, 1, seed=s).vertices[1] == 1 for s in range(trials)
    )
    check = binomial_check(hits, trials, 0.5)
    assert check.within(3), f"one-step marginal off: {check}"


def test_random_walk_isolated_start_rejected():
    with pytest.raises(ValueError):
        random_walk([(1, 2)], start=0, steps=1, seed=0, n=3)


def cycle_edges(length, offset=0):
    return [(offset + i, offset + (i + 1) % length) for i in range(length)]


def test_walk_cover_probability_short_and_long():
    eight = cycle_edges(8)
    trials = 4000
    covered = sum(
        len(set(random_walk(eight, 0, 8, seed=s).vertices)) == 8
        for s in range(trials)
    )
    # 8 unit steps cover an 8-cycle with probability exactly 6/256
    check = binomial_check(covered, trials, 6 / 256)
    assert check.within(4), f"short-walk coverage off: {check}"
    assert check.at_least(2**-8)

    long_covered = sum(
        len(set(random_walk(eight, 0, 4 * 64, seed=s).vertices)) == 8
        for s in range(300)
    )
    assert binomial_check(long_covered, 300, 1.0).observed_p >= 0.5


def test_walk_distribution_exact_examples():
    assert walk_distribution_exact([(0, 1)], 0, 1) == {(0, 1): Fraction(1)}
    table = walk_distribution_exact(TRIANGLE, 0, 2)
    assert len(table) == 4
    assert set(table.values()) == {Fraction(1, 4)}
    assert sum(table.values()) == 1


def test_walk_distribution_matches_empirical():
    table = walk_distribution_exact(TRIANGLE + [(1, 3), (2, 3)], 0, 3)
    assert sum(table.values()) == 1
    walks = [tuple(random_walk(TRIANGLE + [(1, 3), (2, 3)], 0, 3, seed=s).vertices) for s in range(6000)]
    counts = Counter(walks)
    assert set(counts) <= set(table)
    keys = sorted(table)
    pvalue = chi_square_expected(
        [counts.get(k, 0) for k in keys], [float(table[k]) * 6000 for k in keys]
    )
    assert pvalue > 0.001, f"walk law chi-square p={pvalue}"


def test_walk_distribution_guard():
    n = 9
    k9 = [(u, v) for u in range(n) for v in range(u + 1, n)]
    with pytest.raises(ValueError):
        walk_distribution_exact(k9, 0, 7)


def test_walk_distribution_isolated_start():
    with pytest.raises(ValueError):
        walk_distribution_exact([(1, 2)], 0, 1, n=3)


# --- cycle detection from walks ---------------------------------------------------


def test_detect_full_loop_certifies():
    seven = cycle_edges(7)
    loop = WalkSample(tuple(list(range(7)) + [0]))
    report = detect_cycle_length_from_walks([loop], seven, 7, k=7)
    assert report.k_certificates == 1
    assert report.classification == "k_cycles"


def test_detect_path_walks_never_certify():
    path = [(i, i + 1) for i in range(6)]
    walks = [random_walk(path, 3, 12, seed=s, n=7) for s in range(50)]
    report = detect_cycle_length_from_walks(walks, path, 7, k=7)
    assert report.classification == "unknown"
    assert report.k_certificates == report.two_k_certificates == 0


def test_detect_classifies_instances_by_theta():
    for theta, expected in ((0, "k_cycles"), (1, "2k_cycles")):
        inst = instance_with_theta(28, 7, theta, 90)
        edges = inst.all_edges()
        walks = [
            random_walk(edges, start, 4 * 49, seed=s, n=inst.n)
            for s, start in enumerate(range(0, inst.n, 2))
        ]
        report = detect_cycle_length_from_walks(walks, edges, inst.n, k=7)
        assert report.classification == expected, (theta, report)


def test_detect_other_lengths_counted_separately():
    five = cycle_edges(5)
    loop = WalkSample(tuple(list(range(5)) + [0, 1]))
    report = detect_cycle_length_from_walks([loop], five, 5, k=7)
    assert report.other_certificates == 1
    assert report.classification == "unknown"
