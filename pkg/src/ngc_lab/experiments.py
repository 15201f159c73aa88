"""Experiment suites: one function per empirical check, reporting CSV rows.

Each suite draws everything from one master seed, computes its statistics, and
returns ``Row`` records in the fixed column order used by the command-line
front end (suite, params, metric, value, ci_low, ci_high, trials, seed).
Pass/fail policy lives here: the tolerances (3-sigma binomial bands,
chi-square p > 1e-3 floors, success-rate floors) are applied once, so the CLI
and the test suite agree on what counts as a statistical failure.

Two suites carry a vectorized fast path whose equivalence to the object-level
route is not obvious from the code alone:

* ``partition_stats_suite`` measures the conditional law of the first witness
  image over the capped clean set by simulating the index-clean indicator
  directly (each index is clean with probability exactly 1/64, independently
  across indices, and the image is an independent uniform group id).  The
  object-level route verifies those three facts at small width.

* ``walk_cover_suite`` simulates walks started on a cycle as +/-1 increment
  sequences: on an L-cycle every vertex has exactly two neighbours, so the
  walk's position is a lazy-free simple random walk on Z/L, and it covers the
  cycle iff the running range of the increments reaches L-1.  Walks started on
  path components never produce a cycle certificate (their endpoints have
  degree one), so only the cycle-started half of the budget matters.  The
  object-level route (``method="objects"``) runs the same statistic with real
  walks and real certificates; the test suite cross-checks the two routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .bias import SupportSet, kkl_rhs, mean_bias_sq
from .distributions import (
    Census,
    NgcInstance,
    Witness,
    canon,
    census_of_edges,
    mst_augment,
    pad_to_k,
    sample_dhx,
    sample_dhx_segment,
    sample_ngc,
    sample_ngc_batched,
    validate_instance,
)
from .partitions import (
    active_blocks,
    assign_batches,
    assign_by_functions,
    assign_uniform,
    clean_indices_stochastic,
    index_ownership_pattern,
    random_partition_functions,
    stochastic_assign,
)
from .protocols import (
    BobOnlyCycleDetector,
    OrderProbe,
    embed_dhx,
    embed_dhx_batched,
    empirical_table,
    run_protocol,
    streaming_as_l_protocol,
    streaming_as_protocol,
    tvd,
)
from .seeds import Seed, as_seed
from .stats import binomial_check, chi_square_uniform, clopper_pearson
from .streaming import (
    CensusThetaDecision,
    UnionFindCensusAlgorithm,
    build_adjacency,
    cc_estimate,
    detect_cycle_length_from_walks,
    exact_census,
    make_stream,
    matching_size_exact,
    mis_size_exact,
    mst_weight_exact,
    random_walk,
    stream_from_edges,
)

P_FLOOR = 1e-3  # chi-square tests fail below this p-value
CLEAN_P = 1.0 / 64.0  # an index's six edges match the split pattern

CSV_COLUMNS = ("suite", "params", "metric", "value", "ci_low", "ci_high", "trials", "seed")


@dataclass(frozen=True)
class Row:
    suite: str
    params: str
    metric: str
    value: float | int | str
    ci_low: float | None
    ci_high: float | None
    trials: int
    seed: int

    def as_record(self) -> tuple:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return repr(x)
            return str(x)

        return (
            self.suite,
            self.params,
            self.metric,
            fmt(self.value),
            fmt(self.ci_low),
            fmt(self.ci_high),
            str(self.trials),
            str(self.seed),
        )


@dataclass(frozen=True)
class SuiteResult:
    rows: tuple[Row, ...]
    passed: bool
    failures: tuple[str, ...] = ()


def _params(**kv) -> str:
    return ";".join(f"{k}={v}" for k, v in kv.items() if v is not None)


def _finish(rows: list[Row], failures: list[str]) -> SuiteResult:
    return SuiteResult(tuple(rows), not failures, tuple(failures))


# --- structural census ------------------------------------------------------------


def expected_census(instance: NgcInstance) -> Census | None:
    """The exact component law of a theta-conditioned instance, or None.

    Applies to plain/padded instances (core + closers, unit weights): theta=0
    gives n/2k cycles of k edges, theta=1 gives n/4k cycles of 2k edges, and
    the m unconstrained groups always contribute n/2k paths of k-1 edges.
    """
    if instance.theta is None or instance.extra_edges or instance.weights:
        return None
    k, m = instance.k, instance.m
    if instance.theta == 0:
        cycles, components = {k: 2 * m}, 4 * m
    else:
        cycles, components = {2 * k: m}, 3 * m
    return Census(cycles=cycles, paths={k - 1: 2 * m}, components=components)


def _census_matches(census: Census, law: Census) -> bool:
    return (
        census.cycles == law.cycles
        and census.paths == law.paths
        and census.components == law.components
        and not census.degree_violations
    )


def census_suite(
    n: int,
    k: int,
    trials: int,
    seed: Seed | int | None = None,
    pad: int | None = None,
) -> SuiteResult:
    """Draw instances and compare their exact census to the component law.

    With ``pad`` set, each instance is padded up to that depth first (the law
    is restated at the padded k).  The check is exact: any deviation in cycle
    or path multiplicities fails the suite.
    """
    root = as_seed(seed)
    ok = 0
    for i in range(trials):
        inst = sample_ngc(n, k, root.child("census", i))
        if pad is not None:
            inst = pad_to_k(inst, pad)
        law = expected_census(inst)
        assert law is not None
        ok += _census_matches(validate_instance(inst), law)
    suite = "census"
    params = _params(n=n, k=k, pad=pad)
    rows = [
        Row(suite, params, "census_exact", ok / trials, None, None, trials, root.master)
    ]
    failures = [] if ok == trials else [f"census law violated in {trials - ok} draws"]
    return _finish(rows, failures)


# --- partition statistics ---------------------------------------------------------


def capped_activity_probability(w: int) -> Fraction:
    """Pr[block active] under the desk-scale cap, exactly.

    With w_c = max(1, floor(w/100)) and each index clean independently with
    probability 1/64, activity means the uniform image sigma(1) lands on one
    of the first w_c clean indices: Pr = E[min(|clean|, w_c)] / w.
    """
    w_c = max(1, w // 100)
    p = Fraction(1, 64)
    # E[min(C, w_c)] = sum_{r=1..w_c} Pr[C >= r]; C ~ Binomial(w, 1/64)
    tail = Fraction(0)
    prob_lt = Fraction(0)  # Pr[C < r], accumulated
    expect = Fraction(0)
    for r in range(1, w_c + 1):
        prob_lt += math.comb(w, r - 1) * p ** (r - 1) * (1 - p) ** (w - r + 1)
        tail = 1 - prob_lt
        expect += tail
    return expect / w


def partition_stats_suite(
    w: int,
    trials: int,
    seed: Seed | int | None = None,
    tail_blocks: int | None = None,
    tail_trials: int = 2000,
    sigma1_trials: int | None = None,
) -> SuiteResult:
    """Ownership-pattern and activity statistics for the two-player split.

    Object-level rows (fresh instance + partition functions per trial, all at
    width w, one block): the 64-cell ownership-pattern chi-square, Pr[index
    clean], and Pr[block active] both capped and uncapped.  The capped
    probability is compared against its exact cap-aware value, the uncapped
    one against 1/64.

    When floor(w/100) >= 2 a vectorized row checks that, conditioned on the
    block being active (and on the clean set being large enough for the cap to
    bind), the image sigma(1) is uniform over the w_c capped slots; its trial
    budget defaults to ``trials`` and can be raised separately with
    ``sigma1_trials`` (the conditioning leaves roughly one draw in a hundred).

    With ``tail_blocks`` set, adds the active-count tail row: out of that many
    independent blocks at this width, the number of active ones is at least
    ln(w) with frequency at least 1 - 1/w^2.
    """
    if w < 2 or w % 2:
        raise ValueError("need even w >= 2")
    root = as_seed(seed)
    suite = "partition-stats"
    params = _params(w=w)
    rows: list[Row] = []
    failures: list[str] = []

    n = 4 * 4 * (w // 2)  # one-block instances: k = 4, t = 1, width w
    pattern_counts = [0] * 64
    clean_hits = 0
    active_capped = 0
    active_uncapped = 0
    for i in range(trials):
        child = root.child("object", i)
        inst = sample_ngc(n, 4, child.child("inst"))
        F = random_partition_functions(w, 1, child.child("F"))
        assignment = assign_by_functions(inst, F, child.child("split"))
        report = active_blocks(inst, assignment)
        entry = report.entries[0]
        clean_hits += 1 in entry.clean_uncapped
        active_capped += bool(entry.active)
        active_uncapped += bool(entry.active_uncapped)
        # six-owner pattern of index 1, encoded little-endian as a cell id
        pat = index_ownership_pattern(inst, assignment, 1, 1)
        pattern_counts[sum(b << i for i, b in enumerate(pat))] += 1

    obs_p = chi_square_uniform(pattern_counts)
    rows.append(Row(suite, params, "ownership_pvalue", obs_p, None, None, trials, root.master))
    if obs_p <= P_FLOOR:
        failures.append(f"ownership pattern chi-square p={obs_p:.2e}")

    lo, hi = clopper_pearson(clean_hits, trials)
    rows.append(Row(suite, params, "clean_prob", clean_hits / trials, lo, hi, trials, root.master))
    if not binomial_check(clean_hits, trials, CLEAN_P).within(3):
        failures.append("Pr[index clean] outside 3 sigma of 1/64")

    cap_p = float(capped_activity_probability(w))
    lo, hi = clopper_pearson(active_capped, trials)
    rows.append(
        Row(suite, params, "active_prob", active_capped / trials, lo, hi, trials, root.master)
    )
    if not binomial_check(active_capped, trials, cap_p).within(3):
        failures.append("Pr[block active] outside 3 sigma of its cap-aware value")

    lo, hi = clopper_pearson(active_uncapped, trials)
    rows.append(
        Row(
            suite,
            params,
            "active_prob_uncapped",
            active_uncapped / trials,
            lo,
            hi,
            trials,
            root.master,
        )
    )
    if not binomial_check(active_uncapped, trials, CLEAN_P).within(3):
        failures.append("uncapped Pr[block active] outside 3 sigma of 1/64")

    w_c = max(1, w // 100)
    if w_c >= 2:
        budget = sigma1_trials if sigma1_trials is not None else trials
        counts = _sigma1_rank_counts(w, w_c, budget, root.child("sigma1"))
        conditioned = int(sum(counts))
        # the chi-square needs a sane expected count per capped slot
        p = chi_square_uniform(counts) if conditioned >= 10 * w_c else float("nan")
        rows.append(
            Row(suite, params, "sigma1_uniform_pvalue", p, None, None, conditioned, root.master)
        )
        if p <= P_FLOOR:
            failures.append(f"conditional sigma(1) chi-square p={p:.2e}")

    if tail_blocks is not None:
        if tail_blocks < 1 or tail_trials < 1:
            raise ValueError("the tail row needs tail_blocks >= 1 and tail_trials >= 1")
        hits = _active_count_tail(w, tail_blocks, tail_trials, root.child("tail"))
        floor = 1 - 1 / w**2
        lo, hi = clopper_pearson(hits, tail_trials)
        rows.append(
            Row(
                suite,
                _params(w=w, blocks=tail_blocks),
                "tail_prob",
                hits / tail_trials,
                lo,
                hi,
                tail_trials,
                root.master,
            )
        )
        if not binomial_check(hits, tail_trials, floor).at_least(floor):
            failures.append("active-count tail frequency below 1 - 1/w^2")

    return _finish(rows, failures)


def _sigma1_rank_counts(w: int, w_c: int, trials: int, seed: Seed) -> list[int]:
    """Counts of sigma(1)'s rank within the capped clean set, given active.

    Simulates the index-clean indicators directly (iid, probability 1/64 per
    index) and an independent uniform image; restricts to draws whose clean
    set has at least w_c members so every capped slot exists.
    """
    gen = seed.generator()
    counts = np.zeros(w_c, dtype=np.int64)
    chunk = max(1, min(trials, 20_000_000 // max(w, 1)))
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        mask = gen.integers(0, 64, size=(size, w), dtype=np.uint8) == 0
        sigma1 = gen.integers(0, w, size=size)
        csum = np.cumsum(mask, axis=1)
        total = csum[:, -1]
        at = np.take_along_axis(csum, sigma1[:, None], axis=1).ravel()
        is_clean = np.take_along_axis(mask, sigma1[:, None], axis=1).ravel()
        rank = at - 1  # 0-based rank among clean, valid where is_clean
        use = is_clean & (rank < w_c) & (total >= w_c)
        counts += np.bincount(rank[use], minlength=w_c)
        done += size
    return counts.tolist()


def _active_count_tail(w: int, blocks: int, trials: int, seed: Seed) -> int:
    """How often the active-block count reaches ln(w), out of `trials` draws."""
    gen = seed.generator()
    p = float(capped_activity_probability(w))
    t_a = gen.binomial(blocks, p, size=trials)
    return int(np.count_nonzero(t_a >= math.log(w)))


# --- reduction checks -------------------------------------------------------------


def _witness_group_parity(witness: Witness, group: int) -> int:
    """XOR of the cross bits group `group` picks up across all gadgets."""
    acc = 0
    if witness.form == "block":
        for x, sig in zip(witness.X, witness.Sigma):
            acc ^= x[sig[group - 1] - 1]
    else:
        for xs, sigs in zip(witness.X, witness.Sigma):
            for x, sig in zip(xs, sigs):
                acc ^= x[sig[group - 1] - 1]
    return acc


def reduce_check_suite(
    m: int,
    t: int,
    trials: int,
    seed: Seed | int | None = None,
    tvd_samples: int = 0,
    s: int | None = None,
) -> SuiteResult:
    """Re-run the narrow-to-wide embedding and verify its forwarding claim.

    Per trial: draw a uniform width-(m+1) witness, embed it at a random target
    group, and check that the embedded group's crossing parity equals the
    narrow witness's group-1 parity.  The check must hold in every run.  With
    ``s`` set the segment-form embedding over an s x t grid is used instead.

    With ``tvd_samples`` > 0 (block form, m=1 only), also estimates the total
    variation distance between the embedding's output witness and its exact
    law, the even hybrid mixture, which at m=1 is uniform over all width-2
    witnesses.
    """
    root = as_seed(seed)
    rng = root.child("claim").rng()
    suite = "reduce-check"
    params = _params(m=m, t=t, s=s)
    rows: list[Row] = []
    failures: list[str] = []

    ok = 0
    for _ in range(trials):
        h_star = rng.randrange(1, m + 1)
        if s is None:
            _, narrow = sample_dhx(m + 1, t, rng.getrandbits(63))
            _, record = embed_dhx(narrow, h_star, m, rng.getrandbits(63), build_graph=False)
        else:
            _, narrow = sample_dhx_segment(m + 1, s, t, rng.getrandbits(63))
            _, record = embed_dhx_batched(
                narrow, h_star, m, s, t, rng.getrandbits(63), build_graph=False
            )
        planted = _witness_group_parity(record.witness, h_star)
        answer = _witness_group_parity(narrow, 1)
        ok += planted == answer
    rows.append(
        Row(suite, params, "claim_holds", f"{ok}/{trials}", None, None, trials, root.master)
    )
    if ok != trials:
        failures.append(f"forwarding claim failed in {trials - ok} runs")

    if tvd_samples > 0:
        if m != 1 or s is not None:
            raise ValueError("the marginal TVD row needs block form with m=1")
        dist = _embedding_marginal_tvd(t, tvd_samples, root.child("tvd"))
        rows.append(
            Row(suite, params, "marginal_tvd", dist, None, None, tvd_samples, root.master)
        )
        if dist >= 0.02:
            failures.append(f"embedding output TVD {dist:.4f} >= 0.02")

    return _finish(rows, failures)


def _embedding_marginal_tvd(t: int, samples: int, seed: Seed) -> float:
    """TVD between embedded-witness draws (m=1) and the uniform width-2 law."""
    if t > 4:
        raise ValueError("exact support enumeration is sized for t <= 4")
    rng = seed.rng()
    draws = []
    for _ in range(samples):
        _, narrow = sample_dhx(2, t, rng.getrandbits(63))
        _, record = embed_dhx(narrow, 1, 1, rng.getrandbits(63), build_graph=False)
        draws.append(record.witness)
    support = _all_width2_block_witnesses(t)
    exact = {cell: Fraction(1, len(support)) for cell in support}
    return float(tvd(empirical_table(draws, support=support), exact))


def _all_width2_block_witnesses(t: int) -> list[Witness]:
    perms = ((1, 2), (2, 1))
    bits = ((0, 0), (0, 1), (1, 0), (1, 1))
    cells: list[Witness] = []

    def rec(i: int, xs: tuple, sigmas: tuple) -> None:
        if i == t:
            cells.append(Witness("block", xs, sigmas))
            return
        for sig in perms:
            for x in bits:
                rec(i + 1, xs + (x,), sigmas + (sig,))

    rec(0, (), ())
    return cells


# --- streaming runs ---------------------------------------------------------------


def stream_run_suite(
    n: int,
    k: int,
    trials: int,
    seed: Seed | int | None = None,
    mode: str = "uniform_random",
) -> SuiteResult:
    """Exact census recovery and the count-based theta decision over streams."""
    root = as_seed(seed)
    suite = "stream-run"
    params = _params(n=n, k=k, mode=mode)
    census_ok = 0
    decision_ok = 0
    for i in range(trials):
        child = root.child("run", i)
        inst = sample_ngc(n, k, child.child("inst"))
        stream = make_stream(inst, mode, seed=child.child("order"))
        census = exact_census(n, stream)
        law = expected_census(inst)
        assert law is not None
        census_ok += _census_matches(census, law)
        decision = CensusThetaDecision(n, k)
        state = decision.run(decision.init(), stream.events)
        decision_ok += decision.finalize(state) == inst.theta
    rows = [
        Row(suite, params, "census_exact", census_ok / trials, None, None, trials, root.master),
        Row(
            suite, params, "decision_correct", decision_ok / trials, None, None, trials, root.master
        ),
    ]
    failures = []
    if census_ok != trials:
        failures.append(f"streamed census wrong in {trials - census_ok} runs")
    if decision_ok != trials:
        failures.append(f"count decision wrong in {trials - decision_ok} runs")
    return _finish(rows, failures)


def adapter_suite(
    n: int,
    k: int,
    trials: int,
    order_trials: int,
    seed: Seed | int | None = None,
    order_edges: int = 5,
) -> SuiteResult:
    """Streaming-to-protocol adapter checks.

    Row 1: the two-player adapter's output census equals the whole-graph
    census on every instance (exact).  Row 2: under a uniform split with both
    players shuffling their halves, the induced arrival order of a small edge
    set is uniform over all |E|! interleavings (chi-square).
    """
    root = as_seed(seed)
    suite = "adapter"
    params = _params(n=n, k=k, edges=order_edges)
    failures: list[str] = []

    match = 0
    for i in range(trials):
        child = root.child("match", i)
        inst = sample_ngc(n, k, child.child("inst"))
        assignment = assign_uniform(inst.all_edges(), 2, child.child("assign"))
        adapter = streaming_as_protocol(UnionFindCensusAlgorithm(n))
        streamed = _run_adapter(adapter, inst.all_edges(), assignment, child.child("run"))
        match += streamed == census_of_edges(n, inst.all_edges())
    rows = [
        Row(suite, params, "adapter_match", match / trials, None, None, trials, root.master)
    ]
    if match != trials:
        failures.append(f"adapter census differed in {trials - match} runs")

    edges = [(2 * i, 2 * i + 1) for i in range(order_edges)]
    adapter = streaming_as_protocol(OrderProbe())
    perm_ids: dict[tuple, int] = {}
    counts = [0] * math.factorial(order_edges)
    probe_rng = root.child("order").rng()
    for _ in range(order_trials):
        assignment = assign_uniform(edges, 2, probe_rng.getrandbits(63))
        order = _run_adapter(adapter, edges, assignment, probe_rng.getrandbits(63))
        cell = perm_ids.setdefault(tuple(order), len(perm_ids))
        counts[cell] += 1
    p = chi_square_uniform(counts)
    rows.append(
        Row(suite, params, "order_uniform_pvalue", p, None, None, order_trials, root.master)
    )
    if p <= P_FLOOR:
        failures.append(f"induced-order chi-square p={p:.2e}")
    return _finish(rows, failures)


def _run_adapter(adapter, edges, assignment, seed):
    """Drive a streaming adapter across a two-player cut, returning Bob's value."""
    shared = as_seed(seed)
    edges_a = [e for e in edges if assignment.owner_of(e) == 0]
    edges_b = [e for e in edges if assignment.owner_of(e) == 1]
    message = adapter.alice(edges_a, shared)
    return adapter.bob(message, edges_b, shared)


def l_player_suite(
    n: int,
    k: int,
    s: int,
    t: int,
    l: int,
    trials: int,
    seed: Seed | int | None = None,
) -> SuiteResult:
    """Relay the census state through l players holding batched edge shares."""
    root = as_seed(seed)
    suite = "l-player"
    params = _params(n=n, k=k, s=s, t=t, l=l)
    ok = 0
    hop_ok = 0
    for i in range(trials):
        child = root.child("relay", i)
        inst = sample_ngc_batched(n, k, s, t, child.child("inst"))
        assignment = assign_batches(inst, l, child.child("assign"))
        protocol = streaming_as_l_protocol(CensusThetaDecision(n, k), l)
        result = protocol.run(inst, assignment, seed=child.child("run"))
        ok += result.output == inst.theta
        hop_ok += len(result.hop_bits) == l - 1
    rows = [
        Row(suite, params, "relay_correct", ok / trials, None, None, trials, root.master),
        Row(suite, params, "relay_hops", hop_ok / trials, None, None, trials, root.master),
    ]
    failures = []
    if ok != trials:
        failures.append(f"relay decision wrong in {trials - ok} runs")
    if hop_ok != trials:
        failures.append("relay hop count != l-1")
    return _finish(rows, failures)


def estimator_suite(
    vertices: int,
    epsilon: float,
    r: int,
    trials: int,
    seed: Seed | int | None = None,
) -> SuiteResult:
    """Bounded-memory component-count estimation on a disjoint triangle union."""
    if vertices % 3:
        raise ValueError("vertices must be a multiple of 3")
    root = as_seed(seed)
    suite = "estimator"
    params = _params(n=vertices, epsilon=epsilon, r=r)
    edges = []
    for i in range(0, vertices, 3):
        edges += [(i, i + 1), (i + 1, i + 2), (i, i + 2)]
    truth = vertices // 3
    ok = 0
    for i in range(trials):
        child = root.child("est", i)
        stream = stream_from_edges(vertices, edges, "uniform_random", seed=child.child("order"))
        result = cc_estimate(stream, epsilon, r, seed=child.child("seeds"))
        ok += abs(result.estimate - truth) <= epsilon * vertices
    lo, hi = clopper_pearson(ok, trials)
    rows = [Row(suite, params, "estimate_within", ok / trials, lo, hi, trials, root.master)]
    failures = []
    if ok / trials < 2 / 3:
        failures.append(f"estimator success {ok}/{trials} below 2/3")
    return _finish(rows, failures)


def estimator_budget_curve(
    n: int,
    k: int,
    epsilon: float,
    r_values: Iterable[int],
    trials: int,
    seed: Seed | int | None = None,
) -> SuiteResult:
    """Theta-distinguishing advantage of the bounded estimator versus budget.

    For each budget r, classify theta by thresholding the component estimate
    at 7n/8k and report the empirical advantage 2*Pr[correct]-1, alongside the
    exact-census baseline (advantage 1 by construction).  Reported as a curve;
    the suite never fails on the estimator's accuracy.
    """
    root = as_seed(seed)
    suite = "estimator-curve"
    rows: list[Row] = []
    for r in r_values:
        correct = 0
        for i in range(trials):
            child = root.child("curve", r, i)
            inst = sample_ngc(n, k, child.child("inst"))
            stream = make_stream(inst, "uniform_random", seed=child.child("order"))
            est = cc_estimate(stream, epsilon, r, seed=child.child("seeds")).estimate
            guess = 0 if 8 * k * est >= 7 * n else 1
            correct += guess == inst.theta
        lo, hi = clopper_pearson(correct, trials)
        rows.append(
            Row(
                suite,
                _params(n=n, k=k, epsilon=epsilon, r=r),
                "advantage",
                2 * correct / trials - 1,
                2 * lo - 1,
                2 * hi - 1,
                trials,
                root.master,
            )
        )
    rows.append(
        Row(suite, _params(n=n, k=k), "exact_census_advantage", 1.0, None, None, trials, root.master)
    )
    return _finish(rows, [])


def bob_only_suite(
    n: int, k: int, trials: int, seed: Seed | int | None = None
) -> SuiteResult:
    """Zero-communication detection: Bob alone looks for a surviving long cycle."""
    root = as_seed(seed)
    suite = "bob-only"
    params = _params(n=n, k=k)
    ok = 0
    for i in range(trials):
        child = root.child("bob", i)
        inst = sample_ngc(n, k, child.child("inst"))
        assignment = assign_uniform(inst.all_edges(), 2, child.child("assign"))
        result = run_protocol(BobOnlyCycleDetector(n, k), inst, assignment, seed=child.child("run"))
        ok += result.output == inst.theta
    lo, hi = clopper_pearson(ok, trials)
    rows = [Row(suite, params, "success_rate", ok / trials, lo, hi, trials, root.master)]
    failures = []
    if ok / trials < 0.6:
        failures.append(f"one-sided detector success {ok}/{trials} below 0.6")
    return _finish(rows, failures)


# --- stochastic model -------------------------------------------------------------


def stochastic_stats_suite(
    c: float,
    trials: int,
    seed: Seed | int | None = None,
    w: int = 16,
) -> SuiteResult:
    """Sampling-model absence and cleanness frequencies against their floors.

    Fixed instance of width w (k=4); per trial both players draw their
    ceil(c|E|/2) edge samples afresh.  Checks, one-sided at 3 sigma:
    Pr[fixed edge unseen by the second player] >= e^{-c}, Pr[seen by the first
    player only] >= e^{-3c/2}, and Pr[a fixed index is clean] >= e^{-9c}.
    """
    if c <= 0:
        raise ValueError("the bounds need c > 0")
    root = as_seed(seed)
    suite = "stochastic-stats"
    params = _params(c=c, w=w)
    inst = sample_ngc(4 * 4 * (w // 2), 4, root.child("inst"))
    edges = inst.all_edges()
    probe = canon(edges[0])
    absent = 0
    a_only = 0
    clean = 0
    for i in range(trials):
        child = root.child("draw", i)
        assignment = stochastic_assign(edges, c, child)
        seen_a = {canon(e) for e in assignment.samples[0]}
        seen_b = {canon(e) for e in assignment.samples[1]}
        absent += probe not in seen_b
        a_only += probe in seen_a and probe not in seen_b
        report = clean_indices_stochastic(inst, assignment)
        clean += 1 in report.entries[0].clean_uncapped
    rows: list[Row] = []
    failures: list[str] = []
    for metric, count, floor in (
        ("absent_prob", absent, math.exp(-c)),
        ("alice_only_prob", a_only, math.exp(-1.5 * c)),
        ("clean_prob", clean, math.exp(-9 * c)),
    ):
        lo, hi = clopper_pearson(count, trials)
        rows.append(Row(suite, params, metric, count / trials, lo, hi, trials, root.master))
        if not binomial_check(count, trials, floor).at_least(floor):
            failures.append(f"{metric} {count / trials:.3e} below floor {floor:.3e}")
    return _finish(rows, failures)


# --- walk-based detection ---------------------------------------------------------


def walk_cover_suite(
    k: int,
    walks: int,
    trials: int,
    seed: Seed | int | None = None,
    m: int = 8,
    method: str = "fast",
) -> SuiteResult:
    """Classify theta from length-2k random walks and measure cycle coverage.

    Per instance, `walks` walks of 2k steps start at independent uniform
    vertices; a walk certifies a cycle length when it covers its component.
    The instance is classified by the certified length (k-cycles mean theta 0,
    2k-cycles theta 1); rows report the classification rate and the pooled
    coverage frequency of cycle-started walks on theta=1 instances, checked
    against the 4^{-k} floor.

    ``method="fast"`` simulates cycle-started walks as +/-1 increment
    sequences (exactly the walk law on a cycle; see the module docstring);
    ``method="objects"`` runs real walks on the edge lists — ruinously slower,
    meant for cross-checking at small budgets.
    """
    if method not in ("fast", "objects"):
        raise ValueError(f"unknown method {method!r}")
    root = as_seed(seed)
    suite = "walk-cover"
    params = _params(k=k, walks=walks, m=m, method=method)
    n = 4 * k * m
    correct = 0
    cyc_walks = 0
    cyc_hits = 0
    for i in range(trials):
        child = root.child("walks", i)
        inst = sample_ngc(n, k, child.child("inst"))
        length = k if inst.theta == 0 else 2 * k
        if method == "fast":
            on_cycle, hits = _fast_walk_coverage(walks, length, 2 * k, child.child("sim"))
            guessed = length if hits else None
        else:
            on_cycle, hits, guessed = _object_walk_coverage(inst, walks, child.child("sim"))
        if inst.theta == 1:
            cyc_walks += on_cycle
            cyc_hits += hits
        correct += guessed == length
    rows = [
        Row(suite, params, "classify_correct", correct / trials, None, None, trials, root.master)
    ]
    failures = []
    if correct / trials < 2 / 3:
        failures.append(f"walk classification {correct}/{trials} below 2/3")
    if cyc_walks:
        floor = 4.0 ** (-k)
        lo, hi = clopper_pearson(cyc_hits, cyc_walks)
        rows.append(
            Row(suite, params, "coverage_rate", cyc_hits / cyc_walks, lo, hi, cyc_walks, root.master)
        )
        if not binomial_check(cyc_hits, cyc_walks, floor).at_least(floor):
            failures.append(f"cycle coverage {cyc_hits / cyc_walks:.2e} below 4^-k floor")
    return _finish(rows, failures)


def _fast_walk_coverage(walks: int, length: int, steps: int, seed: Seed) -> tuple[int, int]:
    """(cycle-started walk count, covering walk count) via increment simulation."""
    gen = seed.generator()
    on_cycle = int(gen.binomial(walks, 0.5))  # exactly half the vertices sit on cycles
    hits = 0
    chunk = 4_000_000
    remaining = on_cycle
    while remaining > 0:
        size = min(chunk, remaining)
        inc = gen.integers(0, 2, size=(size, steps), dtype=np.int8) * 2 - 1
        pos = np.cumsum(inc, axis=1, dtype=np.int8)
        hi = np.maximum(pos.max(axis=1), 0)
        lo = np.minimum(pos.min(axis=1), 0)
        hits += int(np.count_nonzero(hi - lo + 1 >= length))
        remaining -= size
    return on_cycle, hits


def _object_walk_coverage(
    inst: NgcInstance, walks: int, seed: Seed
) -> tuple[int, int, int | None]:
    """(cycle-started walks, covering walks, certified length) with real walks."""
    edges = inst.all_edges()
    adjacency = build_adjacency(inst.n, edges)
    cycle_vertices = _cycle_vertex_set(inst.n, edges)
    rng = seed.rng()
    samples = []
    on_cycle = 0
    for _ in range(walks):
        start = rng.randrange(inst.n)
        on_cycle += start in cycle_vertices
        samples.append(
            random_walk(edges, start, 2 * inst.k, seed=rng.getrandbits(63), adjacency=adjacency)
        )
    detection = detect_cycle_length_from_walks(samples, edges, inst.n, inst.k)
    hits = detection.k_certificates + detection.two_k_certificates
    guessed = {"k_cycles": inst.k, "2k_cycles": 2 * inst.k}.get(detection.classification)
    return on_cycle, hits, guessed


def _cycle_vertex_set(n: int, edges) -> set:
    """Vertices lying on cycle components (every member has degree two)."""
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    adjacency = build_adjacency(n, edges)
    seen = [False] * n
    out: set = set()
    for v0 in range(n):
        if seen[v0] or not adjacency[v0]:
            continue
        comp = [v0]
        seen[v0] = True
        queue = [v0]
        while queue:
            u = queue.pop()
            for x in adjacency[u]:
                if not seen[x]:
                    seen[x] = True
                    comp.append(x)
                    queue.append(x)
        if all(degree[u] == 2 for u in comp):
            out.update(comp)
    return out


# --- bias scan --------------------------------------------------------------------


def bias_scan_suite(
    m: int,
    log_a: int,
    k: int,
    trials: int,
    seed: Seed | int | None = None,
) -> SuiteResult:
    """Mean squared subset bias of a random support versus the spectral bound.

    Draws a uniform size-2^log_a subset of the m-cube, estimates the mean
    squared bias over size-k coordinate subsets, and reports it next to
    ((m - log|A|)/m)^k.  Fails only if the ratio is non-finite.
    """
    if not 0 <= log_a <= m:
        raise ValueError("need 0 <= log_a <= m")
    root = as_seed(seed)
    suite = "bias-scan"
    params = _params(m=m, logA=log_a, k=k)
    rng = root.child("support").rng()
    members = frozenset(rng.sample(range(2**m), 2**log_a))
    support = SupportSet(m, members)
    if math.comb(m, k) <= 2000:
        value = float(mean_bias_sq(support, k, mode="exact"))
        used = math.comb(m, k)
    else:
        value = float(
            mean_bias_sq(support, k, mode="sampled", trials=trials, seed=root.child("subsets"))
        )
        used = trials
    rhs = kkl_rhs(m, len(support), k)
    ratio = value / rhs if rhs > 0 else float("inf")
    rows = [
        Row(suite, params, "mean_bias_sq", value, None, None, used, root.master),
        Row(suite, params, "spectral_rhs", rhs, None, None, used, root.master),
        Row(suite, params, "ratio", ratio, None, None, used, root.master),
    ]
    failures = []
    if not math.isfinite(ratio):
        failures.append("bias ratio is not finite (rhs vanished)")
    return _finish(rows, failures)


# --- combinatorial sizes ----------------------------------------------------------


def combinatorial_suite(
    n: int,
    k: int,
    trials: int,
    seed: Seed | int | None = None,
) -> SuiteResult:
    """Maximum matching and independent set sizes against the component law.

    On a disjoint union of cycles and paths both quantities decompose per
    component (floor(v/2) matching everywhere; floor(v/2) on cycles and
    ceil(v/2) on paths for the independent set), so the theta-conditioned law
    pins both numbers exactly.
    """
    root = as_seed(seed)
    suite = "combinatorial"
    params = _params(n=n, k=k)
    m = n // (4 * k)
    # component law: theta=0 has 2m k-cycles, theta=1 has m 2k-cycles; always
    # 2m paths of k vertices (k-1 edges)
    law = {
        0: (2 * m * (k // 2) + 2 * m * (k // 2), 2 * m * (k // 2) + 2 * m * ((k + 1) // 2)),
        1: (m * k + 2 * m * (k // 2), m * k + 2 * m * ((k + 1) // 2)),
    }
    match_ok = 0
    mis_ok = 0
    for i in range(trials):
        inst = sample_ngc(n, k, root.child("comb", i))
        edges = inst.all_edges()
        want_matching, want_mis = law[inst.theta]
        match_ok += matching_size_exact(n, edges) == want_matching
        mis_ok += mis_size_exact(n, edges) == want_mis
    rows = [
        Row(suite, params, "matching_exact", match_ok / trials, None, None, trials, root.master),
        Row(suite, params, "mis_exact", mis_ok / trials, None, None, trials, root.master),
    ]
    failures = []
    if match_ok != trials:
        failures.append(f"matching size off the law in {trials - match_ok} runs")
    if mis_ok != trials:
        failures.append(f"independent-set size off the law in {trials - mis_ok} runs")
    return _finish(rows, failures)


# --- MST / weighted checks --------------------------------------------------------


def mst_suite(
    n: int,
    k: int,
    weight: int,
    trials: int,
    seed: Seed | int | None = None,
) -> SuiteResult:
    """Weighted-augmentation separation: MST weight n-1 vs >= n-m+W(m-1)."""
    root = as_seed(seed)
    suite = "mst"
    params = _params(n=n, k=k, W=weight)
    ok = 0
    for i in range(trials):
        child = root.child("mst", i)
        inst = mst_augment(sample_ngc(n, k, child), weight)
        weighted = [(u, v, inst.edge_weight((u, v))) for u, v in inst.all_edges()]
        result = mst_weight_exact(weighted, n)
        m = inst.m
        if inst.theta == 1:
            ok += result.spanning and result.weight == n - 1
        else:
            ok += result.spanning and result.weight >= n - m + weight * (m - 1)
    rows = [Row(suite, params, "mst_separates", ok / trials, None, None, trials, root.master)]
    failures = [] if ok == trials else [f"MST separation failed in {trials - ok} runs"]
    return _finish(rows, failures)
