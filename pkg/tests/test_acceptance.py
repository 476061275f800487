"""Acceptance criteria, each at its stated tolerance.

Every test records a verdict before asserting, so the terminal summary
prints one PASS/FAIL line per criterion even when an assertion fails.
"""

import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from modefs.classify import evaluate
from modefs.data import Dataset
from modefs.engine import RunConfig, export, front_hv, prepare, run, run_batch, run_problem
from modefs.evo_core import decode, dominates, encode
from modefs.foagm import build_grid
from modefs.metrics import ReferenceFront, exhaustive_pareto, hypervolume, igd
from modefs.msbiu import mean_shift
from modefs.synthetic import make_dataset, write_csv
from modefs.wrbi import random_initialize

import oracles
from conftest import record_criterion

C1_FIXTURES = [("separable", 10), ("noisy", 10), ("duplicated", 12)]
C3_DATA = dict(kind="mixed", n_features=20, n_instances=120, seed=0, n_informative=5)


# ---------------------------------------------------------------- 1

@pytest.fixture(scope="module")
def c1_batches():
    out = {}
    for kind, d in C1_FIXTURES:
        cfg = RunConfig(pop_size=50, max_generations=50, seed=0)
        data = make_dataset(kind, d, 120, seed=0)
        problem = prepare(cfg, data)
        exact = exhaustive_pareto(problem.train, cfg.k)
        second = oracles.enumerate_front(problem.train.features, problem.train.labels, cfg.k)
        batch = run_batch(cfg, data, n_runs=30, reference=exact)
        out[kind] = (exact, second, batch)
    return out


def test_c1_enumerators_agree(c1_batches):
    agree = all(exact.points.tolist() == [list(p) for p in second] for exact, second, _ in c1_batches.values())
    record_criterion("1", agree, f"enumerators agree on {len(c1_batches)} datasets: {agree}")
    assert agree


@pytest.mark.parametrize("kind", [k for k, _ in C1_FIXTURES])
def test_c1_igd_against_exact_front(c1_batches, kind):
    _, _, batch = c1_batches[kind]
    hits = int(np.sum(batch.igd <= 0.05))
    ok = hits >= 24
    record_criterion("1", ok, f"{kind}: {hits}/30 runs IGD<=0.05 (median {np.median(batch.igd):.4f})")
    assert ok, f"{kind}: only {hits}/30 runs reach IGD <= 0.05"


# ---------------------------------------------------------------- 2

def test_c2_hypervolume():
    start = time.perf_counter()
    exact = hypervolume(np.array([[0.5, 0.5]])) == 0.25 and hypervolume(np.array([[0.2, 0.6], [0.6, 0.2]])) == pytest.approx(0.48, abs=1e-15)
    rng = np.random.default_rng(2)
    worst = 0.0
    for i in range(20):
        n = int(rng.integers(2, 25))
        pts = np.column_stack([np.sort(rng.random(n)), np.sort(rng.random(n))[::-1]])
        worst = max(worst, abs(hypervolume(pts) - oracles.hv_monte_carlo(pts, seed=i)))
    elapsed = time.perf_counter() - start
    ok = exact and worst <= 1e-3 and elapsed < 30
    record_criterion("2", ok, f"analytic cases exact: {exact}; max |sweep-MC| {worst:.2e} over 20 fronts; {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------- 3 and 4

@pytest.fixture(scope="module")
def c3_runs():
    cfg0 = RunConfig(pop_size=40, max_generations=50)
    problem = prepare(cfg0, make_dataset(**C3_DATA))
    start = time.perf_counter()
    runs, random_hv = [], []
    for seed in range(10):
        cfg = RunConfig(pop_size=40, max_generations=50, seed=seed)
        runs.append(run_problem(cfg, problem))
        rand = random_initialize(40, problem.train.n_features, seed, problem.evaluator)
        random_hv.append(front_hv(rand, cfg.ref_point))
    return runs, np.array(random_hv), time.perf_counter() - start


def test_c3_improvement_over_init(c3_runs):
    runs, random_hv, elapsed = c3_runs
    gen0 = np.array([r.hv_trace[0] for r in runs])
    final = np.array([r.hv_trace[-1] for r in runs])
    wins = int(np.sum(gen0 >= random_hv))
    ok = np.median(final) >= np.median(gen0) and wins >= 7 and elapsed < 600
    record_criterion(
        "3", ok,
        f"median HV gen0 {np.median(gen0):.4f} -> final {np.median(final):.4f}; "
        f"pool init >= random init in {wins}/10 seeds; {elapsed:.1f}s",
    )
    assert ok


def _replay(result, stats=None):
    bad = 0
    for e in result.replacements:
        if e.replaced and dominates(e.old_objectives, e.new_objectives):
            bad += 1
    for e in result.refinements:
        if e.removed is None:
            bad += not (e.old_mask.all() and np.array_equal(e.old_mask, e.new_mask))
        else:
            diff = np.flatnonzero(e.old_mask != e.new_mask).tolist()
            bad += not (
                diff == sorted([e.removed, e.added])
                and e.old_mask[e.removed] and e.new_mask[e.added]
            )
    return bad, len(result.replacements), len(result.refinements)


def test_c4_log_replay(c3_runs, c1_batches):
    results = list(c3_runs[0]) + [r for _, _, b in c1_batches.values() for r in b.runs[:5]]
    bad = n_rep = n_ref = 0
    for result in results:
        b, r1, r2 = _replay(result)
        bad, n_rep, n_ref = bad + b, n_rep + r1, n_ref + r2
    ok = bad == 0 and n_ref > 0
    record_criterion("4", ok, f"{bad} violations in {n_rep} replacement and {n_ref} refinement events over {len(results)} runs")
    assert ok


# ---------------------------------------------------------------- 5

C5_CONFIGS = [
    ("noisy", 10, RunConfig(pop_size=20, max_generations=15, seed=1)),
    ("mixed", 16, RunConfig(pop_size=16, max_generations=10, seed=7, grid_n="pop", accept_worse_refinement=False)),
    ("duplicated", 12, RunConfig(pop_size=24, max_generations=12, seed=3, k=3, train_fraction=0.7, split_seed=5)),
]


def test_c5_determinism(tmp_path):
    same = []
    for i, (kind, d, cfg) in enumerate(C5_CONFIGS):
        path = tmp_path / f"{kind}.csv"
        write_csv(make_dataset(kind, d, 90, seed=i), path)
        blobs = []
        for rep in range(2):
            out = tmp_path / f"cfg{i}_rep{rep}"
            export(run(cfg, path), out)
            blobs.append(((out / "front.csv").read_bytes(), (out / "hv_trace.csv").read_bytes()))
        same.append(blobs[0] == blobs[1])
    ok = all(same)
    record_criterion("5", ok, f"byte-identical front.csv and hv_trace.csv on {sum(same)}/3 configs")
    assert ok


# ---------------------------------------------------------------- 6

def test_c6_breast_cancer_trend():
    sklearn_datasets = pytest.importorskip("sklearn.datasets")
    raw = sklearn_datasets.load_breast_cancer()
    data = Dataset(raw.data, raw.target, tuple(raw.feature_names), 2, tuple(raw.target_names))
    assert (data.n_instances, data.n_features) == (569, 30)
    batch = run_batch(RunConfig(pop_size=30, max_generations=100, seed=0), data, n_runs=10)
    med = float(np.median(batch.hv))
    ok = med >= 0.80
    record_criterion("6", ok, f"breast cancer median HV {med:.4f} (10 runs, P=30, 100 generations), trend check only")
    assert ok


# ---------------------------------------------------------------- 7

THOUSAND = settings(max_examples=1000, deadline=None)
pairs = st.tuples(st.floats(0, 1), st.floats(0, 1))


def _suite(label, prop):
    ok = False
    try:
        prop()
        ok = True
    finally:
        record_criterion("7", ok, f"{label} {'ok' if ok else 'FAILED'} (1000 cases)")


@THOUSAND
@given(pairs, pairs, pairs)
def _dominance_laws(a, b, c):
    assert not dominates(a, a)
    assert not (dominates(a, b) and dominates(b, a))
    if dominates(a, b) and dominates(b, c):
        assert dominates(a, c)
    assert dominates(a, b) == oracles.dominates(a, b)


@THOUSAND
@given(st.lists(st.booleans(), min_size=1, max_size=64), st.integers(0, 2**32 - 1), st.floats(0.05, 0.95))
def _decode_encode(bits, seed, theta):
    mask = np.array(bits)
    assert np.array_equal(decode(encode(mask, np.random.default_rng(seed), theta), theta), mask)


@THOUSAND
@given(arrays(float, st.tuples(st.integers(1, 60), st.just(2)), elements=st.floats(0, 1)), st.integers(1, 60))
def _grid_partition(points, n):
    g = build_grid(points, n)
    assert sorted(i for cell in g.cells.values() for i in cell) == list(range(points.shape[0]))


_FR_DATA = Dataset(
    np.random.default_rng(0).random((8, 40)), np.array([0, 1] * 4), tuple(f"f{j}" for j in range(40)), 2
)


@THOUSAND
@given(st.lists(st.booleans(), min_size=40, max_size=40))
def _feature_ratio(bits):
    mask = np.array(bits)
    assert evaluate(mask, _FR_DATA, k=1).fr == mask.sum() / 40


@THOUSAND
@given(arrays(float, st.integers(1, 200), elements=st.floats(0, 1)))
def _mean_shift_zero_sum(q):
    assert abs(mean_shift(q).sum()) <= 1e-9 * q.size


def test_c7_dominance_partial_order():
    _suite("dominance laws", _dominance_laws)


def test_c7_decode_encode_identity():
    _suite("decode(encode) identity", _decode_encode)


def test_c7_grid_partition():
    _suite("grid partition", _grid_partition)


def test_c7_feature_ratio():
    _suite("feature ratio", _feature_ratio)


def test_c7_mean_shift_zero_sum():
    _suite("mean-shift zero sum", _mean_shift_zero_sum)
