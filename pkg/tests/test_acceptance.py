"""Exit criteria. Each test prints one PASS/FAIL line (shown in the pytest summary).

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import functools
import statistics
import subprocess
import sys
import time

import numpy as np

import oracles
from conftest import merge_split_scenario
from exprclust.adaptive import AgmfiParams, IsodataParams, agmfi, eiagmfi, isodata
from exprclust.kmeans import kmeans, objective
from exprclust.matrix_io import (
    ExpressionMatrix,
    drop_missing_rows,
    generate_synthetic,
    load_delimited,
    zscore_normalize,
)
from exprclust.quality import silhouette
from exprclust.seeding import ccia_seed

RESULTS: list[str] = []


def criterion(number, title, budget=None):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            detail, ok = "", False
            try:
                detail = fn(*args, **kwargs) or ""
                elapsed = time.perf_counter() - start
                assert budget is None or elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
                ok = True
            except AssertionError as exc:
                detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                raise
            finally:
                elapsed = time.perf_counter() - start
                line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title} ({elapsed:.2f}s) {detail}".rstrip()
                RESULTS.append(line)
                print(line)
        return run
    return wrap


def benchmark(seed):
    return generate_synthetic(5, 60, 17, separation=8.0, spread=1.0, seed=seed)


@criterion(1, "Lloyd monotonicity over 100 runs, n=300 m=17 K=10", budget=10)
def test_lloyd_monotonicity():
    worst = -np.inf
    for seed in range(100):
        mat, _ = benchmark(seed)
        h = np.array(kmeans(mat, 10, seed=seed).objective_history)
        worst = max(worst, np.diff(h).max(initial=-np.inf))
        assert (np.diff(h) <= 1e-9).all(), f"seed {seed}: objective rose by {np.diff(h).max():.3g}"
    return f"largest step {worst:.3g}"


@criterion(2, "silhouette equals naive O(n^2 K) reference within 1e-9, 50 instances", budget=30)
def test_silhouette_oracle():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 201))
        k = int(rng.integers(2, min(8, n) + 1))
        x = rng.standard_normal((n, int(rng.integers(1, 18))))
        labels = np.concatenate([np.arange(k), rng.integers(0, k, n - k)])
        rng.shuffle(labels)
        err = np.abs(silhouette(x, labels).per_point - oracles.silhouette_loops(x, labels)).max()
        worst = max(worst, err)
        assert err <= 1e-9, f"n={n}: max deviation {err:.3g}"
    return f"max deviation {worst:.3g}"


@criterion(3, "row z-score on 2882x17: |mean|<1e-12, |std-1|<1e-12", budget=1)
def test_normalization_contract():
    x = np.random.default_rng(3).uniform(1, 500, size=(2882, 17))
    z = zscore_normalize(ExpressionMatrix.from_array(x)).data
    mean_err = np.abs(z.mean(axis=1)).max()
    std_err = np.abs(z.std(axis=1) - 1).max()
    assert mean_err < 1e-12 and std_err < 1e-12, f"mean {mean_err:.3g}, std {std_err:.3g}"
    return f"mean {mean_err:.2g}, std {std_err:.2g}"


@criterion(4, "2884x17 file with 2 incomplete rows loads as 2882x17")
def test_ingestion(tmp_path):
    rng = np.random.default_rng(4)
    values = rng.integers(1, 501, size=(2884, 17)).astype(str).astype(object)
    values[10, 0] = "NA"
    values[2500, 9] = ""
    path = tmp_path / "yeast.tsv"
    path.write_text("".join("\t".join([f"YG{i:04d}", *row]) + "\n" for i, row in enumerate(values)))
    mat = drop_missing_rows(load_delimited(path))
    assert mat.shape == (2882, 17), mat.shape
    return f"shape {mat.shape}"


@criterion(5, "CCIA bit-identical across two calls, 20 datasets")
def test_ccia_determinism():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        x = rng.standard_normal((int(rng.integers(20, 300)), int(rng.integers(1, 18))))
        k = int(rng.integers(1, 11))
        assert ccia_seed(x, k).tobytes() == ccia_seed(x.copy(), k).tobytes(), f"dataset {seed}"


@criterion(6, "ISODATA merge/split scenario ends at K=3 with >=1 merge and >=1 split")
def test_merge_split_scenario():
    x, tags, init = merge_split_scenario()
    res = isodata(x, IsodataParams(k_init=3, theta_n=1, theta_s=2.0, theta_c=2.5), init=init)
    merges, splits = res.count("merge"), res.count("split")
    assert res.final_k == 3 and merges >= 1 and splits >= 1, f"K={res.final_k} merges={merges} splits={splits}"
    groups = sorted(sorted(set(tags[res.labels == c])) for c in range(3))
    assert groups == [["A", "B", "C"], ["D", "E"], ["F", "G"]], groups
    return f"merges={merges} splits={splits}"


@criterion(7, "K recovery from k_init=10: agmfi >=80%, eiagmfi >=90% of 50 runs", budget=60)
def test_adaptive_k_recovery():
    params = AgmfiParams(k_init=10)
    a_hits = e_hits = 0
    for seed in range(50):
        mat, _ = benchmark(seed)
        a_hits += agmfi(mat, params, seed=seed).final_k == 5
        e_hits += eiagmfi(mat, params).final_k == 5
    assert a_hits >= 40 and e_hits >= 45, f"agmfi {a_hits}/50, eiagmfi {e_hits}/50"
    return f"agmfi {a_hits}/50, eiagmfi {e_hits}/50"


@criterion(8, "median quality eiagmfi >= agmfi >= kmeans(true K), 50 paired seeds", budget=120)
def test_directional_ordering():
    params = AgmfiParams(k_init=10)
    e, a, k = [], [], []
    for seed in range(50):
        mat, _ = benchmark(seed)
        e.append(silhouette(mat, eiagmfi(mat, params).labels).scaled_score)
        a.append(silhouette(mat, agmfi(mat, params, seed=seed).labels).scaled_score)
        k.append(silhouette(mat, kmeans(mat, 5, seed=seed).labels).scaled_score)
    me, ma, mk = statistics.median(e), statistics.median(a), statistics.median(k)
    assert me >= ma >= mk, f"medians {me:.3f}, {ma:.3f}, {mk:.3f}"
    return f"medians eiagmfi {me:.3f} >= agmfi {ma:.3f} >= kmeans {mk:.3f}"


@criterion(9, "degenerate reductions: disabled isodata == kmeans, K=n objective 0")
def test_degenerate_reductions():
    for seed in range(10):
        mat, _ = benchmark(seed)
        init = mat.data[np.random.default_rng(seed).choice(300, 10, replace=False)]
        a = isodata(mat, IsodataParams(k_init=10, theta_c=0.0, theta_s=np.inf), init=init)
        b = kmeans(mat, init=init)
        assert a.labels.tobytes() == b.labels.tobytes(), f"seed {seed}: labels differ"
        assert a.centroids.tobytes() == b.centroids.tobytes(), f"seed {seed}: centroids differ"
        assert a.objective_history == b.objective_history
    x = np.random.default_rng(9).standard_normal((25, 4))
    full = kmeans(x, 25, seed=0)
    assert objective(x, full.labels, full.centroids) == 0.0


@criterion(10, "compare --format csv byte-identical across two invocations")
def test_cli_reproducibility():
    cmd = [sys.executable, "-m", "exprclust", "compare", "--repeats", "3", "--seed", "5", "--format", "csv"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first and first == second, "outputs differ"
    return f"{len(first)} bytes"


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failed = 0
    for fn in [v for k, v in sorted(globals().items()) if k.startswith("test_")]:
        try:
            if fn.__name__ == "test_ingestion":
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
