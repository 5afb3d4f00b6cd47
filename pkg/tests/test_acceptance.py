"""Acceptance suite: one test per release gate, each printing a verdict line.

Every tolerance and seed is frozen here on purpose; a change in behavior
that moves a number past its gate must fail loudly rather than be
re-tuned.  Run with -s to see the verdict lines on success too.
"""

import math
import time
import warnings

import numpy as np
from sklearn.datasets import load_digits

from oracles import (
    binomial_mean_abs_cos,
    binomial_se_abs_cos,
    enumerate_mean_abs_cos,
    jacobi_eigh,
    naive_embed,
    point_in_polygon_slack,
)
from sprev.bench import BenchSpec, pca2d, run_bench
from sprev.cli import main as cli_main
from sprev.core import (
    EmbedConfig,
    WeightKernel,
    class_centroids,
    min_max_scale,
    similarity_matrix,
    surface_anchors,
    weight_rows,
)
from sprev.datasets import CullSpec, LabeledDataset, cull
from sprev.layout import embed, make_polygon
from sprev.metrics import MetricKind
from sprev.ortho_sim import OrthoRunSpec, epsilon_threshold, run_ortho_sim
from sprev.render import render_embedding

GEOM_TOL = 1e-9
SUM_TOL = 1e-12


def _verdict(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    print(line)
    assert ok, line


def _random_dataset(rng, m, n, n_c, constant_column=False):
    kind = rng.integers(0, 3)
    if kind == 0:
        features = rng.normal(scale=rng.uniform(0.1, 50.0), size=(m, n))
    elif kind == 1:
        features = rng.uniform(-100.0, 100.0, size=(m, n))
    else:
        features = rng.lognormal(sigma=1.0, size=(m, n))
    if constant_column:
        features[:, rng.integers(0, n)] = 3.7
    labels = np.concatenate([np.arange(n_c), rng.integers(0, n_c, size=m - n_c)])
    rng.shuffle(labels)
    return LabeledDataset(features, labels.astype(np.int64), [str(c) for c in range(n_c)])


def _safe_metric(scaled_features, wanted):
    # Cosine distance is undefined for a sample scaled to the zero vector;
    # that is contract behavior, not an invariant failure, so sidestep it.
    if wanted is MetricKind.COSINE and np.any(np.all(scaled_features == 0.0, axis=1)):
        return MetricKind.EUCLIDEAN
    return wanted


def test_c1_pipeline_invariants_on_randomized_datasets():
    rng = np.random.default_rng(11)
    metrics = list(MetricKind)
    kernels = list(WeightKernel)
    worst = {"scale_low": 0.0, "scale_high": 0.0, "radius": 0.0, "sum": 0.0,
             "negative": 0.0, "outside": -math.inf}
    start = time.perf_counter()
    for trial in range(200):
        m = int(rng.integers(3, 201))
        n = int(rng.integers(2, 801))
        n_c = int(rng.integers(2, min(9, m + 1)))
        ds = _random_dataset(rng, m, n, n_c, constant_column=(trial % 17 == 0))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            sds = min_max_scale(ds)
        metric = _safe_metric(sds.features, metrics[trial % 3])
        cfg = EmbedConfig(metric=metric, kernel=kernels[trial % 2])

        worst["scale_low"] = max(worst["scale_low"], float(-sds.features.min()))
        worst["scale_high"] = max(worst["scale_high"], float(sds.features.max() - 1.0))

        anchors = surface_anchors(class_centroids(sds))
        radius = math.sqrt(n) / 2.0
        norms = np.sqrt(np.sum((anchors.anchors - anchors.ball.center) ** 2, axis=1))
        worst["radius"] = max(worst["radius"], float(np.abs(norms - radius).max()))

        weights = weight_rows(similarity_matrix(sds, anchors, metric), cfg)
        worst["sum"] = max(worst["sum"], float(np.abs(weights.sum(axis=1) - 1.0).max()))
        worst["negative"] = max(worst["negative"], float(-weights.min()))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            emb = embed(ds, cfg)
        expected = weights @ make_polygon(n_c).vertices
        assert np.array_equal(emb.points, expected)
        worst["outside"] = max(
            worst["outside"], point_in_polygon_slack(emb.points, emb.polygon.vertices)
        )
    took = time.perf_counter() - start

    ok = (
        worst["scale_low"] <= 0.0
        and worst["scale_high"] <= 0.0
        and worst["radius"] <= GEOM_TOL
        and worst["sum"] <= SUM_TOL
        and worst["negative"] <= 0.0
        and worst["outside"] <= GEOM_TOL
        and took < 60.0
    )
    _verdict(
        "criterion 1 (invariants on 200 randomized datasets)",
        ok,
        f"radius drift={worst['radius']:.2e} sum drift={worst['sum']:.2e} "
        f"containment slack={worst['outside']:.2e} in {took:.1f}s",
    )


def test_c2_optimized_embedding_matches_naive_reference():
    rng = np.random.default_rng(29)
    metrics = ["euclidean", "manhattan", "cosine"]
    kernels = ["inverse", "softmax"]
    worst = 0.0
    for trial in range(50):
        m = int(rng.integers(3, 41))
        n = int(rng.integers(1, 13))
        n_c = int(rng.integers(2, min(7, m + 1)))
        ds = _random_dataset(rng, m, n, n_c)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            scaled = min_max_scale(ds).features
        metric = _safe_metric(scaled, MetricKind.from_name(metrics[trial % 3])).value
        kernel = kernels[trial % 2]
        cfg = EmbedConfig(
            metric=MetricKind.from_name(metric),
            kernel=WeightKernel.from_name(kernel),
            temperature=0.7,
        )
        emb = embed(ds, cfg)
        reference, _ = naive_embed(
            ds.features.tolist(), ds.labels.tolist(), n_c,
            metric=metric, kernel=kernel, temperature=0.7,
        )
        diff = float(np.abs(emb.points - np.asarray(reference)).max())
        worst = max(worst, diff)
    _verdict(
        "criterion 2 (vectorized embed vs straight-loop reference, 50 datasets)",
        worst <= GEOM_TOL,
        f"worst coordinate difference {worst:.2e} (allowed {GEOM_TOL:.0e})",
    )


def test_c3_orthogonality_statistics():
    dims = [2, 4, 16, 64, 256, 1024]
    pairs = 100000
    start = time.perf_counter()
    results = run_ortho_sim(OrthoRunSpec(dims, pairs, 0))
    took = time.perf_counter() - start

    assert enumerate_mean_abs_cos(2) == 0.5
    assert enumerate_mean_abs_cos(4) == 0.375
    mean_tol = 3.0 / math.sqrt(pairs)
    small_ok = (
        abs(results[0].mean_abs_cos - 0.5) <= mean_tol
        and abs(results[1].mean_abs_cos - 0.375) <= mean_tol
    )

    tail = results[1:]  # dims 4..1024
    decreasing_ok = True
    for a, b in zip(tail, tail[1:]):
        gap_needed = 3.0 * math.sqrt(
            binomial_se_abs_cos(a.dim, pairs) ** 2 + binomial_se_abs_cos(b.dim, pairs) ** 2
        )
        decreasing_ok &= a.mean_abs_cos - b.mean_abs_cos > gap_needed

    bound = 2.0 * math.exp(-math.sqrt(1024) / 2.0)
    sigma = math.sqrt(bound * (1.0 - bound) / pairs)
    frac_ok = results[-1].frac_exceeding_eps <= bound + 3.0 * sigma
    assert epsilon_threshold(1024) == math.sqrt(5.0 / 32.0)

    ok = small_ok and decreasing_ok and frac_ok and took < 30.0
    _verdict(
        "criterion 3 (100k-pair orthogonality statistics)",
        ok,
        f"mean(2)={results[0].mean_abs_cos:.5f} mean(4)={results[1].mean_abs_cos:.5f} "
        f"frac(1024)={results[-1].frac_exceeding_eps:.1e} in {took:.1f}s",
    )


def _digits_as_784():
    digits = load_digits()
    big = np.kron(digits.images, np.ones((3, 3)))      # 8x8 -> 24x24
    big = np.pad(big, ((0, 0), (2, 2), (2, 2)))        # -> 28x28
    features = big.reshape(len(digits.images), 784)
    return LabeledDataset(
        features, digits.target.astype(np.int64), [str(d) for d in range(10)]
    )


def test_c4_culled_digits_benchmark():
    ds = _digits_as_784()
    culled = cull(ds, CullSpec(num_classes=3, subsample_fraction=1.0 / 3.0, seed=4))
    assert 170 <= culled.num_samples <= 190
    assert culled.num_classes == 3
    with warnings.catch_warnings():
        # zero-pad border pixels are constant columns by construction
        warnings.simplefilter("ignore", UserWarning)
        results = run_bench(
            culled, EmbedConfig(), BenchSpec(k_values=[5], folds=10, seed=4)
        )
    by_method = {r.method: r for r in results}
    sprev_acc = by_method["sprev"].mean_accuracy
    pca_acc = by_method["pca"].mean_accuracy
    ok = sprev_acc >= 0.70 and sprev_acc >= pca_acc
    _verdict(
        "criterion 4 (3-class culled digits, kNN k=5, 10-fold)",
        ok,
        f"polygon embedding {sprev_acc:.3f} vs PCA {pca_acc:.3f} "
        f"on {culled.num_samples} samples of classes {culled.class_names}",
    )


def test_c5_scale_performance():
    rng = np.random.default_rng(0)
    labels = rng.integers(0, 10, size=60000).astype(np.int64)
    offsets = rng.normal(size=(10, 784))
    features = rng.normal(size=(60000, 784)) + offsets[labels] * 0.5
    big = LabeledDataset(features, labels, [str(c) for c in range(10)])
    small = LabeledDataset(features[:200].copy(), labels[:200].copy(),
                           [str(c) for c in range(10)])

    start = time.perf_counter()
    svg_small = render_embedding(embed(small, EmbedConfig()))
    small_took = time.perf_counter() - start

    start = time.perf_counter()
    svg_big = render_embedding(embed(big, EmbedConfig()))
    big_took = time.perf_counter() - start

    ok = small_took < 1.0 and big_took < 30.0 and svg_small and svg_big
    _verdict(
        "criterion 5 (embed+render wall clock)",
        ok,
        f"200x784 in {small_took:.3f}s (<1s), 60000x784 in {big_took:.1f}s (<30s)",
    )


def _write_inputs(tmp_path):
    rng = np.random.default_rng(14)
    lines = ["a,b,c,d,label"]
    for i in range(60):
        cls = ["u", "v", "w"][i % 3]
        base = {"u": 0.0, "v": 6.0, "w": -6.0}[cls]
        vals = base + rng.normal(scale=0.5, size=4)
        lines.append(",".join(f"{v:.5f}" for v in vals) + f",{cls}")
    csv_path = tmp_path / "input.csv"
    csv_path.write_text("\n".join(lines) + "\n")
    return str(csv_path)


def test_c6_cli_determinism(tmp_path):
    csv_path = _write_inputs(tmp_path)
    runs = []
    for tag in ("one", "two"):
        out = tmp_path / tag
        out.mkdir()
        commands = [
            ["embed", "--input", csv_path, "--seed", "5",
             "--out-csv", str(out / "emb.csv"), "--out-svg", str(out / "emb.svg")],
            ["cull", "--input", csv_path, "--classes", "2", "--fraction", "0.5",
             "--seed", "5", "--out", str(out / "culled.csv")],
            ["bench", "--input", csv_path, "--k", "1,5", "--folds", "5", "--seed", "5",
             "--out-folds", str(out / "folds.csv"),
             "--out-summary", str(out / "summary.csv")],
            ["ortho", "--dims", "2,16,128", "--pairs", "2000", "--seed", "5",
             "--out-csv", str(out / "ortho.csv"), "--out-svg", str(out / "ortho.svg")],
        ]
        for command in commands:
            assert cli_main(command) == 0, command
        runs.append(out)

    names = ["emb.csv", "emb.svg", "culled.csv", "folds.csv", "summary.csv",
             "ortho.csv", "ortho.svg"]
    mismatched = [
        name for name in names
        if (runs[0] / name).read_bytes() != (runs[1] / name).read_bytes()
    ]
    _verdict(
        "criterion 6 (CLI outputs byte-identical across repeated runs)",
        not mismatched,
        f"{len(names)} files compared" + (f", mismatched: {mismatched}" if mismatched else ""),
    )


def test_c7_pca_against_dense_jacobi_oracle():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for trial in range(20):
        m = int(rng.integers(5, 31))
        n = int(rng.integers(2, 11))
        features = rng.normal(size=(m, n)) * rng.uniform(0.5, 3.0, size=n)
        ours = pca2d(features, seed=trial)
        centered = features - features.mean(axis=0)
        _, vecs = jacobi_eigh(centered.T @ centered / (m - 1))
        reference = centered @ vecs[:, :2]
        for col in range(2):
            a = ours[:, col].copy()
            b = reference[:, col].copy()
            if a[np.argmax(np.abs(a))] < 0:
                a = -a
            if b[np.argmax(np.abs(b))] < 0:
                b = -b
            worst = max(worst, float(np.abs(a - b).max()))
    _verdict(
        "criterion 7 (pca2d vs dense Jacobi oracle, 20 matrices)",
        worst <= 1e-6,
        f"worst projection difference {worst:.2e} (allowed 1e-06)",
    )
