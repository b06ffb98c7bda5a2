"""Acceptance checks, one test per criterion.

Each test appends a PASS/FAIL line to the roll call printed at the end of
the run, then asserts, so every criterion reports exactly one line no
matter how the suite ends.
"""

import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
from click.testing import CliRunner
from conftest import ACCEPTANCE_LINES

import mcclink.cli as cli
from helpers import brute_mcc, complete_graph, random_graph, rank_auroc
from mcclink.classifiers import (
    cross_validate,
    grid_search_svm,
    train_decision_tree,
    train_naive_bayes,
)
from mcclink.features import build_feature_table
from mcclink.fuzzy import partial_ratio, ratio, token_set_ratio, token_sort_ratio
from mcclink.graph import mcc_all
from mcclink.metrics import ConfusionMatrix, auroc, metrics, roc_curve
from mcclink.synth import SynthConfig, synthesize

REPO_ROOT = Path(__file__).resolve().parents[1]

CASE1 = ("Research Laboratory, India", "Research Laboratory, Social Networks, India")
CASE2 = (
    "Research Laboratory, Bangalore, India",
    "Research Laboratory, Online Social Networks, Bangalore, India",
)

NORMAL_TARGETS = (0.4377, 0.7143, 0.4323, 0.2223, 0.6972)
SUSPICIOUS_TARGETS = (0.5521, 0.2679, 0.1111, 0.0081, 0.3558)


def _record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"criterion {n} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_1_fuzzy_case_scores():
    """The two worked affiliation pairs score as published."""
    start = time.perf_counter()
    exact = (
        ratio(*CASE1) == 75
        and ratio(*CASE2) == 76
        and token_sort_ratio(*CASE1) == 76
        and token_sort_ratio(*CASE2) == 75
        and token_set_ratio(*CASE1) == 100
        and token_set_ratio(*CASE2) == 100
    )
    p1, p2 = partial_ratio(*CASE1), partial_ratio(*CASE2)
    elapsed = time.perf_counter() - start
    ok = exact and abs(p1 - 88) <= 5 and abs(p2 - 73) <= 5 and elapsed < 0.5
    _record(
        1,
        ok,
        f"ratios (75,76|76,75|100,100) exact, partial ({p1},{p2}) within 5 "
        f"in {elapsed * 1000:.1f} ms",
    )


def test_criterion_2_mcc_oracle_equivalence():
    """Batch MCC matches brute force on 500 random graphs; K_n edges score 1."""
    start = time.perf_counter()
    rng = random.Random(0x5EED)
    worst = 0.0
    ok = True
    for _ in range(500):
        g = random_graph(rng, max_nodes=12)
        expected = brute_mcc(g.edges)
        for rec in mcc_all(g):
            m, l, mcc = expected[frozenset((rec.u, rec.v))]
            ok = ok and (rec.m_uv, rec.l_uv) == (m, l)
            worst = max(worst, abs(rec.mcc - mcc))
    ok = ok and worst <= 1e-12
    complete = all(
        rec.mcc == 1.0 for n in (5, 6, 7, 8) for rec in mcc_all(complete_graph(n))
    )
    elapsed = time.perf_counter() - start
    ok = ok and complete and elapsed < 5.0
    _record(
        2,
        ok,
        f"500 graphs exact on (m,l), mcc within {worst:.1e}, K_5..K_8 all 1.0 "
        f"in {elapsed:.2f}s (budget 5s)",
    )


def test_criterion_3_metric_formulas():
    """Reference confusion matrix, AUROC anchors, and the rank-statistic oracle."""
    start = time.perf_counter()
    m = metrics(ConfusionMatrix(50, 10, 5, 35))
    got = (m.precision, m.recall, m.accuracy, m.f_measure, m.fpr)
    expected = (0.875, 0.7778, 0.85, 0.8235, 0.1667)
    formulas = max(abs(g - e) for g, e in zip(got, expected)) <= 1e-4

    perfect = auroc(roc_curve([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])) == 1.0
    constant = auroc(roc_curve([0.5] * 8, [0, 1, 0, 1, 1, 0, 1, 0])) == 0.5

    rng = random.Random(0xA0C)
    worst = 0.0
    for i in range(200):
        n = rng.randrange(4, 40)
        truth = [0, 1] + [rng.randrange(2) for _ in range(n - 2)]
        if i % 2:
            scores = [rng.randrange(5) / 4 for _ in truth]
        else:
            scores = [rng.random() for _ in truth]
        worst = max(worst, abs(auroc(roc_curve(scores, truth)) - rank_auroc(scores, truth)))
    elapsed = time.perf_counter() - start
    ok = formulas and perfect and constant and worst <= 1e-12 and elapsed < 2.0
    _record(
        3,
        ok,
        f"formulas within 1e-4, anchors 1.0/0.5, trapezoid vs rank within "
        f"{worst:.1e} on 200 vectors in {elapsed:.2f}s (budget 2s)",
    )


def test_criterion_4_synthetic_calibration():
    """Default-config per-class feature means sit near the reference profile."""
    start = time.perf_counter()
    normal, suspicious = [], []
    for seed in range(10):
        g, profiles = synthesize(SynthConfig(seed=seed))
        table = build_feature_table(g, profiles)
        X, y = table.matrix, table.labels
        normal.append(X[y == 0].mean(axis=0))
        suspicious.append(X[y == 1].mean(axis=0))
    mn = np.mean(normal, axis=0)
    ms = np.mean(suspicious, axis=0)
    dev = max(
        np.abs(mn - NORMAL_TARGETS).max(), np.abs(ms - SUSPICIOUS_TARGETS).max()
    )
    elapsed = time.perf_counter() - start
    ok = dev <= 0.10 and elapsed < 30.0
    _record(
        4,
        ok,
        f"per-class means within {dev:.4f} of targets over 10 seeds "
        f"in {elapsed:.2f}s (budget 30s)",
    )


def test_criterion_5_classifier_benchmarks():
    """Cross-validated classifiers reach the published levels and ordering."""
    start = time.perf_counter()
    dt_acc, dt_auc, svm_acc, nb_acc = [], [], [], []
    for seed in range(10):
        g, profiles = synthesize(SynthConfig(seed=seed))
        table = build_feature_table(g, profiles)
        dt = cross_validate(table, 10, train_decision_tree)
        dt_acc.append(dt.mean_accuracy)
        dt_auc.append(dt.mean_auroc)
        svm_acc.append(grid_search_svm(table, folds=10).cv_accuracy)
        nb_acc.append(cross_validate(table, 10, train_naive_bayes).mean_accuracy)
    dt_a, dt_u = np.mean(dt_acc), np.mean(dt_auc)
    svm_a, nb_a = np.mean(svm_acc), np.mean(nb_acc)
    elapsed = time.perf_counter() - start
    ok = (
        dt_a >= 0.95
        and dt_u >= 0.97
        and svm_a >= 0.90
        and nb_a >= 0.85
        and dt_a >= svm_a >= nb_a
        and elapsed < 180.0
    )
    _record(
        5,
        ok,
        f"tree {dt_a:.4f}/{dt_u:.4f}, svm {svm_a:.4f}, nb {nb_a:.4f}, "
        f"ordering tree>=svm>=nb in {elapsed:.1f}s (budget 180s)",
    )


PIPELINE_TOML = """\
[pipeline]
model = "tree"
split = 0.25
folds = 5
seed = 3

[synth]
n_real = 30
n_fake = 4
target_edges = 100
requests_per_fake = 12
seed = 3
"""


def test_criterion_6_run_determinism(tmp_path):
    """Two identical `run` invocations produce byte-identical artifacts."""
    config = tmp_path / "pipeline.toml"
    config.write_text(PIPELINE_TOML)
    runner = CliRunner()
    for out in ("first", "second"):
        res = runner.invoke(cli.main, [
            "run", "--config", str(config), "--out-dir", str(tmp_path / out),
        ])
        assert res.exit_code == 0, res.output
    names = ("features.csv", "model.json", "report.json")
    identical = all(
        (tmp_path / "first" / n).read_bytes() == (tmp_path / "second" / n).read_bytes()
        for n in names
    )
    _record(6, identical, f"{', '.join(names)} byte-identical across reruns")


def test_criterion_7_property_suites():
    """The randomized property suite passes end to end."""
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "tests/test_properties.py", "-q",
         "-p", "no:cacheprovider"],
        cwd=REPO_ROOT,
        capture_output=True,
        text=True,
    )
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else ""
    ok = proc.returncode == 0 and " passed" in tail and "failed" not in tail
    _record(7, ok, f"property suite: {tail or proc.stderr.strip()[:120]}")
