"""Command line pipeline for suspicious-link detection.

Subcommands mirror the pipeline stages: ``synth`` writes a synthetic
community, ``features`` turns graph + profiles into the feature table,
``train`` fits a classifier with cross-validation, ``eval`` scores a
held-out split, ``score`` ranks every edge by suspicion, and ``run``
chains all stages.  Every artifact is written atomically, and a failed
invocation removes whatever it had already written.

Exit codes: 0 success, 2 bad input, 3 training did not converge,
4 internal invariant violation.  Set MCCLINK_LOG=debug|info|warning
to control logging.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass, replace
from pathlib import Path

import click

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python 3.10
    import tomli as _toml

from mcclink import synth as synthmod
from mcclink.classifiers import (
    cross_validate,
    grid_search_svm,
    load_model,
    save_model,
    train_decision_tree,
    train_naive_bayes,
    train_svm_rbf,
)
from mcclink.errors import ConvergenceError, InputError, InvariantError
from mcclink.features import FeatureTable, build_feature_table, split_train_test
from mcclink.graph import load_graph, save_edge_csv, save_node_csv
from mcclink.metrics import evaluate, roc_to_csv
from mcclink.profiles import load_profiles_csv, save_profiles_csv
from mcclink.textnorm import load_dictionary, load_stopwords

log = logging.getLogger("mcclink")

MODEL_CHOICES = ("tree", "bayes", "svm")


@contextmanager
def _atomic(path: Path, tracker: list[Path]):
    """Yield a temp path; on success rename it onto ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp{os.getpid()}")
    try:
        yield tmp
        os.replace(tmp, path)
        tracker.append(path)
        log.info("wrote %s", path)
    finally:
        tmp.unlink(missing_ok=True)


def _write_json(data: dict, path: Path, tracker: list[Path]) -> None:
    with _atomic(path, tracker) as tmp:
        tmp.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n",
                       encoding="utf-8")


def _run_command(work) -> None:
    tracker: list[Path] = []

    def fail(message: str, code: int) -> None:
        for artifact in tracker:
            artifact.unlink(missing_ok=True)
        click.echo(f"mcclink: {message}", err=True)
        sys.exit(code)

    try:
        work(tracker)
    except InputError as exc:
        fail(f"input error: {exc}", 2)
    except FileNotFoundError as exc:
        fail(f"input error: file not found: {exc.filename or exc}", 2)
    except ConvergenceError as exc:
        fail(f"training error: {exc}", 3)
    except InvariantError as exc:
        fail(f"invariant violation: {exc}", 4)


def _load_table(path: str) -> FeatureTable:
    return FeatureTable.from_csv(path)


def _load_inputs(edges, nodes, profiles, dictionary, stopwords):
    g = load_graph(edges, nodes)
    prof = load_profiles_csv(profiles, fakes=set(g.fake_nodes))
    stop = load_stopwords(stopwords) if stopwords else None
    dictionary = load_dictionary(dictionary, stop) if dictionary else None
    return g, prof, dictionary, stop


def _split(table: FeatureTable, fraction: float, seed: int):
    """Train/test parts; fraction 0 evaluates and trains on everything."""
    if fraction == 0.0:
        return table, table
    return split_train_test(table, fraction, seed)


def _fit(table: FeatureTable, model: str, cfg: "PipelineConfig", seed: int):
    """Train the chosen model; returns (fitted, cv_payload)."""
    if model == "tree":
        trainer = lambda t: train_decision_tree(  # noqa: E731
            t, min_leaf=cfg.min_leaf, max_depth=cfg.max_depth
        )
        cv = cross_validate(table, cfg.folds, trainer, seed=seed)
        fitted = trainer(table)
        extra = {"max_depth": cfg.max_depth, "min_leaf": cfg.min_leaf}
    elif model == "bayes":
        cv = cross_validate(table, cfg.folds, train_naive_bayes, seed=seed)
        fitted = train_naive_bayes(table)
        extra = {}
    elif model == "svm":
        if (cfg.gamma is None) != (cfg.c is None):
            raise InputError("provide both gamma and c, or neither")
        if cfg.gamma is not None and cfg.c is not None:
            gamma, c = cfg.gamma, cfg.c
            grid = None
        else:
            result = grid_search_svm(table, folds=cfg.folds, seed=seed)
            gamma, c = result.best_gamma, result.best_c
            grid = {
                "best_gamma": result.best_gamma,
                "best_c": result.best_c,
                "cv_accuracy": result.cv_accuracy,
                "cells": [
                    {"gamma": cell.gamma, "c": cell.c,
                     "accuracy": cell.accuracy, "error": cell.error}
                    for cell in result.cells
                ],
            }
        trainer = lambda t: train_svm_rbf(t, gamma=gamma, c=c, seed=seed)  # noqa: E731
        cv = cross_validate(table, cfg.folds, trainer, seed=seed)
        fitted = trainer(table)
        extra = {"gamma": gamma, "c": c}
        if grid is not None:
            extra["grid"] = grid
    else:
        raise InputError(f"unknown model {model!r}")
    payload = {
        "model": model,
        "folds": cfg.folds,
        "seed": seed,
        "hyperparameters": extra,
        "cv": cv.to_dict(),
    }
    return fitted, payload


def _score_rows(table: FeatureTable, model) -> list[tuple]:
    labels, scores = model.predict_matrix(table.matrix)
    rows = [
        (row.u, row.v, row.values, float(scores[i]), int(labels[i]))
        for i, row in enumerate(table.rows)
    ]
    rows.sort(key=lambda r: (-r[3], r[0], r[1]))
    return rows


def _write_suspicion_csv(rows, path: Path, tracker: list[Path]) -> None:
    with _atomic(path, tracker) as tmp:
        with open(tmp, "w", newline="", encoding="utf-8") as fh:
            fh.write("u,v,mcc,w,e,ht,cc,score,predicted\n")
            for u, v, values, score, predicted in rows:
                feats = ",".join(f"{x:.6f}" for x in values)
                fh.write(f"{u},{v},{feats},{score:.6f},{predicted}\n")


@dataclass(frozen=True)
class PipelineConfig:
    """Everything `run` needs; stage flags override file values."""

    edges: str | None = None
    nodes: str | None = None
    profiles: str | None = None
    dictionary: str | None = None
    stopwords: str | None = None
    out_dir: str = "out"
    model: str = "tree"
    split: float = 0.25
    folds: int = 10
    seed: int = 0
    fake_policy: str = "include"
    max_depth: int = 12
    min_leaf: int = 2
    gamma: float | None = None
    c: float | None = None
    synth: synthmod.SynthConfig = dataclasses.field(
        default_factory=synthmod.SynthConfig
    )

    def validate(self) -> None:
        if self.model not in MODEL_CHOICES:
            raise InputError(
                f"model must be one of {', '.join(MODEL_CHOICES)}, got {self.model!r}"
            )
        if not (0.0 <= self.split < 1.0):
            raise InputError(f"split must be in [0,1), got {self.split}")
        if self.folds < 2:
            raise InputError(f"folds must be >= 2, got {self.folds}")
        if self.fake_policy not in ("include", "drop"):
            raise InputError(
                f"fake_policy must be include or drop, got {self.fake_policy!r}"
            )
        if self.gamma is not None and self.gamma <= 0:
            raise InputError(f"gamma must be positive, got {self.gamma}")
        if self.c is not None and self.c <= 0:
            raise InputError(f"c must be positive, got {self.c}")
        paths = (self.edges, self.nodes, self.profiles)
        if any(paths) and not all(paths):
            raise InputError(
                "data section needs all of edges, nodes, and profiles"
            )
        self.synth.validate()


def load_pipeline_config(path) -> PipelineConfig:
    with open(path, "rb") as fh:
        try:
            data = _toml.load(fh)
        except _toml.TOMLDecodeError as exc:
            raise InputError(f"{path}: invalid TOML: {exc}") from exc
    unknown = sorted(set(data) - {"data", "synth", "pipeline"})
    if unknown:
        raise InputError(f"{path}: unknown sections: {', '.join(unknown)}")
    kwargs: dict = {}
    section = data.get("data", {})
    for key in ("edges", "nodes", "profiles", "dictionary", "stopwords"):
        if key in section:
            kwargs[key] = str(section[key])
    extra = sorted(set(section) - {"edges", "nodes", "profiles", "dictionary", "stopwords"})
    if extra:
        raise InputError(f"{path}: unknown data keys: {', '.join(extra)}")
    pipeline = data.get("pipeline", {})
    fields = {
        "out_dir": str, "model": str, "split": float, "folds": int,
        "seed": int, "fake_policy": str, "max_depth": int, "min_leaf": int,
        "gamma": float, "c": float,
    }
    extra = sorted(set(pipeline) - set(fields))
    if extra:
        raise InputError(f"{path}: unknown pipeline keys: {', '.join(extra)}")
    for key, cast in fields.items():
        if key in pipeline:
            try:
                kwargs[key] = cast(pipeline[key])
            except (TypeError, ValueError) as exc:
                raise InputError(f"{path}: bad pipeline.{key}: {exc}") from exc
    if "synth" in data:
        known = {f.name for f in dataclasses.fields(synthmod.SynthConfig)}
        extra = sorted(set(data["synth"]) - known)
        if extra:
            raise InputError(f"{path}: unknown synth keys: {', '.join(extra)}")
        kwargs["synth"] = replace(synthmod.SynthConfig(), **data["synth"])
    cfg = PipelineConfig(**kwargs)
    cfg.validate()
    return cfg


@click.group()
def main() -> None:
    """Suspicious-link detection pipeline."""
    level = os.environ.get("MCCLINK_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--config", type=click.Path(), default=None,
              help="TOML file of generator settings.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--out-dir", type=click.Path(), required=True)
def synth(config, seed, out_dir) -> None:
    """Write a synthetic community: edges.csv, nodes.csv, profiles.csv."""

    def work(tracker: list[Path]) -> None:
        cfg = synthmod.load_config(config) if config else synthmod.default_config()
        if seed is not None:
            cfg = replace(cfg, seed=seed)
        graph, profiles = synthmod.synthesize(cfg)
        out = Path(out_dir)
        with _atomic(out / "edges.csv", tracker) as tmp:
            save_edge_csv(graph, tmp)
        with _atomic(out / "nodes.csv", tracker) as tmp:
            save_node_csv(graph, tmp)
        with _atomic(out / "profiles.csv", tracker) as tmp:
            save_profiles_csv(
                [profiles[node] for node in graph.nodes], tmp
            )
        click.echo(
            f"synth: {graph.node_count} nodes ({len(graph.fake_nodes)} fake), "
            f"{graph.edge_count} edges -> {out}"
        )

    _run_command(work)


@main.command()
@click.option("--edges", type=click.Path(), required=True)
@click.option("--nodes", type=click.Path(), required=True)
@click.option("--profiles", type=click.Path(), required=True)
@click.option("--dictionary", type=click.Path(), default=None)
@click.option("--stopwords", type=click.Path(), default=None)
@click.option("--fake-policy", type=click.Choice(["include", "drop"]),
              default="include")
@click.option("--out", type=click.Path(), required=True)
def features(edges, nodes, profiles, dictionary, stopwords, fake_policy, out) -> None:
    """Build the per-edge feature table CSV."""

    def work(tracker: list[Path]) -> None:
        g, prof, dico, stop = _load_inputs(edges, nodes, profiles, dictionary, stopwords)
        table = build_feature_table(
            g, prof, dictionary=dico, stopwords=stop, fake_policy=fake_policy
        )
        with _atomic(Path(out), tracker) as tmp:
            table.to_csv(tmp)
        click.echo(f"features: {len(table)} rows -> {out}")

    _run_command(work)


@main.command()
@click.option("--features", "features_path", type=click.Path(), required=True)
@click.option("--model", type=click.Choice(MODEL_CHOICES), default="tree")
@click.option("--split", type=float, default=0.25,
              help="Held-out fraction; 0 trains on every row.")
@click.option("--folds", type=int, default=10)
@click.option("--seed", type=int, default=0)
@click.option("--max-depth", type=int, default=12)
@click.option("--min-leaf", type=int, default=2)
@click.option("--gamma", type=float, default=None,
              help="Fix the RBF width instead of grid searching.")
@click.option("--c", type=float, default=None,
              help="Fix the SVM penalty instead of grid searching.")
@click.option("--out-dir", type=click.Path(), required=True)
def train(features_path, model, split, folds, seed, max_depth, min_leaf,
          gamma, c, out_dir) -> None:
    """Fit a classifier on the training split; write model.json and cv.json."""

    def work(tracker: list[Path]) -> None:
        cfg = PipelineConfig(model=model, split=split, folds=folds, seed=seed,
                             max_depth=max_depth, min_leaf=min_leaf,
                             gamma=gamma, c=c)
        cfg.validate()
        table = _load_table(features_path)
        train_part, _ = _split(table, split, seed)
        fitted, payload = _fit(train_part, model, cfg, seed)
        out = Path(out_dir)
        with _atomic(out / "model.json", tracker) as tmp:
            save_model(fitted, tmp)
        _write_json(payload, out / "cv.json", tracker)
        click.echo(
            f"train: {model} on {len(train_part)} rows, "
            f"cv accuracy {payload['cv']['mean_accuracy']:.4f} -> {out}"
        )

    _run_command(work)


@main.command("eval")
@click.option("--features", "features_path", type=click.Path(), required=True)
@click.option("--model", "model_path", type=click.Path(), required=True)
@click.option("--split", type=float, default=0.25,
              help="Must match the value used by train.")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), required=True)
@click.option("--roc-out", type=click.Path(), default=None)
def eval_cmd(features_path, model_path, split, seed, out, roc_out) -> None:
    """Evaluate a trained model on the held-out split."""

    def work(tracker: list[Path]) -> None:
        if not (0.0 <= split < 1.0):
            raise InputError(f"split must be in [0,1), got {split}")
        table = _load_table(features_path)
        model = load_model(model_path)
        _, test_part = _split(table, split, seed)
        labels, scores = model.predict_matrix(test_part.matrix)
        report = evaluate(labels.tolist(), test_part.labels.tolist(), scores.tolist())
        with _atomic(Path(out), tracker) as tmp:
            tmp.write_text(report.to_json(), encoding="utf-8")
        if roc_out is not None:
            with _atomic(Path(roc_out), tracker) as tmp:
                roc_to_csv(report.roc, tmp)
        click.echo(
            f"eval: accuracy {report.accuracy:.4f} auroc {report.auroc:.4f} "
            f"on {len(test_part)} rows -> {out}"
        )

    _run_command(work)


@main.command()
@click.option("--features", "features_path", type=click.Path(), required=True)
@click.option("--model", "model_path", type=click.Path(), required=True)
@click.option("--out", type=click.Path(), required=True)
def score(features_path, model_path, out) -> None:
    """Rank every edge by suspicion score, most suspicious first."""

    def work(tracker: list[Path]) -> None:
        table = _load_table(features_path)
        model = load_model(model_path)
        rows = _score_rows(table, model)
        _write_suspicion_csv(rows, Path(out), tracker)
        flagged = sum(1 for r in rows if r[4] == 1)
        click.echo(f"score: {flagged}/{len(rows)} edges flagged -> {out}")

    _run_command(work)


@main.command()
@click.option("--config", type=click.Path(), default=None,
              help="Pipeline TOML; flags override its values.")
@click.option("--model", type=click.Choice(MODEL_CHOICES), default=None)
@click.option("--split", type=float, default=None)
@click.option("--folds", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out-dir", type=click.Path(), default=None)
def run(config, model, split, folds, seed, out_dir) -> None:
    """Full pipeline: data, features, train, eval, score."""

    def work(tracker: list[Path]) -> None:
        cfg = load_pipeline_config(config) if config else PipelineConfig()
        overrides = {}
        if model is not None:
            overrides["model"] = model
        if split is not None:
            overrides["split"] = split
        if folds is not None:
            overrides["folds"] = folds
        if seed is not None:
            overrides["seed"] = seed
        if out_dir is not None:
            overrides["out_dir"] = out_dir
        if overrides:
            cfg = replace(cfg, **overrides)
        cfg.validate()
        out = Path(cfg.out_dir)

        log.info("stage: data")
        if cfg.edges:
            g, prof, dico, stop = _load_inputs(
                cfg.edges, cfg.nodes, cfg.profiles, cfg.dictionary, cfg.stopwords
            )
        else:
            graph_profiles = synthmod.synthesize(cfg.synth)
            g, prof_map = graph_profiles
            with _atomic(out / "edges.csv", tracker) as tmp:
                save_edge_csv(g, tmp)
            with _atomic(out / "nodes.csv", tracker) as tmp:
                save_node_csv(g, tmp)
            with _atomic(out / "profiles.csv", tracker) as tmp:
                save_profiles_csv([prof_map[node] for node in g.nodes], tmp)
            prof, dico, stop = prof_map, None, None

        log.info("stage: features")
        table = build_feature_table(
            g, prof, dictionary=dico, stopwords=stop, fake_policy=cfg.fake_policy
        )
        with _atomic(out / "features.csv", tracker) as tmp:
            table.to_csv(tmp)
        # stages below re-read the CSV so `run` composes exactly like
        # separate features/train/eval invocations
        table = _load_table(out / "features.csv")

        log.info("stage: train")
        train_part, test_part = _split(table, cfg.split, cfg.seed)
        fitted, payload = _fit(train_part, cfg.model, cfg, cfg.seed)
        with _atomic(out / "model.json", tracker) as tmp:
            save_model(fitted, tmp)
        _write_json(payload, out / "cv.json", tracker)

        log.info("stage: eval")
        labels, scores = fitted.predict_matrix(test_part.matrix)
        report = evaluate(labels.tolist(), test_part.labels.tolist(), scores.tolist())
        with _atomic(out / "report.json", tracker) as tmp:
            tmp.write_text(report.to_json(), encoding="utf-8")
        with _atomic(out / "roc.csv", tracker) as tmp:
            roc_to_csv(report.roc, tmp)

        log.info("stage: score")
        rows = _score_rows(table, fitted)
        _write_suspicion_csv(rows, out / "suspicious.csv", tracker)

        click.echo(f"run: {len(table)} edges, model {cfg.model} -> {out}")
        click.echo(
            f"  cv accuracy {payload['cv']['mean_accuracy']:.4f} | test "
            f"accuracy {report.accuracy:.4f} precision {report.precision:.4f} "
            f"recall {report.recall:.4f} f {report.f_measure:.4f} "
            f"fpr {report.fpr:.4f} auroc {report.auroc:.4f}"
        )
        flagged = sum(1 for r in rows if r[4] == 1)
        click.echo(f"  {flagged}/{len(rows)} edges flagged suspicious")

    _run_command(work)


if __name__ == "__main__":
    main()
