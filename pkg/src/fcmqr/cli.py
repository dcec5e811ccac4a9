"""Command-line entry point: ``fcmqr <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import acv as acv_mod
from . import classify, fcm, oracles, pipeline, roughset
from .dataset import (
    DatasetError,
    load_csv,
    load_decision_table,
    load_matrix,
    write_csv,
    write_decision_table,
)
from .discretize import DiscretizerConfig, discretize_attribute, discretize_table, within_cluster_sse
from .synth import generate_synthetic

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------- manifest / output


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class Run:
    """Collects inputs and outputs of one invocation for the manifest."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: dict[str, str] = {}
        self.outputs: list[str] = []

    def input(self, path: str) -> str:
        self.inputs[path] = sha256_file(path)
        return path

    def manifest(self) -> dict:
        config = {
            k: v for k, v in sorted(vars(self.args).items())
            if k not in ("func", "no_timestamp") and not callable(v)
        }
        out = {
            "tool": "fcmqr",
            "version": __version__,
            "command": self.args.command,
            "config": config,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }
        if not self.args.no_timestamp:
            out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return out

    def emit_json(self, payload: dict, stdout: bool = False) -> None:
        out = None if stdout else getattr(self.args, "out", None)
        if out:
            self.outputs.append(out)
        payload = {**payload, "manifest": self.manifest()}
        text = json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n"
        self._write(text, out)

    def emit_csv(self, header: list, rows: list[list], path: str | None = None) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        target = path if path is not None else getattr(self.args, "out", None)
        if target:
            self.outputs.append(target)
        self._write(buf.getvalue(), target)

    @staticmethod
    def _write(text: str, path: str | None) -> None:
        if path:
            Path(path).write_text(text)
        else:
            sys.stdout.write(text)


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _sibling_csv(path: str) -> str:
    return str(Path(path).with_suffix(".csv"))


# ---------------------------------------------------------------- argument groups


def _attr_list(text: str, names) -> list[int]:
    """Attribute indices or names, comma separated."""
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if tok in names:
            out.append(list(names).index(tok))
        elif tok.lstrip("-").isdigit() and 0 <= int(tok) < len(names):
            out.append(int(tok))
        else:
            raise UsageError(f"unknown attribute {tok!r}")
    return out


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(p):
    p.add_argument("--out", help="write the primary output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=None,
                   help="defaults to csv when --out ends in .csv, else json")
    p.add_argument("--no-timestamp", action="store_true", help="omit the manifest timestamp")


def _add_data(p, required=True):
    p.add_argument("--data", required=required, help="expression CSV")
    p.add_argument("--label", default="class", help="name of the class-label row/column")
    p.add_argument("--orientation", choices=("features", "samples"), default="features")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--standardize", action="store_true", help="z-score each feature before use")


def _add_fcm(p, k_default):
    p.add_argument("--k", default=k_default, help="cluster count(s), comma separated")
    p.add_argument("--fuzzifier", type=float, default=2.0)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)


def _add_disc(p):
    p.add_argument("--bins", type=int, default=3)
    p.add_argument("--disc-max-iters", type=int, default=100)
    p.add_argument("--disc-method", choices=("optimal", "lloyd"), default="optimal")


def _disc_config(args) -> DiscretizerConfig:
    return DiscretizerConfig(bins=args.bins, max_iters=args.disc_max_iters, method=args.disc_method)


def _load(run: Run, path: str, args):
    ds = load_csv(run.input(path), orientation=args.orientation, label=args.label, delimiter=args.delimiter)
    return ds.standardized() if args.standardize else ds


# ---------------------------------------------------------------- subcommands


def cmd_ingest(run: Run, args) -> int:
    ds = _load(run, args.data, args)
    if args.out:
        write_csv(ds, args.out, orientation="features", label=args.label)
        run.outputs.append(args.out)
    summary = {
        "n_features": ds.n_features,
        "n_samples": ds.n_samples,
        "classes": ds.class_counts(),
        "value_range": [float(ds.values.min()), float(ds.values.max())] if ds.values.size else None,
    }
    run.emit_json(summary, stdout=True)
    return EXIT_OK


def cmd_cluster(run: Run, args) -> int:
    ds = _load(run, args.data, args)
    ks = _int_list(args.k)
    if len(ks) != 1:
        raise UsageError("cluster takes a single --k value")
    config = fcm.FcmConfig(c=ks[0], m=args.fuzzifier, epsilon=args.epsilon, max_iters=args.max_iters, seed=args.seed)
    res = fcm.fit(ds.values, config)
    if args.format == "csv":
        rows = [
            [fid, int(res.hard_assignment[i]), f"{res.memberships[res.hard_assignment[i], i]:.6f}"]
            for i, fid in enumerate(ds.feature_ids)
        ]
        run.emit_csv(["feature", "cluster", "membership"], rows)
        return EXIT_OK
    payload = {
        "k": config.c,
        "iterations": res.iterations,
        "converged": res.converged,
        "sizes": res.sizes(),
        "assignment": {fid: int(c) for fid, c in zip(ds.feature_ids, res.hard_assignment)},
        "objective_final": res.objective_trace[-1],
    }
    if args.trace:
        payload["objective_trace"] = res.objective_trace
    run.emit_json(payload)
    return EXIT_OK


def cmd_discretize(run: Run, args) -> int:
    ds = _load(run, args.data, args)
    table = discretize_table(ds, _disc_config(args))
    if args.format == "csv":
        if args.out:
            write_decision_table(table, args.out, label=args.label)
            run.outputs.append(args.out)
        else:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["id", *table.attribute_ids, args.label])
            for o, oid in enumerate(table.object_ids):
                w.writerow([oid, *table.cells[o].tolist(), table.class_names[table.decision[o]]])
            sys.stdout.write(buf.getvalue())
        return EXIT_OK
    run.emit_json({
        "objects": list(table.object_ids),
        "attributes": list(table.attribute_ids),
        "bins_used": [int(table.cells[:, a].max()) + 1 for a in range(table.n_attributes)],
        "cells": table.cells.tolist(),
        "decision": [table.class_names[d] for d in table.decision],
    })
    return EXIT_OK


def _reduct_payload(table, red) -> dict:
    return {
        "reduct": [table.attribute_ids[a] for a in red.attributes],
        "reduct_indices": red.attributes,
        "gamma_trace": [float(g) for g in red.gamma_trace],
        "gamma_trace_exact": [str(g) for g in red.gamma_trace],
        "gamma": float(red.gamma),
        "gamma_full": float(red.gamma_full),
        "reached_full": red.reached_full,
    }


def cmd_reduct(run: Run, args) -> int:
    table = load_decision_table(run.input(args.table), label=args.label)
    red = roughset.quick_reduct(table)
    run.emit_json(_reduct_payload(table, red))
    return EXIT_OK


def cmd_acv(run: Run, args) -> int:
    matrix = load_matrix(run.input(args.matrix))
    run.emit_json(acv_mod.acv(matrix).to_dict())
    return EXIT_OK


def _evaluate_all(train_ds, features, kinds, test_ds=None):
    return [classify.evaluate(kind, train_ds, features, test=test_ds) for kind in kinds]


def cmd_evaluate(run: Run, args) -> int:
    scheme = args.scheme
    if scheme.startswith("split:"):
        parts = scheme[len("split:"):].split(",")
        if len(parts) != 2:
            raise UsageError("--scheme split needs two paths: split:train.csv,test.csv")
        train_ds, test_ds = _load(run, parts[0], args), _load(run, parts[1], args)
    elif scheme == "loocv":
        if not args.data:
            raise UsageError("--data is required for the loocv scheme")
        train_ds = _load(run, args.data, args)
        test_ds = _load(run, args.test_data, args) if args.test_data else None
    else:
        raise UsageError(f"unknown scheme {scheme!r}")
    kinds = classify.KINDS if args.classifier == "all" else [classify.resolve_kind(k) for k in args.classifier.split(",")]
    features = [f.strip() for f in args.features.split(",")] if args.features else None
    reports = _evaluate_all(train_ds, features, kinds, test_ds)
    header = ["Classifier", "Accuracy", "Scheme", "Features"]
    rows = [[r.classifier, f"{r.accuracy:.4f}", r.scheme, len(r.features)] for r in reports]
    if args.format == "csv":
        run.emit_csv(header, rows)
        return EXIT_OK
    if args.out:
        run.emit_csv(header, rows, path=_sibling_csv(args.out))
    run.emit_json({"evaluations": [r.to_dict() for r in reports]})
    return EXIT_OK


def cmd_pipeline(run: Run, args) -> int:
    ds = _load(run, args.data, args)
    config = pipeline.PipelineConfig(
        k_values=tuple(_int_list(args.k)),
        fuzzifier=args.fuzzifier,
        epsilon=args.epsilon,
        max_iters=args.max_iters,
        disc=_disc_config(args),
        acv_tolerance=args.acv_tol,
        seed=args.seed,
        singleton_significant=not args.strict_singletons,
        threads=args.threads,
    )
    try:
        report = pipeline.run(ds, config)
    except pipeline.EmptyResultError as exc:
        payload = exc.report.to_dict()
        payload["error"] = str(exc)
        run.emit_json(payload)
        return EXIT_DATA
    payload = report.to_dict()
    gid = report.g_best_id
    if len(ds.classes) == 2:
        payload["rule"] = str(classify.induce_threshold_rule(ds, gid))
    if args.test_data:
        test_ds = _load(run, args.test_data, args)
        payload["g_best_evaluation"] = [r.to_dict() for r in _evaluate_all(ds, [gid], classify.KINDS, test_ds)]
    if args.format == "csv":
        run.emit_csv(pipeline.SUMMARY_HEADER, report.summary_rows())
        return EXIT_OK
    if args.out:
        run.emit_csv(pipeline.SUMMARY_HEADER, report.summary_rows(), path=_sibling_csv(args.out))
    run.emit_json(payload)
    return EXIT_OK


def cmd_oracle(run: Run, args) -> int:
    what = args.what
    if what == "reducts":
        table = load_decision_table(run.input(args.table), label=args.label)
        res = roughset.exhaustive_reducts(table, max_attrs=args.max_attrs)
        names = table.attribute_ids
        run.emit_json({
            "all_reducts": [[names[a] for a in sorted(X)] for X in res.all_reducts],
            "min_reducts": [[names[a] for a in sorted(X)] for X in res.min_reducts],
            "core": [names[a] for a in sorted(res.core)],
            "gamma_full": float(res.gamma_full),
        })
    elif what == "gamma":
        table = load_decision_table(run.input(args.table), label=args.label)
        attrs = _attr_list(args.attrs, table.attribute_ids) if args.attrs else list(range(table.n_attributes))
        g = oracles.gamma_of(table, attrs)
        run.emit_json({"attrs": attrs, "gamma": float(g), "gamma_exact": str(g)})
    elif what == "acv":
        matrix = load_matrix(run.input(args.matrix))
        row, col = oracles.naive_acv(matrix.tolist())
        run.emit_json({"row_term": row, "col_term": col, "max": max(row, col)})
    elif what == "kmeans1d":
        values = [float(v) for v in args.values.split(",")]
        labels = discretize_attribute(values, DiscretizerConfig(bins=args.bins))
        run.emit_json({
            "labels": labels.tolist(),
            "sse": within_cluster_sse(values, labels),
            "exhaustive_optimum": oracles.best_contiguous_sse(values, args.bins),
        })
    return EXIT_OK


def cmd_synth(run: Run, args) -> int:
    ds = generate_synthetic(args.genes, args.samples, planted_pair=not args.no_plant, noise_seed=args.seed)
    if args.out:
        write_csv(ds, args.out, label=args.label)
        run.outputs.append(args.out)
        run.emit_json({"written": args.out, "n_features": ds.n_features, "n_samples": ds.n_samples}, stdout=True)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", *ds.sample_ids])
        w.writerow([args.label, *ds.labels])
        for fid, row in zip(ds.feature_ids, ds.values):
            w.writerow([fid, *(repr(float(v)) for v in row)])
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fcmqr", description="FCM + Quick Reduct gene selection toolkit")
    parser.add_argument("--version", action="version", version=f"fcmqr {__version__}")
    parser.add_argument("--threads", type=int, default=1, help="worker cap for parallel stages")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("ingest", help="validate and summarise an expression file")
    _add_data(p)
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("cluster", help="fuzzy c-means over genes")
    _add_data(p)
    _add_fcm(p, "5")
    p.add_argument("--trace", action="store_true", help="include the objective trace")
    _add_common(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("discretize", help="per-gene k-means discretization")
    _add_data(p)
    _add_disc(p)
    _add_common(p)
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("reduct", help="quick reduct on a decision table")
    p.add_argument("--table", required=True)
    p.add_argument("--label", default="class")
    _add_common(p)
    p.set_defaults(func=cmd_reduct)

    p = sub.add_parser("acv", help="average correlation value of a matrix")
    p.add_argument("--matrix", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_acv)

    p = sub.add_parser("evaluate", help="classifier accuracy on a feature subset")
    _add_data(p, required=False)
    p.add_argument("--test-data")
    p.add_argument("--features", help="comma-separated feature ids (default: all)")
    p.add_argument("--classifier", default="all")
    p.add_argument("--scheme", default="loocv", help="loocv | split:train.csv,test.csv")
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pipeline", help="full FCM + Quick Reduct + ACV selection")
    _add_data(p)
    p.add_argument("--test-data", help="independent test set for scoring the selected gene")
    _add_fcm(p, "5,7")
    _add_disc(p)
    p.add_argument("--acv-tol", type=float, default=1e-6)
    p.add_argument("--strict-singletons", action="store_true", help="treat single-gene reducts as non-significant")
    _add_common(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("oracle", help="brute-force reference computations")
    p.add_argument("what", choices=("reducts", "gamma", "acv", "kmeans1d"))
    p.add_argument("--table")
    p.add_argument("--label", default="class")
    p.add_argument("--attrs", help="attribute indices or names for gamma, comma separated")
    p.add_argument("--max-attrs", type=int, default=20)
    p.add_argument("--matrix")
    p.add_argument("--values", help="comma-separated reals for kmeans1d")
    p.add_argument("--bins", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("synth", help="generate a planted-marker synthetic dataset")
    p.add_argument("--genes", type=int, default=100)
    p.add_argument("--samples", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-plant", action="store_true")
    p.add_argument("--label", default="class")
    _add_common(p)
    p.set_defaults(func=cmd_synth)
    return parser


_ORACLE_NEEDS = {"reducts": "table", "gamma": "table", "acv": "matrix", "kmeans1d": "values"}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("FCMQR_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "oracle" and getattr(args, _ORACLE_NEEDS[args.what]) is None:
            parser.error(f"oracle {args.what} needs --{_ORACLE_NEEDS[args.what]}")
        if args.threads < 1:
            parser.error("--threads must be >= 1")
        if hasattr(args, "format") and args.format is None:
            out = getattr(args, "out", None) or ""
            args.format = "csv" if out.lower().endswith(".csv") else "json"
        return args.func(Run(args), args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (DatasetError, FileNotFoundError, KeyError, ValueError, ArithmeticError,
            roughset.GuardExceededError) as exc:
        print(f"fcmqr: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
