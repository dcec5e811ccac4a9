"""End-to-end hybrid FCM + Quick Reduct gene selection.

For every cluster count k: cluster genes with FCM, discretize each hard
cluster, run Quick Reduct on it, score the reduct genes with ACV, and pool
the reduct genes of clusters whose ACV is 1. The pools of all k are then
intersected and the intersection member with the best leave-one-out stump
accuracy becomes the selected gene.
"""

from __future__ import annotations

import logging
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import acv as acv_mod
from . import classify, fcm
from .dataset import ExpressionDataset, subset_features
from .discretize import DiscretizerConfig, discretize_table
from .roughset import quick_reduct

logger = logging.getLogger(__name__)


class EmptyResultError(RuntimeError):
    """No cluster count produced a significant gene; ``report`` holds the details."""

    def __init__(self, message: str, report: "PipelineReport"):
        super().__init__(message)
        self.report = report


def derive_seed(seed: int, stage: str, k: int) -> int:
    """Per-(stage, k) seed, independent of the order in which k values run."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(stage.encode()), k))
    return int(ss.generate_state(1, dtype=np.uint32)[0])


@dataclass(frozen=True)
class PipelineConfig:
    k_values: tuple[int, ...] = (5, 7)
    fuzzifier: float = 2.0
    epsilon: float = 1e-6
    max_iters: int = 300
    disc: DiscretizerConfig = field(default_factory=DiscretizerConfig)
    acv_tolerance: float = 1e-6
    seed: int = 0
    singleton_significant: bool = True
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k_values", tuple(int(k) for k in self.k_values))
        if not self.k_values:
            raise ValueError("k_values must not be empty")
        if any(k < 1 for k in self.k_values):
            raise ValueError(f"every k must be >= 1, got {list(self.k_values)}")

    def fcm_config(self, k: int) -> fcm.FcmConfig:
        return fcm.FcmConfig(
            c=k,
            m=self.fuzzifier,
            epsilon=self.epsilon,
            max_iters=self.max_iters,
            seed=derive_seed(self.seed, "fcm", k),
        )

    def to_dict(self) -> dict:
        return {
            "k_values": list(self.k_values),
            "fuzzifier": self.fuzzifier,
            "epsilon": self.epsilon,
            "max_iters": self.max_iters,
            "bins": self.disc.bins,
            "disc_max_iters": self.disc.max_iters,
            "disc_method": self.disc.method,
            "acv_tolerance": self.acv_tolerance,
            "seed": self.seed,
            "singleton_significant": self.singleton_significant,
            "seed_derivation": "SeedSequence(entropy=seed, spawn_key=(crc32(stage), k)), stage='fcm'",
        }


@dataclass
class ClusterRecord:
    k: int
    index: int
    members: list[int]
    reduct: list[int]
    acv: acv_mod.AcvReport | None
    significant: bool
    reached_full: bool
    gamma: float
    gamma_full: float
    reason: str = ""

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class KRun:
    k: int
    clusters: list[ClusterRecord]
    pool: list[int]
    fcm_iterations: int
    fcm_converged: bool


@dataclass
class PipelineReport:
    feature_ids: tuple[str, ...]
    k_runs: list[KRun]
    intersection: list[int]
    g_best: int | None
    g_best_accuracy: float | None
    fallback: bool
    config: PipelineConfig

    @property
    def g_best_id(self) -> str | None:
        return None if self.g_best is None else self.feature_ids[self.g_best]

    def to_dict(self) -> dict:
        ids = self.feature_ids
        return {
            "k_runs": [
                {
                    "k": run.k,
                    "fcm_iterations": run.fcm_iterations,
                    "fcm_converged": run.fcm_converged,
                    "clusters": [
                        {
                            "i": rec.index,
                            "size": rec.size,
                            "reduct": [ids[g] for g in rec.reduct],
                            "acv": None if rec.acv is None else rec.acv.acv,
                            "significant": rec.significant,
                            "reached_full": rec.reached_full,
                            "gamma": rec.gamma,
                            "gamma_full": rec.gamma_full,
                            "reason": rec.reason,
                        }
                        for rec in run.clusters
                    ],
                    "pool": [ids[g] for g in run.pool],
                }
                for run in self.k_runs
            ],
            "intersection": [ids[g] for g in self.intersection],
            "g_best": self.g_best_id,
            "g_best_loocv_accuracy": self.g_best_accuracy,
            "fallback": self.fallback,
            "config": self.config.to_dict(),
        }

    def summary_rows(self) -> list[list]:
        """Rows shaped like the per-k cluster tables: k, cluster, size, reduct, ACV."""
        rows = []
        for run in self.k_runs:
            for rec in run.clusters:
                rows.append([
                    run.k,
                    f"Cluster {rec.index + 1}",
                    rec.size,
                    " ".join(self.feature_ids[g] for g in rec.reduct),
                    "" if rec.acv is None else f"{rec.acv.acv:.4f}",
                    int(rec.significant),
                ])
        return rows


SUMMARY_HEADER = ["k", "Cluster", "All Genes", "QR Selected Genes", "ACV", "Significant"]


def score_cluster(dataset: ExpressionDataset, k: int, index: int, members, config: PipelineConfig) -> ClusterRecord:
    members = [int(g) for g in members]
    if not members:
        return ClusterRecord(k, index, [], [], None, False, True, 0.0, 0.0, reason="empty")
    view = subset_features(dataset, members)
    table = discretize_table(view, config.disc)
    red = quick_reduct(table)
    reduct = [members[a] for a in red.attributes]
    reason = "" if red.reached_full else "stalled"
    report = None
    if len(reduct) >= 2:
        report = acv_mod.acv(dataset.values[reduct, :])
        significant = acv_mod.is_significant(report.acv, config.acv_tolerance)
    elif len(reduct) == 1:
        significant = config.singleton_significant
        reason = reason or "singleton"
    else:
        significant = False
        reason = reason or "empty-reduct"
    return ClusterRecord(
        k=k,
        index=index,
        members=members,
        reduct=reduct,
        acv=report,
        significant=significant,
        reached_full=red.reached_full,
        gamma=float(red.gamma),
        gamma_full=float(red.gamma_full),
        reason=reason,
    )


def run_for_k(dataset: ExpressionDataset, k: int, config: PipelineConfig) -> KRun:
    if k > dataset.n_features:
        raise ValueError(f"k={k} exceeds the {dataset.n_features} available genes")
    result = fcm.fit(dataset.values, config.fcm_config(k))
    records = [
        score_cluster(dataset, k, j, result.cluster_members(j), config) for j in range(k)
    ]
    pool = sorted({g for rec in records if rec.significant for g in rec.reduct})
    logger.info(
        "k=%d: sizes %s, pool %s", k, [rec.size for rec in records],
        [dataset.feature_ids[g] for g in pool],
    )
    return KRun(k, records, pool, result.iterations, result.converged)


def stump_loocv_accuracy(dataset: ExpressionDataset, gene: int) -> float:
    x = dataset.values[gene][:, None]
    y = dataset.class_indices
    preds = classify.loocv_predictions("decision-table", x, y)
    return classify.accuracy_percent(int(np.sum(np.asarray(preds) == y)), y.size)


def pick_best(dataset: ExpressionDataset, candidates) -> tuple[int, float]:
    """Highest LOOCV stump accuracy; lowest gene index wins ties."""
    best = None
    for g in sorted(candidates):
        score = stump_loocv_accuracy(dataset, g)
        if best is None or score > best[1]:
            best = (g, score)
    return best


def run(dataset: ExpressionDataset, config: PipelineConfig | None = None) -> PipelineReport:
    config = config or PipelineConfig()
    if config.threads > 1 and len(config.k_values) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            runs = list(pool.map(lambda k: run_for_k(dataset, k, config), config.k_values))
    else:
        runs = [run_for_k(dataset, k, config) for k in config.k_values]

    pools = [set(r.pool) for r in runs]
    inter = sorted(set.intersection(*pools))
    report = PipelineReport(dataset.feature_ids, runs, inter, None, None, False, config)
    if inter:
        report.g_best, report.g_best_accuracy = pick_best(dataset, inter)
        return report
    union = set.union(*pools)
    if not union:
        raise EmptyResultError("no significant cluster for any k", report)
    report.fallback = True
    report.g_best, report.g_best_accuracy = pick_best(dataset, union)
    return report
