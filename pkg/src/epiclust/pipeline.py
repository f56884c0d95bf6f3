"""The two studies: cluster stability across time windows, and feature association.

``temporal_stability`` runs every (preprocessing, algorithm) pair over the
fixed windows of the series and records the pairwise alignment cost of the
window clusterings. ``select_technique`` picks the pair whose clusters are
the most stable in time, skipping any pair that produced a degenerate
(single-dominant-cluster) window. ``feature_association`` then scores every
scalar feature against the per-window epidemic clusters of the chosen
technique, with a seeded Monte Carlo random-label null per cell.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .align import (
    AlignmentResult,
    BalanceDiagnostic,
    BaselineResult,
    balance_check,
    best_permutation_dissimilarity,
    random_baseline,
)
from .cluster import (
    ClusterAssignment,
    KMeansConfig,
    SpectralConfig,
    cluster_scalar_feature,
    kmeans,
    spectral_cluster,
)
from .ingest import EpicurveMatrix, FeatureTable, split_windows
from .preprocess import apply_preprocess

PREP_SCOPES = ("per_window", "full_series")


@dataclass(frozen=True)
class StabilityMatrix:
    """Window-by-window alignment costs for one (preprocessing, algorithm) pair."""

    prep: str
    algorithm: str
    costs: np.ndarray
    balance: tuple[BalanceDiagnostic, ...]

    @property
    def window_count(self) -> int:
        return self.costs.shape[0]

    @property
    def mean_offdiag(self) -> float:
        n = self.window_count
        if n < 2:
            return 0.0
        return float((self.costs.sum() - np.trace(self.costs)) / (n * (n - 1)))

    @property
    def degenerate_windows(self) -> int:
        return sum(1 for diag in self.balance if not diag.balanced)


@dataclass(frozen=True)
class AssociationCell:
    """One (feature, window) comparison: alignment, null baseline, feature balance."""

    feature: str
    window: int
    alignment: AlignmentResult
    baseline: BaselineResult
    feature_balance: BalanceDiagnostic


@dataclass(frozen=True)
class AssociationReport:
    """Full feature x window grid of SM1/SM2 results for one chosen technique."""

    prep: str
    algorithm: str
    k: int
    feature_names: tuple[str, ...]
    window_count: int
    cells: tuple[AssociationCell, ...]
    epidemic_labels: tuple[tuple[int, ...], ...]

    def cell(self, feature: str, window: int) -> AssociationCell:
        return self.cells[self.feature_names.index(feature) * self.window_count + window]


def _cluster_window(points, algo, k, kmeans_cfg, spectral_cfg) -> ClusterAssignment:
    if algo == "kmeans":
        return kmeans(points, replace(kmeans_cfg, k=k))
    if algo == "spectral":
        return spectral_cluster(points, replace(spectral_cfg, k=k, kmeans=kmeans_cfg))
    raise ValueError(f"unknown algorithm {algo!r}; expected 'kmeans' or 'spectral'")


def _window_assignments(
    m, prep, algo, k, kmeans_cfg, spectral_cfg, window_len, prep_scope
) -> list[ClusterAssignment]:
    if prep_scope not in PREP_SCOPES:
        raise ValueError(f"unknown prep scope {prep_scope!r}; expected one of {PREP_SCOPES}")
    if prep_scope == "full_series":
        windows = split_windows(apply_preprocess(m, prep), window_len)
    else:
        windows = [apply_preprocess(w, prep) for w in split_windows(m, window_len)]
    return [
        _cluster_window(w.values, algo, k, kmeans_cfg, spectral_cfg) for w in windows
    ]


def temporal_stability(
    m: EpicurveMatrix,
    preps,
    algos,
    k: int,
    kmeans_cfg: KMeansConfig | None = None,
    spectral_cfg: SpectralConfig | None = None,
    *,
    window_len: int = 30,
    metric: str = "squared",
    balance_threshold: float = 0.8,
    prep_scope: str = "per_window",
) -> list[StabilityMatrix]:
    """Pairwise cross-window dissimilarity for every (prep, algo) combination.

    Each window is preprocessed (per window by default), its regions are
    clustered on their in-window day vectors, and every window pair (i < j)
    is aligned; the cost fills both (i, j) and (j, i), so the matrix is
    symmetric with a zero diagonal. Balance diagnostics are attached per
    window.
    """
    kmeans_cfg = KMeansConfig(k=k) if kmeans_cfg is None else kmeans_cfg
    spectral_cfg = SpectralConfig(k=k) if spectral_cfg is None else spectral_cfg
    if m.n_days < 2 * window_len:
        raise ValueError(
            f"{m.n_days} days yield fewer than 2 windows of {window_len}; "
            "cross-window comparison needs at least 2"
        )
    results = []
    for prep in preps:
        for algo in algos:
            assignments = _window_assignments(
                m, prep, algo, k, kmeans_cfg, spectral_cfg, window_len, prep_scope
            )
            count = len(assignments)
            costs = np.zeros((count, count))
            for i in range(count):
                for j in range(i + 1, count):
                    cost = best_permutation_dissimilarity(
                        assignments[i].labels, assignments[j].labels, k, metric
                    ).cost
                    costs[i, j] = costs[j, i] = cost
            balance = tuple(balance_check(a, balance_threshold) for a in assignments)
            results.append(StabilityMatrix(prep, algo, costs, balance))
    return results


def select_technique(results) -> tuple[str, str]:
    """The (prep, algo) pair with the most time-stable, non-degenerate clusters.

    Pairs with any degenerate window are excluded; among the rest the lowest
    mean off-diagonal cost wins, first-listed on ties. If every pair is
    degenerate somewhere, the least-degenerate one is returned under a
    warning.
    """
    results = list(results)
    if not results:
        raise ValueError("no stability results to select from")
    clean = [(i, r) for i, r in enumerate(results) if r.degenerate_windows == 0]
    if clean:
        _, best = min(clean, key=lambda item: (item[1].mean_offdiag, item[0]))
    else:
        warnings.warn(
            "every technique produced at least one degenerate window; "
            "returning the least-degenerate one",
            stacklevel=2,
        )
        _, best = min(
            enumerate(results),
            key=lambda item: (item[1].degenerate_windows, item[1].mean_offdiag, item[0]),
        )
    return best.prep, best.algorithm


def feature_association(
    m: EpicurveMatrix,
    f: FeatureTable,
    chosen: tuple[str, str],
    k: int,
    kmeans_cfg: KMeansConfig | None = None,
    spectral_cfg: SpectralConfig | None = None,
    *,
    trials: int = 100,
    seed: int = 0,
    window_len: int = 30,
    metric: str = "squared",
    balance_threshold: float = 0.8,
    prep_scope: str = "per_window",
    baseline_mode: str = "uniform",
) -> AssociationReport:
    """Score every feature against the per-window epidemic clusters.

    Per window the regions are clustered with the chosen technique; per
    feature the regions are clustered on the scalar values with ascending
    label order. SM1 aligns the feature labels against the window's epidemic
    labels; SM2 repeats the alignment with ``trials`` random labelings in
    place of the feature (RNG keyed per (seed, window, feature) cell), so
    deviation = SM2 - SM1 measures how far above chance the agreement is.
    """
    if f.region_names != m.region_names:
        raise ValueError(
            "feature table regions are not aligned with the epicurve matrix; "
            "load them via load_features"
        )
    prep, algo = chosen
    kmeans_cfg = KMeansConfig(k=k) if kmeans_cfg is None else kmeans_cfg
    spectral_cfg = SpectralConfig(k=k) if spectral_cfg is None else spectral_cfg
    epidemic = _window_assignments(
        m, prep, algo, k, kmeans_cfg, spectral_cfg, window_len, prep_scope
    )
    scalar = [
        cluster_scalar_feature(f.values[:, i], k, kmeans_cfg)
        for i in range(len(f.feature_names))
    ]
    cells = []
    for i, feature in enumerate(f.feature_names):
        feature_diag = balance_check(scalar[i], balance_threshold)
        for w, epi in enumerate(epidemic):
            alignment = best_permutation_dissimilarity(
                scalar[i].labels, epi.labels, k, metric
            )
            cell_seed = int(np.random.SeedSequence([seed, w, i]).generate_state(1)[0])
            baseline = random_baseline(
                epi.labels,
                k,
                trials,
                cell_seed,
                sm1=alignment.cost,
                metric=metric,
                mode=baseline_mode,
            )
            cells.append(AssociationCell(feature, w, alignment, baseline, feature_diag))
    return AssociationReport(
        prep,
        algo,
        k,
        f.feature_names,
        len(epidemic),
        tuple(cells),
        tuple(tuple(int(x) for x in a.labels) for a in epidemic),
    )
