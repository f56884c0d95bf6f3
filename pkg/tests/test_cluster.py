"""k-means, affinity/Laplacian construction, eigengap, spectral and scalar clustering."""

import itertools

import numpy as np
import pytest

from epiclust.align import best_permutation_dissimilarity
from epiclust.cluster import (
    KMeansConfig,
    SpectralConfig,
    cluster_scalar_feature,
    eigengap_suggest_k,
    kmeans,
    laplacian,
    rbf_affinity,
    spectral_cluster,
    spectral_from_affinity,
)
from epiclust.linalg import jacobi_eigh


def blocks_affinity(sizes, within=1.0):
    """Affinity of disjoint complete components (zero cross coupling)."""
    n = sum(sizes)
    w = np.zeros((n, n))
    start = 0
    for size in sizes:
        w[start : start + size, start : start + size] = within
        start += size
    np.fill_diagonal(w, 0.0)
    return w


# --- kmeans -----------------------------------------------------------------


def test_kmeans_two_far_pairs():
    # exhaustive enumeration of 2-partitions puts {0, 0.1} | {10, 10.1} first
    km = kmeans(np.array([0.0, 0.1, 10.0, 10.1]), KMeansConfig(k=2, seed=0))
    assert km.labels[0] == km.labels[1] != km.labels[2] == km.labels[3]
    assert sorted(km.centroids[:, 0].tolist()) == [0.05, 10.05]
    assert km.inertia == pytest.approx(0.01)


def test_kmeans_k_equals_n():
    pts = np.array([[0.0], [1.0], [5.0], [9.0]])
    km = kmeans(pts, KMeansConfig(k=4, seed=1))
    assert sorted(km.labels.tolist()) == [0, 1, 2, 3]
    assert km.inertia == 0.0


def test_kmeans_identical_points():
    km = kmeans(np.full((5, 2), 3.0), KMeansConfig(k=1, seed=0))
    assert km.labels.tolist() == [0] * 5
    assert km.centroids.tolist() == [[3.0, 3.0]]
    assert km.inertia == 0.0


def test_kmeans_seed_deterministic():
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((40, 6))
    a = kmeans(pts, KMeansConfig(k=4, seed=123))
    b = kmeans(pts, KMeansConfig(k=4, seed=123))
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.centroids, b.centroids)
    assert a.inertia == b.inertia


def test_kmeans_inertia_history_non_increasing():
    rng = np.random.default_rng(17)
    for _ in range(20):
        pts = rng.standard_normal((int(rng.integers(5, 30)), 2))
        km = kmeans(pts, KMeansConfig(k=3, seed=int(rng.integers(1000))))
        hist = np.array(km.inertia_history)
        assert np.all(np.diff(hist) <= 1e-9 * np.maximum(1.0, hist[:-1]))
        assert km.inertia == hist[-1]


def test_kmeans_labels_match_nearest_final_centroid():
    rng = np.random.default_rng(2)
    pts = rng.uniform(0, 10, (30, 3))
    km = kmeans(pts, KMeansConfig(k=4, seed=9))
    d2 = ((pts[:, None, :] - km.centroids[None]) ** 2).sum(axis=2)
    assert np.array_equal(km.labels, d2.argmin(axis=1))


def test_kmeans_errors():
    with pytest.raises(ValueError, match="exceeds"):
        kmeans(np.zeros((2, 1)), KMeansConfig(k=3))
    with pytest.raises(ValueError, match="non-empty"):
        kmeans(np.zeros((0, 1)), KMeansConfig(k=1))
    with pytest.raises(ValueError):
        KMeansConfig(k=0)


# --- affinity / laplacian / eigengap -----------------------------------------


def test_rbf_identical_points_and_diagonal():
    w = rbf_affinity(np.array([[1.0, 2.0], [1.0, 2.0]]), sigma=1.0)
    assert w[0, 1] == 1.0 and w[1, 0] == 1.0
    assert w[0, 0] == 0.0 and w[1, 1] == 0.0


def test_rbf_kernel_value_at_sigma_sqrt2():
    sigma = 0.7
    pts = np.array([[0.0], [sigma * np.sqrt(2.0)]])
    w = rbf_affinity(pts, sigma=sigma)
    assert w[0, 1] == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_rbf_median_bandwidth_scale_free():
    pts = np.array([[0.0], [1.0], [2.0], [10.0]])
    w1 = rbf_affinity(pts, sigma="median")
    w2 = rbf_affinity(pts * 1000.0, sigma="median")
    assert np.allclose(w1, w2, atol=1e-12)


def test_rbf_errors():
    with pytest.raises(ValueError, match="at least 2"):
        rbf_affinity(np.array([[1.0]]))
    with pytest.raises(ValueError, match="sigma"):
        rbf_affinity(np.zeros((3, 1)), sigma=-1.0)


def test_laplacian_two_node_path():
    lap = laplacian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert lap.tolist() == [[1.0, -1.0], [-1.0, 1.0]]
    assert np.allclose(jacobi_eigh(lap).eigenvalues, [0.0, 2.0], atol=1e-12)


def test_laplacian_rows_sum_to_zero():
    rng = np.random.default_rng(1)
    w = rbf_affinity(rng.standard_normal((8, 2)), sigma=1.0)
    lap = laplacian(w)
    assert np.abs(lap.sum(axis=1)).max() < 1e-12


def test_laplacian_disconnected_pairs_fiedler_zero():
    lap = laplacian(blocks_affinity([2, 2]))
    evs = jacobi_eigh(lap).eigenvalues
    assert (evs < 1e-9).sum() == 2  # zero multiplicity counts components
    assert abs(evs[1]) < 1e-9  # Fiedler value is 0


def test_laplacian_component_count_matches_zero_multiplicity():
    rng = np.random.default_rng(6)
    for sizes in ([3, 4], [2, 2, 5], [1, 6, 3]):
        w = blocks_affinity(sizes, within=float(rng.uniform(0.5, 2.0)))
        for kind in ("unnormalized", "symmetric_normalized"):
            evs = jacobi_eigh(laplacian(w, kind)).eigenvalues
            assert (np.abs(evs) < 1e-9).sum() == len(sizes)


def test_laplacian_normalized_isolated_vertex():
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = 1.0  # vertex 2 isolated
    lap = laplacian(w, "symmetric_normalized")
    assert lap[2, 2] == 0.0
    evs = jacobi_eigh(lap).eigenvalues
    assert (np.abs(evs) < 1e-9).sum() == 2


def test_laplacian_errors():
    with pytest.raises(ValueError, match="negative affinity entry"):
        laplacian(np.array([[0.0, -0.5], [-0.5, 0.0]]))
    with pytest.raises(ValueError, match="zero diagonal"):
        laplacian(np.array([[1.0, 0.2], [0.2, 0.0]]))


def test_eigengap_examples():
    assert eigengap_suggest_k([0, 0.01, 0.02, 5, 6], k_max=4) == 3
    assert eigengap_suggest_k([0, 10], k_max=1) == 1
    assert eigengap_suggest_k([0, 0, 4, 5], k_max=3) == 2


def test_eigengap_tie_breaks_small_and_clamps():
    assert eigengap_suggest_k([0.0, 1.0, 2.0, 3.0], k_max=3) == 1  # equal gaps
    assert eigengap_suggest_k([0.0, 1.0, 5.0], k_max=10) == 2  # k_max clamped
    with pytest.raises(ValueError, match="at least 2"):
        eigengap_suggest_k([1.0], k_max=1)


# --- spectral -----------------------------------------------------------------


def test_spectral_disconnected_components_recovered():
    w = blocks_affinity([5, 7])
    truth = [0] * 5 + [1] * 7
    sp = spectral_from_affinity(w, SpectralConfig(k=2, kmeans=KMeansConfig(k=2, seed=0)))
    assert best_permutation_dissimilarity(sp.labels, truth, 2).cost == 0.0
    assert sp.suggested_k == 2


def test_spectral_matches_kmeans_on_far_blobs():
    pts = np.array([0.0, 0.1, 0.2, 50.0, 50.1, 50.2])
    sp = spectral_cluster(pts, SpectralConfig(k=2, sigma=1.0, kmeans=KMeansConfig(k=2, seed=1)))
    km = kmeans(pts, KMeansConfig(k=2, seed=1))
    assert best_permutation_dissimilarity(sp.labels, km.labels, 2).cost == 0.0


def test_spectral_k1_all_zero():
    sp = spectral_cluster(np.arange(5.0), SpectralConfig(k=1))
    assert sp.labels.tolist() == [0] * 5


def test_spectral_row_permutation_invariance():
    rng = np.random.default_rng(12)
    pts = np.vstack(
        [rng.normal(0, 0.1, (6, 2)), rng.normal(8, 0.1, (5, 2)), rng.normal(20, 0.1, (7, 2))]
    )
    base = spectral_cluster(pts, SpectralConfig(k=3, kmeans=KMeansConfig(k=3, seed=4)))
    perm = rng.permutation(len(pts))
    shuffled = spectral_cluster(pts[perm], SpectralConfig(k=3, kmeans=KMeansConfig(k=3, seed=4)))
    # undo the shuffle and compare as partitions
    unshuffled = np.empty_like(shuffled.labels)
    unshuffled[perm] = shuffled.labels
    assert best_permutation_dissimilarity(unshuffled, base.labels, 3).cost == 0.0


def test_spectral_normalized_variant_runs():
    pts = np.array([0.0, 0.1, 9.0, 9.1])
    sp = spectral_cluster(
        pts, SpectralConfig(k=2, laplacian="symmetric_normalized", kmeans=KMeansConfig(k=2, seed=2))
    )
    assert best_permutation_dissimilarity(sp.labels, [0, 0, 1, 1], 2).cost == 0.0


# --- ordered scalar clustering --------------------------------------------------


def exhaustive_scalar_optimum(values, k):
    """Best within-cluster sum of squares over every k-labeling (independent oracle)."""
    values = np.asarray(values, dtype=float)
    best = np.inf
    for labels in itertools.product(range(k), repeat=len(values)):
        labels = np.array(labels)
        inertia = 0.0
        for c in range(k):
            members = values[labels == c]
            if members.size:
                inertia += ((members - members.mean()) ** 2).sum()
        best = min(best, inertia)
    return best


def test_scalar_feature_ordered_labels():
    sf = cluster_scalar_feature([1.0, 2.0, 100.0, 101.0, 50.0], 3)
    assert sf.labels.tolist() == [0, 0, 2, 2, 1]
    assert sf.centroids[:, 0].tolist() == [1.5, 50.0, 100.5]
    assert sf.inertia == pytest.approx(exhaustive_scalar_optimum([1, 2, 100, 101, 50], 3))


def test_scalar_feature_trivial_cases():
    assert cluster_scalar_feature([4.0, 4.0, 4.0], 1).labels.tolist() == [0, 0, 0]
    sorted_vals = [1.0, 2.0, 8.0, 9.0, 20.0, 21.0]
    labels = cluster_scalar_feature(sorted_vals, 3).labels
    assert np.all(np.diff(labels) >= 0)  # ascending values give non-decreasing labels


def test_scalar_feature_monotone_property():
    rng = np.random.default_rng(20)
    for _ in range(20):
        vals = rng.uniform(0, 100, int(rng.integers(4, 30)))
        k = int(rng.integers(1, 4))
        labels = cluster_scalar_feature(vals, k).labels
        order = np.argsort(vals, kind="stable")
        assert np.all(np.diff(labels[order]) >= 0)


def test_scalar_feature_k_exceeds_regions():
    with pytest.raises(ValueError, match="exceeds"):
        cluster_scalar_feature([1.0, 2.0], 3)
