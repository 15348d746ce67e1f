#pragma once

#include "treekey/core.hpp"
#include "treekey/graph.hpp"

namespace treekey {

/// Nonnegative per-block feature weights summing to 1.
struct FeatureWeights {
    Eigen::VectorXd w;  // size kFeatureBlocks

    static FeatureWeights uniform();
    bool valid() const;
};

std::string weights_to_text(const FeatureWeights& w);
FeatureWeights weights_from_text(const std::string& text);

/// Per-block dissimilarity vector between node i of `a` and node j of `b`.
/// Each entry is d_E + d_cos for that block:
///   d_E   = |u - v| / (|u| + |v|)   (0 when both vectors are zero),
///   d_cos = (1 - cos(u, v)) / 2     (0 when either vector is zero),
/// both in [0,1]; categorical blocks use the 0/1 indicator for both terms.
Eigen::VectorXd block_distances(const NormalizedFeatures& a, int i,
                                const NormalizedFeatures& b, int j);

/// Weighted node dissimilarity: dot(w, block_distances).
double feature_distance(const NormalizedFeatures& a, int i,
                        const NormalizedFeatures& b, int j,
                        const FeatureWeights& w);

/// Pairwise dissimilarities; entry (k, l) compares node k of R with node l
/// of T.
Eigen::MatrixXd distance_matrix(const NormalizedFeatures& R,
                                const NormalizedFeatures& T,
                                const FeatureWeights& w);

// ---------------------------------------------------------------------------
// Weight learning from augmented copies of one reference graph
// ---------------------------------------------------------------------------

/// Coordinate-space perturbation of a graph. Node identity is preserved, so
/// the correspondence to the source graph is the identity map.
struct GraphAugment {
    double rotation_deg = 0.0;    // about the canvas center
    double scale = 1.0;           // about the canvas center
    double perspective_ratio = 0.0;
    double jitter_px = 0.0;       // i.i.d. Gaussian coordinate noise
    double index_shift = 0.0;     // fraction of n: cyclic shift of search order
    double level_jitter_prob = 0.0;
    std::uint64_t rng_seed = 0;
};

PatternGraph augment_graph(const PatternGraph& g, const GraphAugment& spec);

/// A default perturbation battery (rotations, scales, keystone, jitter and
/// search-order shifts) used when enrolling a pattern.
std::vector<PatternGraph> default_augment_set(const PatternGraph& g,
                                              std::uint64_t seed);

/// Learns block weights from a reference graph and augmented copies with
/// identity node correspondence. Per block f and sample j, A(f, j) is the
/// mean over nodes of the block dissimilarity; weights combine the leading
/// principal-component loading of A (uniform when degenerate) with a
/// robustness tilt max(0.05, 1 - rowmean): w_f proportional to
/// tilt_f * (1 + |loading_f|), normalized to sum 1.
/// Throws InsufficientDataError with fewer than 2 augmented samples.
FeatureWeights learn_weights(const PatternGraph& reference,
                             const std::vector<PatternGraph>& aug_set);

// ---------------------------------------------------------------------------
// Assignment
// ---------------------------------------------------------------------------

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row of R, col of T), row-sorted
    double total_cost = 0.0;
};

/// Minimum-cost one-to-one assignment (Kuhn-Munkres, O(n^3)). Rectangular
/// matrices are padded with 1 + max entry; padded pairs are dropped, so
/// |pairs| == min(rows, cols).
Assignment assign_munkres(const Eigen::MatrixXd& S);

std::string distance_matrix_to_csv(const Eigen::MatrixXd& S);

}  // namespace treekey
