#pragma once

#include "treekey/core.hpp"

namespace treekey {

enum class ForegroundRule {
    Darker,    // cluster with the smallest centroid (default)
    Brighter,  // cluster with the largest centroid
    Largest,   // most populous cluster
    Smallest,  // least populous cluster
};

ForegroundRule foreground_rule_from_string(const std::string& s);
std::string to_string(ForegroundRule r);

struct KMeans1DResult {
    std::vector<double> centroids;   // one per cluster
    std::vector<int> assignment;     // cluster index per sample
    std::vector<long> counts;        // samples per cluster
    double wcss = 0.0;               // within-cluster sum of squares
    int iterations = 0;
};

/// Lloyd's algorithm on scalar samples. Deterministic: the first centroid is
/// drawn with a fixed-seed RNG, the rest by farthest-point (maximin) init;
/// iteration stops when centroid motion < 1e-6 or after 100 rounds.
/// Throws DegenerateInputError if the samples are constant.
KMeans1DResult kmeans_1d(const std::vector<double>& values, int k,
                         std::uint32_t seed = 42);

/// Two-way (or k-way) segmentation of a scalar field by 1-D k-means over
/// pixel values; the foreground cluster is picked by `rule`.
/// Throws DegenerateInputError on constant fields and SegmentationError when
/// the selected foreground is empty.
Mask segment_kmeans(const Plane& field, int k, ForegroundRule rule = ForegroundRule::Darker);

}  // namespace treekey
