#include "treekey/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace treekey {

ForegroundRule foreground_rule_from_string(const std::string& s) {
    if (s == "darker") return ForegroundRule::Darker;
    if (s == "brighter") return ForegroundRule::Brighter;
    if (s == "largest") return ForegroundRule::Largest;
    if (s == "smallest") return ForegroundRule::Smallest;
    throw Error("unknown foreground rule '" + s + "'");
}

std::string to_string(ForegroundRule r) {
    switch (r) {
        case ForegroundRule::Darker: return "darker";
        case ForegroundRule::Brighter: return "brighter";
        case ForegroundRule::Largest: return "largest";
        case ForegroundRule::Smallest: return "smallest";
    }
    return "darker";
}

KMeans1DResult kmeans_1d(const std::vector<double>& values, int k, std::uint32_t seed) {
    if (k < 2) throw Error("k must be >= 2");
    const std::size_t n = values.size();
    if (n < static_cast<std::size_t>(k))
        throw Error("fewer samples than clusters");
    const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
    if (!(*mx_it - *mn_it > 0.0))
        throw DegenerateInputError("constant samples");

    // Farthest-point init: first centroid drawn with a fixed-seed RNG, each
    // next one maximizes distance to the chosen set (first index on ties).
    std::mt19937 rng(seed);
    std::vector<double> centroids;
    centroids.reserve(k);
    centroids.push_back(values[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
    std::vector<double> min_dist(n);
    while (static_cast<int>(centroids.size()) < k) {
        std::size_t far_idx = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (double c : centroids) d = std::min(d, std::abs(values[i] - c));
            min_dist[i] = d;
            if (d > far_d) {
                far_d = d;
                far_idx = i;
            }
        }
        centroids.push_back(values[far_idx]);
    }

    std::vector<int> assignment(n, 0);
    std::vector<long> counts(k, 0);
    int iter = 0;
    for (; iter < 100; ++iter) {
        // assign (ties to the lower cluster index)
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = std::abs(values[i] - centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = std::abs(values[i] - centroids[c]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            assignment[i] = best;
        }
        // update
        std::vector<double> sum(k, 0.0);
        std::fill(counts.begin(), counts.end(), 0L);
        for (std::size_t i = 0; i < n; ++i) {
            sum[assignment[i]] += values[i];
            ++counts[assignment[i]];
        }
        double motion = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its centroid
            const double nc = sum[c] / counts[c];
            motion = std::max(motion, std::abs(nc - centroids[c]));
            centroids[c] = nc;
        }
        if (motion < 1e-6) {
            ++iter;
            break;
        }
    }

    KMeans1DResult res;
    res.centroids = centroids;
    res.iterations = iter;
    // final assignment against converged centroids
    std::fill(counts.begin(), counts.end(), 0L);
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        double bd = std::abs(values[i] - centroids[0]);
        for (int c = 1; c < k; ++c) {
            const double d = std::abs(values[i] - centroids[c]);
            if (d < bd) {
                bd = d;
                best = c;
            }
        }
        assignment[i] = best;
        ++counts[best];
        wcss += (values[i] - centroids[best]) * (values[i] - centroids[best]);
    }
    res.assignment = std::move(assignment);
    res.counts = std::move(counts);
    res.wcss = wcss;
    return res;
}

Mask segment_kmeans(const Plane& field, int k, ForegroundRule rule) {
    const Eigen::Index n = field.size();
    if (n == 0) throw EmptyInputError("empty field");
    std::vector<double> values(field.data(), field.data() + n);
    const KMeans1DResult km = kmeans_1d(values, k);

    int fg = 0;
    switch (rule) {
        case ForegroundRule::Darker:
            fg = static_cast<int>(std::min_element(km.centroids.begin(), km.centroids.end()) -
                                  km.centroids.begin());
            break;
        case ForegroundRule::Brighter:
            fg = static_cast<int>(std::max_element(km.centroids.begin(), km.centroids.end()) -
                                  km.centroids.begin());
            break;
        case ForegroundRule::Largest:
            fg = static_cast<int>(std::max_element(km.counts.begin(), km.counts.end()) -
                                  km.counts.begin());
            break;
        case ForegroundRule::Smallest:
            fg = static_cast<int>(std::min_element(km.counts.begin(), km.counts.end()) -
                                  km.counts.begin());
            break;
    }

    Mask mask = Mask::Zero(field.rows(), field.cols());
    long count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (km.assignment[static_cast<std::size_t>(i)] == fg) {
            mask.data()[i] = 1;
            ++count;
        }
    }
    if (count == 0) throw SegmentationError("selected foreground cluster is empty");
    return mask;
}

}  // namespace treekey
