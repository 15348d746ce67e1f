#pragma once

#include "treekey/core.hpp"
#include "treekey/filter.hpp"
#include "treekey/graph.hpp"
#include "treekey/keypoints.hpp"
#include "treekey/matching.hpp"
#include "treekey/segment.hpp"

#include <optional>

namespace treekey {

/// Extraction parameters. Serializable as key=value text; the hash of the
/// canonical text identifies the configuration a record was produced with.
struct PipelineConfig {
    // channel selection
    bool use_gray = true, use_yuv = true, use_hsv = true, use_orig = true;
    // filter bank
    bool filt_laplacian = true, filt_sobel = true, filt_gabor = true;
    std::vector<std::string> filter_sources = {"gray"};
    // segmentation
    int kmeans_k = 2;
    ForegroundRule fg_rule = ForegroundRule::Darker;
    // skeleton cleanup
    int min_spur = 5;
    // key-point search
    double alpha = 0.1;
    std::int64_t max_steps = 0;  // 0 = auto
    // scoring
    double tau = 5.0;
    // weight learning at enroll time
    bool learn_weights = true;
    std::uint64_t aug_seed = 7;
};

std::string config_to_text(const PipelineConfig& cfg);
PipelineConfig config_from_text(const std::string& text);
PipelineConfig load_config(const std::string& path);
std::string config_hash(const PipelineConfig& cfg);  // 16 hex chars

/// One extracted pattern plus its provenance.
struct PatternRecord {
    std::string id;
    PatternGraph graph;
    FeatureTable features;
    std::optional<FeatureWeights> weights;
    std::string source;       // image path the record came from
    std::string config_hash;  // hash of the producing configuration
    Geometry geometry;
    TraceStats stats;
    double extract_seconds = 0.0;
};

/// Intermediate products, for debugging overlays and the CLI.
struct ExtractArtifacts {
    Plane fused;
    Mask mask;
    Mask skeleton;
};

/// Full pipeline: channel expansion, filtering, fusion, segmentation,
/// thinning, spur pruning, seeding and trace, then graph and features.
/// Errors from any stage are rethrown as PipelineError with a stage label.
PatternRecord extract(const RasterImage& img, const PipelineConfig& cfg,
                      const std::string& source_name = "",
                      ExtractArtifacts* artifacts = nullptr);
PatternRecord extract_file(const std::string& image_path, const PipelineConfig& cfg,
                           ExtractArtifacts* artifacts = nullptr);

}  // namespace treekey
