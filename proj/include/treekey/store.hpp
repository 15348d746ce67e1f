#pragma once

#include "treekey/alignment.hpp"
#include "treekey/pipeline.hpp"

namespace treekey {

/// Outcome of matching one test graph against one reference graph.
struct MatchOutcome {
    Assignment assignment;
    RigidTransform transform;
    MatchScore score;
    double similarity = 0.0;  // max(0, 100 * (1 - eta / r_mec(reference)))
};

/// Normalizes the pair, computes weighted distances, solves the assignment
/// and aligns the matched points. `weights` defaults to uniform.
MatchOutcome match_graphs(const PatternGraph& reference, const PatternGraph& test,
                          const FeatureWeights& weights, double tau);

// ---------------------------------------------------------------------------
// Pattern store: a directory of graph files plus a manifest
// ---------------------------------------------------------------------------

struct ManifestEntry {
    std::string id;
    std::string graph_file;
    std::string config_hash;
    std::string weights_file;  // "-" when absent
    std::string source;
};

/// Writes the record under content-addressed filenames and appends a manifest
/// line. Throws ConflictError if the id is already enrolled.
std::string enroll(const PatternRecord& rec, const std::string& store_dir);

std::vector<ManifestEntry> read_manifest(const std::string& store_dir);
PatternRecord load_record(const std::string& store_dir, const ManifestEntry& e);

struct IdentifyRow {
    std::string id;
    double similarity = 0.0;
    double eta = 0.0;
    double accuracy_pct = 0.0;
    int n_pairs = 0;
};

struct IdentifyReport {
    std::vector<IdentifyRow> ranked;  // similarity descending
    double extract_seconds = 0.0;
    double match_seconds = 0.0;
};

/// Matches a test record against every enrolled pattern (manifest order) and
/// ranks by similarity. `weights_override`, when set, replaces stored or
/// uniform weights. Throws Error on an empty store.
IdentifyReport identify(const PatternRecord& test, const std::string& store_dir,
                        double tau,
                        const std::optional<FeatureWeights>& weights_override = {});

std::string identify_report_to_csv(const IdentifyReport& r);

// ---------------------------------------------------------------------------
// Benchmark sweep
// ---------------------------------------------------------------------------

struct BenchGrid {
    std::vector<double> rotations_deg = {30, 70, 100, 200, 300};
    std::vector<double> perspective_ratios = {0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> noise_vars = {0.01, 0.1, 0.2};
};

struct BenchResult {
    std::vector<std::string> ids;
    Eigen::MatrixXd similarity;           // ids x ids
    std::string robustness_csv;           // kind,param,mean_accuracy,mean_eta
    std::string summary_csv;              // id,keypoints,extract_seconds,self_similarity
};

/// Cross-matches every enrolled pattern, sweeps the augmentation grid by
/// re-extracting perturbed source images, and reports per-pattern stats.
/// Writes similarity_matrix.csv/.png, robustness.csv and summary.csv under
/// out_dir when it is non-empty. Requires >= 2 enrolled patterns.
BenchResult bench(const std::string& store_dir, const BenchGrid& grid,
                  const PipelineConfig& cfg, const std::string& out_dir);

}  // namespace treekey
