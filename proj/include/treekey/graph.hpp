#pragma once

#include "treekey/core.hpp"
#include "treekey/keypoints.hpp"

#include <iosfwd>

namespace treekey {

/// Key points plus parent/child topology; the pattern's abstract form.
struct PatternGraph {
    std::vector<KeyPoint> nodes;             // node 0 is the root
    std::vector<std::vector<int>> children;  // parent -> child indices
    int width = 0, height = 0;               // canvas
};

/// Builds the adjacency and validates structure: node 0 must be the unique
/// root, parent links must resolve and be acyclic. Throws StructuralError.
PatternGraph build_graph(const std::vector<KeyPoint>& kps, int width, int height);

/// Per-node morphology features. List-valued raw attributes are reduced to
/// order-free numbers so distances do not depend on traversal order.
struct NodeFeatures {
    double x = 0, y = 0;
    double level = 0;
    double angle_deg = 0;       // atan2(child - parent), degrees in (-180, 180]
    double rel_length = 0;      // Euclidean distance to the parent
    double dparent_x = 0, dparent_y = 0;  // signed offsets to the parent
    double dist_root = 0;       // Euclidean distance to the root position
    double child_count = 0;
    double child_levels = 0;    // mean level of children (0 when childless)
    double sibling_count = 0;
    double search_index = 0;
    KeyPointKind type = KeyPointKind::Root;
    KeyPointKind parent_type = KeyPointKind::Root;  // own kind for the root
};

struct FeatureTable {
    std::vector<NodeFeatures> rows;
    bool empty() const { return rows.empty(); }
    std::size_t size() const { return rows.size(); }
};

FeatureTable compute_features(const PatternGraph& g);

// ---------------------------------------------------------------------------
// Feature blocks (unit for distance weighting)
// ---------------------------------------------------------------------------

inline constexpr int kNumericDims = 12;   // columns of the numeric matrix
inline constexpr int kFeatureBlocks = 12; // weighted blocks (10 numeric + 2 categorical)

enum class FeatureBlock : int {
    Position = 0,   // (x, y)
    Level,
    Angle,
    RelLength,
    DistToParent,   // (dx, dy)
    DistToRoot,
    ChildCount,
    ChildLevels,
    SiblingCount,
    SearchIndex,
    Type,           // categorical
    ParentType,     // categorical
};

const char* feature_block_name(FeatureBlock b);
const char* feature_block_name(int b);

/// Numeric feature rows scaled to [0,1] per dimension, plus categorical kinds.
/// Numeric column layout: x, y, level, angle, rel_length, dparent_x,
/// dparent_y, dist_root, child_count, child_levels, sibling_count, index.
struct NormalizedFeatures {
    Eigen::MatrixXd numeric;  // n x kNumericDims
    std::vector<KeyPointKind> type;
    std::vector<KeyPointKind> parent_type;
    std::size_t size() const { return type.size(); }
};

/// Joint min-max normalization over the union of two tables; a dimension that
/// is constant across both maps to 0.5 everywhere.
std::pair<NormalizedFeatures, NormalizedFeatures>
normalize_features(const FeatureTable& a, const FeatureTable& b);

// ---------------------------------------------------------------------------
// Serialization (versioned line format, see docs/FORMATS.md)
// ---------------------------------------------------------------------------

std::string graph_to_tpg(const PatternGraph& g);
PatternGraph graph_from_tpg(const std::string& text);
PatternGraph load_graph(const std::string& path);
void save_graph(const PatternGraph& g, const std::string& path);

}  // namespace treekey
