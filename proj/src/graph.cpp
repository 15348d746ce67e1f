#include "treekey/graph.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace treekey {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PatternGraph build_graph(const std::vector<KeyPoint>& kps, int width, int height) {
    if (kps.empty()) throw EmptyInputError("build_graph: no key points");
    const int n = static_cast<int>(kps.size());

    int roots = 0;
    for (const KeyPoint& k : kps)
        if (k.kind == KeyPointKind::Root) ++roots;
    if (roots != 1) throw StructuralError("graph must contain exactly one root");
    if (kps[0].kind != KeyPointKind::Root)
        throw StructuralError("node 0 must be the root");
    if (kps[0].parent != -1) throw StructuralError("root must have no parent");

    PatternGraph g;
    g.nodes = kps;
    g.width = width;
    g.height = height;
    g.children.assign(n, {});
    for (int i = 0; i < n; ++i) {
        const int p = kps[i].parent;
        if (i == 0) continue;
        if (p < 0 || p >= n) throw StructuralError("dangling parent index");
        g.children[p].push_back(i);
    }
    // Parent chains must reach the root without repeating.
    for (int i = 0; i < n; ++i) {
        int cur = i, hops = 0;
        while (cur != 0) {
            cur = kps[cur].parent;
            if (++hops > n) throw StructuralError("cycle in parent links");
        }
    }
    return g;
}

FeatureTable compute_features(const PatternGraph& g) {
    const int n = static_cast<int>(g.nodes.size());
    FeatureTable t;
    t.rows.resize(n);
    const KeyPoint& root = g.nodes[0];
    for (int i = 0; i < n; ++i) {
        const KeyPoint& k = g.nodes[i];
        NodeFeatures& f = t.rows[i];
        f.x = k.x;
        f.y = k.y;
        f.level = k.level;
        f.search_index = k.index;
        f.type = k.kind;
        if (k.parent >= 0) {
            const KeyPoint& p = g.nodes[k.parent];
            f.dparent_x = k.x - p.x;
            f.dparent_y = k.y - p.y;
            f.rel_length = std::hypot(f.dparent_x, f.dparent_y);
            f.angle_deg = std::atan2(f.dparent_y, f.dparent_x) * 180.0 / kPi;
            f.parent_type = p.kind;
            f.sibling_count =
                static_cast<double>(g.children[k.parent].size()) - 1.0;
        } else {
            f.parent_type = k.kind;
        }
        f.dist_root = std::hypot(k.x - root.x, k.y - root.y);
        f.child_count = static_cast<double>(g.children[i].size());
        if (!g.children[i].empty()) {
            double sum = 0.0;
            for (int c : g.children[i]) sum += g.nodes[c].level;
            f.child_levels = sum / static_cast<double>(g.children[i].size());
        }
    }
    return t;
}

const char* feature_block_name(FeatureBlock b) {
    switch (b) {
        case FeatureBlock::Position: return "position";
        case FeatureBlock::Level: return "level";
        case FeatureBlock::Angle: return "angle";
        case FeatureBlock::RelLength: return "rel_length";
        case FeatureBlock::DistToParent: return "dist_to_parent";
        case FeatureBlock::DistToRoot: return "dist_to_root";
        case FeatureBlock::ChildCount: return "child_count";
        case FeatureBlock::ChildLevels: return "child_levels";
        case FeatureBlock::SiblingCount: return "sibling_count";
        case FeatureBlock::SearchIndex: return "search_index";
        case FeatureBlock::Type: return "type";
        case FeatureBlock::ParentType: return "parent_type";
    }
    return "?";
}

const char* feature_block_name(int b) {
    return feature_block_name(static_cast<FeatureBlock>(b));
}

namespace {

Eigen::MatrixXd numeric_rows(const FeatureTable& t) {
    Eigen::MatrixXd m(t.size(), kNumericDims);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const NodeFeatures& f = t.rows[i];
        m.row(i) << f.x, f.y, f.level, f.angle_deg, f.rel_length, f.dparent_x,
            f.dparent_y, f.dist_root, f.child_count, f.child_levels,
            f.sibling_count, f.search_index;
    }
    return m;
}

}  // namespace

std::pair<NormalizedFeatures, NormalizedFeatures>
normalize_features(const FeatureTable& a, const FeatureTable& b) {
    if (a.empty() || b.empty())
        throw EmptyInputError("normalize_features: empty table");
    Eigen::MatrixXd ma = numeric_rows(a);
    Eigen::MatrixXd mb = numeric_rows(b);
    for (int d = 0; d < kNumericDims; ++d) {
        const double lo = std::min(ma.col(d).minCoeff(), mb.col(d).minCoeff());
        const double hi = std::max(ma.col(d).maxCoeff(), mb.col(d).maxCoeff());
        if (hi > lo) {
            ma.col(d) = (ma.col(d).array() - lo) / (hi - lo);
            mb.col(d) = (mb.col(d).array() - lo) / (hi - lo);
        } else {
            ma.col(d).setConstant(0.5);
            mb.col(d).setConstant(0.5);
        }
    }
    NormalizedFeatures na, nb;
    na.numeric = std::move(ma);
    nb.numeric = std::move(mb);
    for (const NodeFeatures& f : a.rows) {
        na.type.push_back(f.type);
        na.parent_type.push_back(f.parent_type);
    }
    for (const NodeFeatures& f : b.rows) {
        nb.type.push_back(f.type);
        nb.parent_type.push_back(f.parent_type);
    }
    return {std::move(na), std::move(nb)};
}

std::string graph_to_tpg(const PatternGraph& g) {
    const FeatureTable t = compute_features(g);
    std::ostringstream os;
    os << "TPG1 " << g.width << ' ' << g.height << ' ' << g.nodes.size() << '\n';
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const KeyPoint& k = g.nodes[i];
        const NodeFeatures& f = t.rows[i];
        os << k.index << ' ' << format_double(k.x) << ' ' << format_double(k.y) << ' '
           << to_string(k.kind) << ' ' << k.parent << ' ' << k.level << ' '
           << format_double(f.angle_deg) << ' ' << format_double(f.rel_length) << ' '
           << format_double(f.dist_root) << ' '
           << static_cast<long>(f.child_count) << ' '
           << static_cast<long>(f.sibling_count) << '\n';
    }
    return os.str();
}

PatternGraph graph_from_tpg(const std::string& text) {
    std::istringstream is(text);
    std::string magic;
    int w = 0, h = 0;
    std::size_t n = 0;
    if (!(is >> magic >> w >> h >> n) || magic != "TPG1")
        throw IoError("not a TPG1 graph");
    std::vector<KeyPoint> kps(n);
    for (std::size_t i = 0; i < n; ++i) {
        KeyPoint& k = kps[i];
        std::string kind;
        double angle, rel, droot;
        long cc, sc;
        if (!(is >> k.index >> k.x >> k.y >> kind >> k.parent >> k.level >> angle >>
              rel >> droot >> cc >> sc))
            throw IoError("truncated TPG1 node list");
        k.kind = keypoint_kind_from_string(kind);
    }
    return build_graph(kps, w, h);
}

PatternGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return graph_from_tpg(os.str());
}

void save_graph(const PatternGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << graph_to_tpg(g);
}

}  // namespace treekey
