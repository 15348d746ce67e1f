#include "treekey/matching.hpp"

#include "treekey/augment.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace treekey {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Numeric column spans per block (see NormalizedFeatures layout).
struct BlockSpan {
    int begin, len;
};
constexpr BlockSpan kSpans[10] = {
    {0, 2},   // position (x, y)
    {2, 1},   // level
    {3, 1},   // angle
    {4, 1},   // rel_length
    {5, 2},   // dist_to_parent (dx, dy)
    {7, 1},   // dist_to_root
    {8, 1},   // child_count
    {9, 1},   // child_levels
    {10, 1},  // sibling_count
    {11, 1},  // search_index
};

// d_E = |u-v| / (|u|+|v|), d_cos = (1 - cos)/2; both on [0,1].
inline double block_pair_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    double de = 0.0, dc = 0.0;
    if (nu + nv > 0.0) de = (u - v).norm() / (nu + nv);
    if (nu > 0.0 && nv > 0.0) dc = 0.5 * (1.0 - u.dot(v) / (nu * nv));
    return de + dc;
}

}  // namespace

FeatureWeights FeatureWeights::uniform() {
    FeatureWeights w;
    w.w = Eigen::VectorXd::Constant(kFeatureBlocks, 1.0 / kFeatureBlocks);
    return w;
}

bool FeatureWeights::valid() const {
    if (w.size() != kFeatureBlocks) return false;
    if ((w.array() < 0.0).any()) return false;
    return std::abs(w.sum() - 1.0) < 1e-9;
}

std::string weights_to_text(const FeatureWeights& w) {
    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < kFeatureBlocks; ++i)
        os << feature_block_name(i) << '=' << w.w(i) << '\n';
    return os.str();
}

FeatureWeights weights_from_text(const std::string& text) {
    FeatureWeights w;
    w.w = Eigen::VectorXd::Zero(kFeatureBlocks);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("bad weights line: " + line);
        const std::string key = line.substr(0, eq);
        const double val = std::stod(line.substr(eq + 1));
        bool found = false;
        for (int i = 0; i < kFeatureBlocks; ++i) {
            if (key == feature_block_name(i)) {
                w.w(i) = val;
                found = true;
                break;
            }
        }
        if (!found) throw IoError("unknown weight key '" + key + "'");
    }
    const double s = w.w.sum();
    if (!(s > 0.0) || (w.w.array() < 0.0).any())
        throw IoError("weights must be nonnegative with positive sum");
    w.w /= s;
    return w;
}

Eigen::VectorXd block_distances(const NormalizedFeatures& a, int i,
                                const NormalizedFeatures& b, int j) {
    if (a.numeric.cols() != kNumericDims || b.numeric.cols() != kNumericDims)
        throw ShapeError("normalized feature dimension mismatch");
    Eigen::VectorXd d(kFeatureBlocks);
    for (int f = 0; f < 10; ++f) {
        const Eigen::VectorXd u = a.numeric.row(i).segment(kSpans[f].begin, kSpans[f].len);
        const Eigen::VectorXd v = b.numeric.row(j).segment(kSpans[f].begin, kSpans[f].len);
        d(f) = block_pair_distance(u, v);
    }
    d(static_cast<int>(FeatureBlock::Type)) =
        a.type[i] == b.type[j] ? 0.0 : 2.0;  // indicator for both terms
    d(static_cast<int>(FeatureBlock::ParentType)) =
        a.parent_type[i] == b.parent_type[j] ? 0.0 : 2.0;
    return d;
}

double feature_distance(const NormalizedFeatures& a, int i, const NormalizedFeatures& b,
                        int j, const FeatureWeights& w) {
    return w.w.dot(block_distances(a, i, b, j));
}

Eigen::MatrixXd distance_matrix(const NormalizedFeatures& R, const NormalizedFeatures& T,
                                const FeatureWeights& w) {
    if (R.size() == 0 || T.size() == 0)
        throw EmptyInputError("distance_matrix: empty side");
    Eigen::MatrixXd S(R.size(), T.size());
    for (std::size_t k = 0; k < R.size(); ++k)
        for (std::size_t l = 0; l < T.size(); ++l)
            S(k, l) = feature_distance(R, static_cast<int>(k), T, static_cast<int>(l), w);
    return S;
}

// ---------------------------------------------------------------------------
// Graph augmentation and weight learning
// ---------------------------------------------------------------------------

PatternGraph augment_graph(const PatternGraph& g, const GraphAugment& spec) {
    PatternGraph out = g;
    const int n = static_cast<int>(g.nodes.size());
    const Vec2 c(0.5 * (g.width - 1), 0.5 * (g.height - 1));
    const double th = spec.rotation_deg * kPi / 180.0;
    const double ct = std::cos(th), st = std::sin(th);
    std::mt19937_64 rng(spec.rng_seed);
    std::normal_distribution<double> jitter(0.0, spec.jitter_px);

    for (KeyPoint& k : out.nodes) {
        Vec2 p(k.x, k.y);
        p = c + spec.scale * Vec2(ct * (p.x() - c.x()) - st * (p.y() - c.y()),
                                  st * (p.x() - c.x()) + ct * (p.y() - c.y()));
        if (spec.perspective_ratio > 0.0)
            p = perspective_map_point(p, spec.perspective_ratio, g.width, g.height);
        if (spec.jitter_px > 0.0) p += Vec2(jitter(rng), jitter(rng));
        k.x = p.x();
        k.y = p.y();
    }
    if (spec.index_shift > 0.0 && n > 1) {
        // Cyclic shift of the emission order, the way a rotated image shifts
        // the angular seed enumeration.
        const int shift = std::max(
            1, static_cast<int>(std::lround(spec.index_shift * n)) % n);
        for (KeyPoint& k : out.nodes) k.index = (k.index + shift) % n;
    }
    if (spec.level_jitter_prob > 0.0) {
        std::bernoulli_distribution flip(spec.level_jitter_prob);
        std::bernoulli_distribution up(0.5);
        for (std::size_t i = 1; i < out.nodes.size(); ++i)
            if (flip(rng))
                out.nodes[i].level = std::max(1, out.nodes[i].level + (up(rng) ? 1 : -1));
    }
    return out;
}

std::vector<PatternGraph> default_augment_set(const PatternGraph& g, std::uint64_t seed) {
    std::vector<GraphAugment> specs;
    for (double deg : {30.0, 70.0, 100.0, 200.0, 300.0}) {
        GraphAugment a;
        a.rotation_deg = deg;
        a.jitter_px = 1.5;
        a.index_shift = 0.37;
        a.level_jitter_prob = 0.15;
        specs.push_back(a);
    }
    for (double s : {0.85, 1.15}) {
        GraphAugment a;
        a.scale = s;
        a.jitter_px = 1.5;
        a.index_shift = 0.21;
        a.level_jitter_prob = 0.15;
        specs.push_back(a);
    }
    for (double r : {0.2, 0.4}) {
        GraphAugment a;
        a.perspective_ratio = r;
        a.jitter_px = 1.5;
        a.index_shift = 0.11;
        a.level_jitter_prob = 0.15;
        specs.push_back(a);
    }
    std::vector<PatternGraph> out;
    out.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        specs[i].rng_seed = seed + i;
        out.push_back(augment_graph(g, specs[i]));
    }
    return out;
}

FeatureWeights learn_weights(const PatternGraph& reference,
                             const std::vector<PatternGraph>& aug_set) {
    const int m = static_cast<int>(aug_set.size());
    if (m < 2) throw InsufficientDataError("need at least 2 augmented samples");
    const FeatureTable ref_table = compute_features(reference);
    const int n = static_cast<int>(ref_table.size());

    Eigen::MatrixXd A(kFeatureBlocks, m);
    for (int j = 0; j < m; ++j) {
        if (aug_set[j].nodes.size() != static_cast<std::size_t>(n))
            throw ShapeError("augmented sample has a different node count");
        const FeatureTable aug_table = compute_features(aug_set[j]);
        const auto [nr, na] = normalize_features(ref_table, aug_table);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(kFeatureBlocks);
        for (int i = 0; i < n; ++i) acc += block_distances(nr, i, na, i);
        A.col(j) = acc / static_cast<double>(n);
    }

    const Eigen::VectorXd rowmean = A.rowwise().mean();
    const Eigen::MatrixXd centered = A.colwise() - rowmean;
    const Eigen::MatrixXd cov =
        centered * centered.transpose() / static_cast<double>(m - 1);

    Eigen::VectorXd loading = Eigen::VectorXd::Constant(kFeatureBlocks, 1.0 / kFeatureBlocks);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() == Eigen::Success && es.eigenvalues()(kFeatureBlocks - 1) > 1e-12) {
        loading = es.eigenvectors().col(kFeatureBlocks - 1).cwiseAbs();
        loading /= loading.sum();
    }

    // Robustness tilt: blocks that move little under perturbation are favored;
    // the loading modulates on top of a uniform base so a perfectly stable
    // block (zero loading) still benefits from its tilt.
    FeatureWeights w;
    w.w = Eigen::VectorXd(kFeatureBlocks);
    for (int f = 0; f < kFeatureBlocks; ++f) {
        const double tilt = std::max(0.05, 1.0 - rowmean(f));
        w.w(f) = tilt * (1.0 + loading(f));
    }
    w.w /= w.w.sum();
    return w;
}

// ---------------------------------------------------------------------------
// Kuhn-Munkres assignment (potentials form, O(n^3))
// ---------------------------------------------------------------------------

Assignment assign_munkres(const Eigen::MatrixXd& S) {
    const int rows = static_cast<int>(S.rows());
    const int cols = static_cast<int>(S.cols());
    if (rows == 0 || cols == 0) throw EmptyInputError("assign_munkres: empty matrix");
    if (!S.allFinite()) throw Error("assign_munkres: non-finite entries");

    const int n = std::max(rows, cols);
    const double pad = 1.0 + S.maxCoeff();
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, pad);
    a.topLeftCorner(rows, cols) = S;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0);  // column -> row (1-based)
    std::vector<int> way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    Assignment res;
    for (int j = 1; j <= n; ++j) {
        const int i = match[j];
        if (i >= 1 && i <= rows && j <= cols) {
            res.pairs.emplace_back(i - 1, j - 1);
            res.total_cost += S(i - 1, j - 1);
        }
    }
    std::sort(res.pairs.begin(), res.pairs.end());
    return res;
}

std::string distance_matrix_to_csv(const Eigen::MatrixXd& S) {
    std::ostringstream os;
    os.precision(17);
    for (Eigen::Index r = 0; r < S.rows(); ++r) {
        for (Eigen::Index c = 0; c < S.cols(); ++c) {
            if (c) os << ',';
            os << S(r, c);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace treekey
