#include "treekey/skeleton.hpp"

#include <array>
#include <set>
#include <vector>

namespace treekey {

namespace {

// 8-ring in circular order: E, NE, N, NW, W, SW, S, SE.
constexpr int kRingX[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kRingY[8] = {0, -1, -1, -1, 0, 1, 1, 1};

inline bool fg(const Mask& m, int x, int y) {
    return x >= 0 && y >= 0 && x < m.cols() && y < m.rows() && m(y, x) != 0;
}

// Neighborhood in Zhang-Suen order P2..P9 = N, NE, E, SE, S, SW, W, NW.
inline void zs_neighbors(const Mask& m, int x, int y, int p[8]) {
    p[0] = fg(m, x, y - 1);
    p[1] = fg(m, x + 1, y - 1);
    p[2] = fg(m, x + 1, y);
    p[3] = fg(m, x + 1, y + 1);
    p[4] = fg(m, x, y + 1);
    p[5] = fg(m, x - 1, y + 1);
    p[6] = fg(m, x - 1, y);
    p[7] = fg(m, x - 1, y - 1);
}

// 8-connected component labels; returns count, fills labels (-1 = background).
int label_components(const Mask& m, Eigen::ArrayXXi& labels) {
    const int h = static_cast<int>(m.rows());
    const int w = static_cast<int>(m.cols());
    labels = Eigen::ArrayXXi::Constant(h, w, -1);
    int next = 0;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!m(y, x) || labels(y, x) >= 0) continue;
            labels(y, x) = next;
            stack.push_back({x, y});
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int k = 0; k < 8; ++k) {
                    const int nx = cx + kRingX[k], ny = cy + kRingY[k];
                    if (fg(m, nx, ny) && labels(ny, nx) < 0) {
                        labels(ny, nx) = next;
                        stack.push_back({nx, ny});
                    }
                }
            }
            ++next;
        }
    }
    return next;
}

// One thinning subiteration; returns number of removed pixels. A component
// whose pixels are all flagged keeps its first pixel in scan order, so
// thinning never erases a component outright.
int zs_pass(Mask& m, int phase) {
    const int h = static_cast<int>(m.rows());
    const int w = static_cast<int>(m.cols());
    Mask flagged = Mask::Zero(h, w);
    bool any = false;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!m(y, x)) continue;
            int p[8];
            zs_neighbors(m, x, y, p);
            int b = 0;
            for (int k = 0; k < 8; ++k) b += p[k];
            if (b < 2 || b > 6) continue;
            int a = 0;
            for (int k = 0; k < 8; ++k)
                if (!p[k] && p[(k + 1) % 8]) ++a;
            if (a != 1) continue;
            if (phase == 0) {
                if (p[0] * p[2] * p[4] != 0) continue;  // N*E*S
                if (p[2] * p[4] * p[6] != 0) continue;  // E*S*W
            } else {
                if (p[0] * p[2] * p[6] != 0) continue;  // N*E*W
                if (p[0] * p[4] * p[6] != 0) continue;  // N*S*W
            }
            flagged(y, x) = 1;
            any = true;
        }
    }
    if (!any) return 0;

    Eigen::ArrayXXi labels;
    const int ncomp = label_components(m, labels);
    std::vector<long> total(ncomp, 0), hit(ncomp, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (m(y, x)) {
                ++total[labels(y, x)];
                if (flagged(y, x)) ++hit[labels(y, x)];
            }
    std::vector<char> keep_one(ncomp, 0);
    for (int c = 0; c < ncomp; ++c)
        if (hit[c] == total[c]) keep_one[c] = 1;

    int removed = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!flagged(y, x)) continue;
            const int c = labels(y, x);
            if (keep_one[c]) {
                keep_one[c] = 0;  // first flagged pixel of the component survives
                continue;
            }
            m(y, x) = 0;
            ++removed;
        }
    }
    return removed;
}

}  // namespace

int crossing_number(const Mask& m, int x, int y) {
    int transitions = 0;
    for (int k = 0; k < 8; ++k) {
        const bool a = fg(m, x + kRingX[k], y + kRingY[k]);
        const bool b = fg(m, x + kRingX[(k + 1) % 8], y + kRingY[(k + 1) % 8]);
        if (!a && b) ++transitions;
    }
    return transitions;
}

Mask thin(const Mask& mask) {
    if (foreground_count(mask) == 0) throw EmptyInputError("mask has no foreground");
    Mask m = mask;
    while (true) {
        const int r1 = zs_pass(m, 0);
        const int r2 = zs_pass(m, 1);
        if (r1 + r2 == 0) break;
    }
    return m;
}

Mask prune_spurs(const Mask& skel, int min_len) {
    if (min_len <= 0) return skel;
    Mask m = skel;
    const int h = static_cast<int>(m.rows());
    const int w = static_cast<int>(m.cols());

    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::pair<int, int>> to_remove;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!m(y, x) || crossing_number(m, x, y) != 1) continue;
                // Walk from the endpoint through path pixels; stop when the
                // walk reaches a branching area (>=2 unwalked neighbors) or
                // runs out (pure path).
                std::vector<std::pair<int, int>> path{{x, y}};
                std::set<std::pair<int, int>> walked{{x, y}};
                bool at_junction = false;
                int cx = x, cy = y;
                while (true) {
                    std::vector<std::pair<int, int>> cand;
                    for (int k = 0; k < 8; ++k) {
                        const int nx = cx + kRingX[k], ny = cy + kRingY[k];
                        if (fg(m, nx, ny) && !walked.count({nx, ny}))
                            cand.push_back({nx, ny});
                    }
                    if (cand.empty()) break;  // pure path component
                    if (cand.size() >= 2) {
                        at_junction = true;
                        break;
                    }
                    cx = cand[0].first;
                    cy = cand[0].second;
                    path.push_back({cx, cy});
                    walked.insert({cx, cy});
                    if (static_cast<int>(path.size()) >= min_len) break;  // long enough
                }
                if (at_junction && static_cast<int>(path.size()) < min_len)
                    to_remove.insert(path.begin(), path.end());
            }
        }
        for (const auto& [px, py] : to_remove) m(py, px) = 0;
        changed = !to_remove.empty();
    }
    return m;
}

}  // namespace treekey
