#include "treekey/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace treekey {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Fixed neighbor order (scan order) used everywhere a window inspects its
// 8-neighborhood; part of the deterministic trace semantics.
constexpr int kNbrX[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kNbrY[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

inline bool fg(const Mask& m, int x, int y) {
    return x >= 0 && y >= 0 && x < m.cols() && y < m.rows() && m(y, x) != 0;
}

double angle_of(const Vec2& c, double x, double y) {
    double a = std::atan2(y - c.y(), x - c.x());
    if (a < 0) a += 2.0 * kPi;
    return a;
}

// Midpoint circle rasterization (8-connected ring), deduplicated.
std::vector<Eigen::Vector2i> raster_circle(int cx, int cy, int r) {
    std::set<std::pair<int, int>> pts;
    int x = r, y = 0;
    int err = 1 - r;
    while (x >= y) {
        const int octants[8][2] = {{x, y},  {y, x},  {-y, x},  {-x, y},
                                   {-x, -y}, {-y, -x}, {y, -x},  {x, -y}};
        for (auto& o : octants) pts.insert({cx + o[0], cy + o[1]});
        ++y;
        if (err < 0) {
            err += 2 * y + 1;
        } else {
            --x;
            err += 2 * (y - x) + 1;
        }
    }
    std::vector<Eigen::Vector2i> v;
    v.reserve(pts.size());
    for (auto& p : pts) v.emplace_back(p.first, p.second);
    return v;
}

std::vector<Eigen::Vector2i> seeds_on_ring(const Mask& skel, const Geometry& geom,
                                           double radius) {
    const int cx = static_cast<int>(std::lround(geom.center.x()));
    const int cy = static_cast<int>(std::lround(geom.center.y()));
    const int r = std::max(1, static_cast<int>(std::lround(radius)));

    std::vector<Eigen::Vector2i> ring = raster_circle(cx, cy, r);
    // Ring pixels in angular order about the (rounded) center; the ring is
    // star-shaped, so this is the traversal order along the circle.
    std::sort(ring.begin(), ring.end(), [&](const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
        return std::atan2(a.y() - cy, a.x() - cx) < std::atan2(b.y() - cy, b.x() - cx);
    });

    const int n = static_cast<int>(ring.size());
    std::vector<char> on(n, 0);
    bool any = false;
    for (int i = 0; i < n; ++i) {
        on[i] = fg(skel, ring[i].x(), ring[i].y());
        any = any || on[i];
    }
    if (!any) return {};

    // Group circularly contiguous (and 8-adjacent) foreground runs.
    auto adjacent = [&](int i, int j) {
        return std::abs(ring[i].x() - ring[j].x()) <= 1 &&
               std::abs(ring[i].y() - ring[j].y()) <= 1;
    };
    std::vector<int> run_id(n, -1);
    int runs = 0;
    for (int i = 0; i < n; ++i) {
        if (!on[i]) continue;
        const int prev = (i + n - 1) % n;
        if (on[prev] && run_id[prev] >= 0 && adjacent(prev, i))
            run_id[i] = run_id[prev];
        else
            run_id[i] = runs++;
    }
    // Wrap-around: merge the last run into the first if they touch.
    if (runs > 1) {
        int first = -1, last = -1;
        for (int i = 0; i < n; ++i)
            if (on[i]) {
                first = i;
                break;
            }
        for (int i = n - 1; i >= 0; --i)
            if (on[i]) {
                last = i;
                break;
            }
        if (run_id[first] != run_id[last] && adjacent(last, first)) {
            const int from = run_id[last], to = run_id[first];
            for (int i = 0; i < n; ++i)
                if (run_id[i] == from) run_id[i] = to;
            --runs;
        }
    }

    // One representative per run: the pixel closest to the exact circle.
    std::map<int, Eigen::Vector2i> best;
    std::map<int, double> best_err;
    for (int i = 0; i < n; ++i) {
        if (!on[i]) continue;
        const double d = (Vec2(ring[i].x(), ring[i].y()) - geom.center).norm();
        const double e = std::abs(d - radius);
        auto it = best_err.find(run_id[i]);
        if (it == best_err.end() || e < it->second) {
            best_err[run_id[i]] = e;
            best[run_id[i]] = ring[i];
        }
    }
    std::vector<Eigen::Vector2i> seeds;
    seeds.reserve(best.size());
    for (auto& [id, p] : best) seeds.push_back(p);
    std::sort(seeds.begin(), seeds.end(), [&](const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
        return angle_of(geom.center, a.x(), a.y()) < angle_of(geom.center, b.x(), b.y());
    });
    return seeds;
}

}  // namespace

const char* to_string(KeyPointKind k) {
    switch (k) {
        case KeyPointKind::Root: return "root";
        case KeyPointKind::Seed: return "seed";
        case KeyPointKind::Bifurcation: return "bifurcation";
        case KeyPointKind::End: return "end";
    }
    return "end";
}

KeyPointKind keypoint_kind_from_string(const std::string& s) {
    if (s == "root") return KeyPointKind::Root;
    if (s == "seed") return KeyPointKind::Seed;
    if (s == "bifurcation") return KeyPointKind::Bifurcation;
    if (s == "end") return KeyPointKind::End;
    throw Error("unknown key point kind '" + s + "'");
}

Vec2 mass_center(const std::vector<Vec2>& pts) {
    if (pts.empty()) throw EmptyInputError("mass_center: empty point set");
    Vec2 sum = Vec2::Zero();
    for (const Vec2& p : pts) sum += p;
    return sum / static_cast<double>(pts.size());
}

double enclosing_radius(const std::vector<Vec2>& pts, const Vec2& center) {
    if (pts.empty()) throw EmptyInputError("enclosing_radius: empty point set");
    double r = 0.0;
    for (const Vec2& p : pts) r = std::max(r, (p - center).norm());
    return r;
}

double max_pairwise_distance(const std::vector<Vec2>& pts) {
    if (pts.empty()) throw EmptyInputError("max_pairwise_distance: empty point set");
    if (pts.size() == 1) return 0.0;
    // Andrew monotone chain hull, then rotating calipers.
    std::vector<Vec2> p = pts;
    std::sort(p.begin(), p.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Vec2> hull(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    const std::size_t m = hull.size();
    if (m == 1) return 0.0;
    if (m == 2) return (hull[0] - hull[1]).norm();
    double best = 0.0;
    std::size_t j = 1;
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 edge = hull[(i + 1) % m] - hull[i];
        while (true) {
            const std::size_t jn = (j + 1) % m;
            if (edge.x() * (hull[jn].y() - hull[j].y()) -
                    edge.y() * (hull[jn].x() - hull[j].x()) >
                0) {
                j = jn;
            } else {
                break;
            }
        }
        best = std::max(best, (hull[i] - hull[j]).norm());
        best = std::max(best, (hull[(i + 1) % m] - hull[j]).norm());
    }
    return best;
}

Geometry compute_geometry(const Mask& skel, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must be in (0,1)");
    const std::vector<Vec2> pts = foreground_points(skel);
    Geometry g;
    g.center = mass_center(pts);
    g.r_mec = enclosing_radius(pts, g.center);
    g.r_init = alpha * g.r_mec;
    return g;
}

std::vector<Eigen::Vector2i> seed_points(const Mask& skel, const Geometry& geom) {
    if (!(geom.r_init > 0.0)) throw Error("seed circle radius must be positive");
    std::vector<Eigen::Vector2i> seeds = seeds_on_ring(skel, geom, geom.r_init);
    if (!seeds.empty()) return seeds;
    // Fallback: halve and double alternately, staying inside (0, r_mec).
    for (int attempt = 1; attempt <= 8; ++attempt) {
        const int stage = (attempt + 1) / 2;
        const double factor = std::pow(2.0, stage);
        const double r = (attempt % 2 == 1) ? geom.r_init / factor : geom.r_init * factor;
        if (!(r > 0.5 && r < geom.r_mec)) continue;
        seeds = seeds_on_ring(skel, geom, r);
        if (!seeds.empty()) return seeds;
    }
    throw NoSeedsError("seed circle does not intersect the skeleton");
}

namespace {

// Ring order around a pixel: E, NE, N, NW, W, SW, S, SE (circular).
constexpr int kRingX8[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kRingY8[8] = {0, -1, -1, -1, 0, 1, 1, 1};

// Unvisited neighbors clustered into circularly contiguous arcs of the
// 8-ring. Each arc is one emerging branch direction; its representative is
// the first 4-connected member, or the first member.
struct BranchArcs {
    int count = 0;
    int rep_x[8], rep_y[8];
};

BranchArcs branch_arcs(const Mask& m, int x, int y) {
    bool on[8];
    bool any = false, all = true;
    for (int k = 0; k < 8; ++k) {
        on[k] = fg(m, x + kRingX8[k], y + kRingY8[k]);
        any = any || on[k];
        all = all && on[k];
    }
    BranchArcs arcs;
    if (!any) return arcs;
    if (all) {  // full ring: one arc, representative E
        arcs.count = 1;
        arcs.rep_x[0] = x + 1;
        arcs.rep_y[0] = y;
        return arcs;
    }
    // Start each arc just after a background slot.
    for (int k = 0; k < 8; ++k) {
        if (on[k] && !on[(k + 7) % 8]) {
            int rep = k;
            for (int j = k; on[j % 8] && j < k + 8; ++j) {
                if (j % 8 % 2 == 0) {  // even ring slots are 4-connected
                    rep = j % 8;
                    break;
                }
            }
            arcs.rep_x[arcs.count] = x + kRingX8[rep];
            arcs.rep_y[arcs.count] = y + kRingY8[rep];
            ++arcs.count;
        }
    }
    return arcs;
}

}  // namespace

TraceResult trace(const Mask& skel, const Geometry& geom,
                  const std::vector<Eigen::Vector2i>& seeds, const SearchConfig& cfg) {
    if (seeds.empty()) throw EmptyInputError("trace: no seeds");
    for (const auto& s : seeds)
        if (!fg(skel, s.x(), s.y()))
            throw Error("trace: seed does not lie on the skeleton");

    const std::int64_t max_steps =
        cfg.max_steps > 0 ? cfg.max_steps
                          : 4ll * skel.rows() * skel.cols();

    Mask visited_map = skel;  // pixels are cleared as they are consumed
    TraceResult res;
    TraceStats& st = res.stats;

    auto emit = [&](double x, double y, KeyPointKind kind, int parent, int level) {
        KeyPoint kp;
        kp.index = static_cast<int>(res.keypoints.size());
        kp.x = x;
        kp.y = y;
        kp.kind = kind;
        kp.parent = parent;
        kp.level = level;
        res.keypoints.push_back(kp);
        return kp.index;
    };

    emit(geom.center.x(), geom.center.y(), KeyPointKind::Root, -1, 0);

    auto consume = [&](int x, int y) {
        visited_map(y, x) = 0;
        ++st.pixels_visited;
    };

    struct Window {
        int x, y;
        int origin;  // key point the window reports to
    };

    // Claim resolution shared by seeding and by every round: a pixel claimed
    // once becomes (or keeps) a window; a pixel claimed more than once kills
    // all claimants and leaves a single merge end point.
    struct Claim {
        int x, y, origin;
        bool fresh;  // newly spawned window (counts toward windows_spawned)
    };
    auto resolve = [&](const std::vector<Claim>& claims) {
        std::vector<Window> next;
        std::map<std::pair<int, int>, int> first;  // pixel -> first origin or -2
        std::vector<std::pair<int, int>> order;
        for (const Claim& cl : claims) {
            const auto key = std::make_pair(cl.x, cl.y);
            auto it = first.find(key);
            if (it == first.end()) {
                first[key] = cl.origin;
                order.push_back(key);
            } else if (it->second != -2) {
                // collision: one merge end point, parent = first claimant
                const int parent = it->second;
                emit(cl.x, cl.y, KeyPointKind::End, parent,
                     res.keypoints[parent].level + 1);
                consume(cl.x, cl.y);
                it->second = -2;
            }
        }
        std::map<std::pair<int, int>, bool> fresh;
        for (const Claim& cl : claims) {
            const auto key = std::make_pair(cl.x, cl.y);
            if (!fresh.count(key)) fresh[key] = cl.fresh;
        }
        for (const auto& key : order) {
            const int origin = first[key];
            if (origin == -2) continue;
            next.push_back(Window{key.first, key.second, origin});
            if (fresh[key]) ++st.windows_spawned;
        }
        return next;
    };

    // Seeding: each seed is a level-1 key point; its pixel is consumed and one
    // window is spawned per unvisited branch direction.
    std::vector<int> seed_kp(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        seed_kp[i] = emit(seeds[i].x(), seeds[i].y(), KeyPointKind::Seed, 0, 1);
    for (const auto& s : seeds)
        if (visited_map(s.y(), s.x())) consume(s.x(), s.y());
    std::vector<Claim> claims;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const BranchArcs arcs = branch_arcs(visited_map, seeds[i].x(), seeds[i].y());
        for (int k = 0; k < arcs.count; ++k)
            claims.push_back({arcs.rep_x[k], arcs.rep_y[k], seed_kp[i], true});
    }
    std::vector<Window> windows = resolve(claims);

    while (!windows.empty()) {
        st.steps_total += static_cast<std::int64_t>(windows.size());
        if (st.steps_total > max_steps)
            throw TruncationError("trace exceeded max_steps", std::move(res));

        // Every live window consumes its pixel first; claims were exclusive,
        // so each mark hits a fresh pixel.
        for (const Window& wnd : windows) consume(wnd.x, wnd.y);

        claims.clear();
        for (const Window& wnd : windows) {
            const BranchArcs arcs = branch_arcs(visited_map, wnd.x, wnd.y);
            const KeyPoint& origin = res.keypoints[wnd.origin];
            if (arcs.count == 0) {
                emit(wnd.x, wnd.y, KeyPointKind::End, wnd.origin, origin.level + 1);
            } else if (arcs.count == 1) {
                claims.push_back({arcs.rep_x[0], arcs.rep_y[0], wnd.origin, false});
            } else {
                const int b = emit(wnd.x, wnd.y, KeyPointKind::Bifurcation, wnd.origin,
                                   origin.level + 1);
                for (int k = 0; k < arcs.count; ++k)
                    claims.push_back({arcs.rep_x[k], arcs.rep_y[k], b, true});
            }
        }
        windows = resolve(claims);
    }
    return res;
}

std::string keypoints_to_csv(const std::vector<KeyPoint>& kps) {
    std::ostringstream os;
    os << "index,x,y,kind,parent,level\n";
    os.precision(17);
    for (const KeyPoint& k : kps) {
        os << k.index << ',' << k.x << ',' << k.y << ',' << to_string(k.kind) << ','
           << k.parent << ',' << k.level << '\n';
    }
    return os.str();
}

}  // namespace treekey
