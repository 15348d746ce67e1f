#pragma once

#include "treekey/core.hpp"

namespace treekey {

enum class KeyPointKind { Root, Seed, Bifurcation, End };

const char* to_string(KeyPointKind k);
KeyPointKind keypoint_kind_from_string(const std::string& s);

struct KeyPoint {
    int index = 0;            // emission order; root is 0
    double x = 0.0, y = 0.0;  // pixels
    KeyPointKind kind = KeyPointKind::Root;
    int parent = -1;          // -1 for the root
    int level = 0;            // hop depth from the root
};

struct SearchConfig {
    double alpha = 0.1;          // r_init = alpha * r_mec, 0 < alpha < 1
    std::int64_t max_steps = 0;  // safety bound; 0 means 4 * width * height
};

struct Geometry {
    Vec2 center = Vec2::Zero();  // pattern mass center
    double r_mec = 0.0;          // radius of the smallest center-anchored circle
    double r_init = 0.0;         // seed circle radius
};

struct TraceStats {
    std::int64_t steps_total = 0;      // one per live window per round
    std::int64_t windows_spawned = 0;  // windows ever instantiated
    std::int64_t pixels_visited = 0;   // skeleton pixels consumed
};

struct TraceResult {
    std::vector<KeyPoint> keypoints;
    TraceStats stats;
};

/// Raised when a trace exceeds its step bound; carries the partial result.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, TraceResult partial)
        : Error(what), partial_(std::move(partial)) {}
    const TraceResult& partial() const { return partial_; }

private:
    TraceResult partial_;
};

/// Arithmetic mean of a point set. Throws EmptyInputError on empty input.
Vec2 mass_center(const std::vector<Vec2>& pts);

/// Max distance from `center` to any point (radius of the smallest
/// center-anchored enclosing circle). Throws EmptyInputError on empty input.
double enclosing_radius(const std::vector<Vec2>& pts, const Vec2& center);

/// Exact point-set diameter (convex hull + rotating calipers). Half of this
/// approximates the enclosing radius on dense patterns.
double max_pairwise_distance(const std::vector<Vec2>& pts);

/// Mass center and radii of a skeleton's foreground.
Geometry compute_geometry(const Mask& skel, double alpha);

/// Skeleton pixels met by the rasterized seed circle, one representative per
/// contiguous run along the ring, ordered by angle about the center starting
/// at 0 degrees. When the circle misses the skeleton, the radius is halved
/// and doubled alternately (up to 8 attempts inside (0, r_mec)) before a
/// NoSeedsError is thrown.
std::vector<Eigen::Vector2i> seed_points(const Mask& skel, const Geometry& geom);

/// Multi-window breadth-first skeleton trace with lockstep round semantics.
///
/// A virtual root key point is placed at the mass center; every seed becomes
/// a level-1 key point that spawns one window per unvisited 8-neighbor.
/// Each round, every live window consumes its pixel and looks at unvisited
/// neighbors: 0 emits an end point, 1 advances, >=2 emits a bifurcation and
/// replicates the window per branch. Two windows claiming one pixel in the
/// same round both die and leave a single merge end point, which makes loops
/// terminate. Windows are processed in (seed order, spawn order), so the
/// result is bit-reproducible.
///
/// Throws TruncationError (with the partial result) if max_steps is exceeded.
TraceResult trace(const Mask& skel, const Geometry& geom,
                  const std::vector<Eigen::Vector2i>& seeds,
                  const SearchConfig& cfg);

/// CSV export: header plus one "index,x,y,kind,parent,level" row per point.
std::string keypoints_to_csv(const std::vector<KeyPoint>& kps);

}  // namespace treekey
