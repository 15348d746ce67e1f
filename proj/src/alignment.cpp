#include "treekey/alignment.hpp"

#include <algorithm>
#include <cmath>

namespace treekey {

CorrespondingSets make_corresponding_sets(const std::vector<Vec2>& test_pts,
                                          const std::vector<Vec2>& ref_pts) {
    if (test_pts.size() != ref_pts.size())
        throw ShapeError("corresponding sets differ in length");
    if (test_pts.empty()) throw EmptyInputError("empty corresponding sets");
    const int n = static_cast<int>(test_pts.size());

    CorrespondingSets s;
    for (const Vec2& p : test_pts) s.c_test += p;
    for (const Vec2& q : ref_pts) s.c_ref += q;
    s.c_test /= n;
    s.c_ref /= n;
    s.P.resize(2, n);
    s.Q.resize(2, n);
    for (int i = 0; i < n; ++i) {
        s.P.col(i) = test_pts[i] - s.c_test;
        s.Q.col(i) = ref_pts[i] - s.c_ref;
    }
    return s;
}

Mat2 cross_covariance(const CorrespondingSets& sets) {
    if (sets.P.cols() != sets.Q.cols())
        throw ShapeError("cross_covariance: column count mismatch");
    return sets.P * sets.Q.transpose();
}

Mat2 kabsch_rotation(const Mat2& M) {
    if (!M.allFinite()) throw Error("kabsch_rotation: non-finite matrix");
    // Over rotations R(t), the squared alignment loss is minimized where
    // trace(R*M) peaks: t* = atan2(M01 - M10, M00 + M11). This is the 2x2
    // SVD solution with the determinant correction baked in.
    const double c = M(0, 0) + M(1, 1);
    const double s = M(0, 1) - M(1, 0);
    const double scale = M.cwiseAbs().maxCoeff();
    if (std::hypot(c, s) <= 1e-12 * std::max(1.0, scale))
        throw DegenerateInputError("rotation undefined for a vanishing covariance");
    const double t = std::atan2(s, c);
    Mat2 R;
    R << std::cos(t), -std::sin(t),
         std::sin(t),  std::cos(t);
    return R;
}

std::vector<Vec2> project(const std::vector<Vec2>& points, const RigidTransform& t) {
    std::vector<Vec2> out;
    out.reserve(points.size());
    for (const Vec2& p : points) out.push_back(t.c_ref + t.rotation * (p - t.c_test));
    return out;
}

double matching_loss(const std::vector<Vec2>& projected,
                     const std::vector<Vec2>& reference) {
    if (projected.size() != reference.size())
        throw ShapeError("matching_loss: length mismatch");
    if (projected.empty()) throw EmptyInputError("matching_loss: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < projected.size(); ++i)
        sum += (projected[i] - reference[i]).norm();
    return sum / static_cast<double>(projected.size());
}

MatchScore score(const std::vector<Vec2>& projected, const std::vector<Vec2>& reference,
                 double tau) {
    if (!(tau > 0.0)) throw Error("tau must be positive");
    MatchScore s;
    s.n_pairs = static_cast<int>(projected.size());
    s.eta = matching_loss(projected, reference);
    int hits = 0;
    for (std::size_t i = 0; i < projected.size(); ++i)
        if ((projected[i] - reference[i]).norm() <= tau) ++hits;
    s.accuracy_pct = 100.0 * hits / static_cast<double>(s.n_pairs);
    return s;
}

double similarity_score(double eta, double r_mec) {
    if (!(r_mec > 0.0)) return 0.0;
    return std::max(0.0, 100.0 * (1.0 - eta / r_mec));
}

}  // namespace treekey
