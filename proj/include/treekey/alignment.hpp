#pragma once

#include "treekey/core.hpp"

namespace treekey {

/// Matched coordinate pairs, centered on their respective mass centers.
/// Column i of P (test) corresponds to column i of Q (reference).
struct CorrespondingSets {
    Eigen::Matrix2Xd P;  // centered test coordinates
    Eigen::Matrix2Xd Q;  // centered reference coordinates
    Vec2 c_test = Vec2::Zero();
    Vec2 c_ref = Vec2::Zero();
};

/// Builds centered sets from raw matched coordinates (centers = means of the
/// matched points). Throws ShapeError on length mismatch, EmptyInputError on
/// empty input.
CorrespondingSets make_corresponding_sets(const std::vector<Vec2>& test_pts,
                                          const std::vector<Vec2>& ref_pts);

struct RigidTransform {
    Mat2 rotation = Mat2::Identity();
    Vec2 c_test = Vec2::Zero();
    Vec2 c_ref = Vec2::Zero();
};

struct MatchScore {
    double eta = 0.0;           // mean post-alignment distance, pixels
    double accuracy_pct = 0.0;  // share of pairs within tau, percent
    int n_pairs = 0;
};

/// Cross-covariance M = P * Q^T (2x2). Throws ShapeError on column mismatch.
Mat2 cross_covariance(const CorrespondingSets& sets);

/// Optimal rotation aligning centered test points onto centered reference
/// points in the least-squares sense, reflections excluded. Solved in closed
/// form via the rotation-angle parameterization of the 2x2 SVD problem.
/// Throws DegenerateInputError when the rotation is undefined (M ~ 0).
Mat2 kabsch_rotation(const Mat2& M);

/// p' = c_ref + R * (p - c_test), applied to every point.
std::vector<Vec2> project(const std::vector<Vec2>& points, const RigidTransform& t);

/// Mean Euclidean distance between projected and reference points.
double matching_loss(const std::vector<Vec2>& projected, const std::vector<Vec2>& reference);

/// eta plus the share of pairs within tau pixels.
MatchScore score(const std::vector<Vec2>& projected, const std::vector<Vec2>& reference,
                 double tau);

/// User-facing similarity in [0,100]: max(0, 100 * (1 - eta / r_mec)).
double similarity_score(double eta, double r_mec);

}  // namespace treekey
