#include "treekey/augment.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace treekey {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double sample_bilinear(const RasterImage& img, double x, double y, int c, double fill) {
    if (x < 0.0 || y < 0.0 || x > img.width - 1 || y > img.height - 1) {
        // allow sub-pixel overhang before falling back to fill
        if (x < -0.5 || y < -0.5 || x > img.width - 0.5 || y > img.height - 0.5)
            return fill;
        x = std::min(std::max(x, 0.0), static_cast<double>(img.width - 1));
        y = std::min(std::max(y, 0.0), static_cast<double>(img.height - 1));
    }
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = img.at(x0, y0, c), v10 = img.at(x1, y0, c);
    const double v01 = img.at(x0, y1, c), v11 = img.at(x1, y1, c);
    return (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
}

// 3x3 homography from 4 point correspondences (dst -> src), last entry 1.
Eigen::Matrix3d homography_from_corners(const Vec2 dst[4], const Vec2 src[4]) {
    Eigen::Matrix<double, 8, 8> A = Eigen::Matrix<double, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> b;
    for (int i = 0; i < 4; ++i) {
        const double x = dst[i].x(), y = dst[i].y();
        const double u = src[i].x(), v = src[i].y();
        A.row(2 * i) << x, y, 1, 0, 0, 0, -x * u, -y * u;
        A.row(2 * i + 1) << 0, 0, 0, x, y, 1, -x * v, -y * v;
        b(2 * i) = u;
        b(2 * i + 1) = v;
    }
    const Eigen::Matrix<double, 8, 1> h = A.fullPivLu().solve(b);
    Eigen::Matrix3d H;
    H << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), 1.0;
    return H;
}

void keystone_corners(double ratio, int width, int height, Vec2 orig[4], Vec2 moved[4]) {
    const double w = width - 1.0;
    const double h = height - 1.0;
    const double q = ratio * w / 4.0;  // inward shift of each top corner
    orig[0] = {0.0, 0.0};
    orig[1] = {w, 0.0};
    orig[2] = {w, h};
    orig[3] = {0.0, h};
    moved[0] = {q, 0.0};
    moved[1] = {w - q, 0.0};
    moved[2] = {w, h};
    moved[3] = {0.0, h};
}

}  // namespace

RasterImage rotate(const RasterImage& img, double deg, double fill) {
    validate_image(img);
    const double t = -deg * kPi / 180.0;  // inverse map
    const double ct = std::cos(t), st = std::sin(t);
    const double cx = 0.5 * (img.width - 1);
    const double cy = 0.5 * (img.height - 1);
    RasterImage out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double sx = cx + ct * dx - st * dy;
            const double sy = cy + st * dx + ct * dy;
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = clamp01(sample_bilinear(img, sx, sy, c, fill));
        }
    }
    return out;
}

Vec2 perspective_map_point(const Vec2& p, double ratio, int width, int height) {
    Vec2 orig[4], moved[4];
    keystone_corners(ratio, width, height, orig, moved);
    const Eigen::Matrix3d H = homography_from_corners(orig, moved);  // src -> dst
    const Eigen::Vector3d q = H * Eigen::Vector3d(p.x(), p.y(), 1.0);
    return {q.x() / q.z(), q.y() / q.z()};
}

RasterImage perspective(const RasterImage& img, double ratio, double fill) {
    validate_image(img);
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error("perspective ratio must be in [0,1]");
    Vec2 orig[4], moved[4];
    keystone_corners(ratio, img.width, img.height, orig, moved);
    const Eigen::Matrix3d H = homography_from_corners(moved, orig);  // dst -> src
    RasterImage out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Eigen::Vector3d s = H * Eigen::Vector3d(x, y, 1.0);
            const double sx = s.x() / s.z();
            const double sy = s.y() / s.z();
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = clamp01(sample_bilinear(img, sx, sy, c, fill));
        }
    }
    return out;
}

RasterImage add_noise(const RasterImage& img, double var, std::uint64_t seed) {
    validate_image(img);
    if (var < 0.0) throw Error("noise variance must be nonnegative");
    if (var == 0.0) return img;
    RasterImage out = img;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(var));
    for (double& v : out.data) v = clamp01(v + noise(rng));
    return out;
}

RasterImage scale(const RasterImage& img, double factor) {
    validate_image(img);
    if (!(factor > 0.0)) throw Error("scale factor must be positive");
    const int ow = static_cast<int>(std::lround(img.width * factor));
    const int oh = static_cast<int>(std::lround(img.height * factor));
    if (ow <= 0 || oh <= 0) throw DimensionError("scaled image has zero extent");
    RasterImage out(ow, oh, img.channels);
    const double sx = static_cast<double>(img.width) / ow;
    const double sy = static_cast<double>(img.height) / oh;
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            const double u = (x + 0.5) * sx - 0.5;
            const double v = (y + 0.5) * sy - 0.5;
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = clamp01(sample_bilinear(img, u, v, c, 1.0));
        }
    }
    return out;
}

RasterImage apply_augment(const RasterImage& img, const AugmentSpec& spec) {
    RasterImage out = img;
    if (spec.scale != 1.0) out = scale(out, spec.scale);
    if (spec.rotation_deg != 0.0) out = rotate(out, spec.rotation_deg);
    if (spec.perspective_ratio != 0.0) out = perspective(out, spec.perspective_ratio);
    if (spec.noise_var != 0.0) out = add_noise(out, spec.noise_var, spec.rng_seed);
    return out;
}

}  // namespace treekey
