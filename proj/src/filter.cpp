#include "treekey/filter.hpp"

#include <algorithm>
#include <cmath>

namespace treekey {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

Plane convolve_replicate(const Plane& src, const Eigen::MatrixXd& kernel) {
    const int h = static_cast<int>(src.rows());
    const int w = static_cast<int>(src.cols());
    const int kh = static_cast<int>(kernel.rows());
    const int kw = static_cast<int>(kernel.cols());
    if (kh > h || kw > w)
        throw DimensionError("kernel larger than image");
    const int cy = kh / 2, cx = kw / 2;

    Plane out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int j = 0; j < kh; ++j) {
                const int sy = clampi(y + j - cy, 0, h - 1);
                for (int i = 0; i < kw; ++i) {
                    const int sx = clampi(x + i - cx, 0, w - 1);
                    acc += kernel(j, i) * src(sy, sx);
                }
            }
            out(y, x) = acc;
        }
    }
    return out;
}

Eigen::MatrixXd laplacian_kernel_3x3() {
    Eigen::MatrixXd k(3, 3);
    k << 0, 1, 0,
         1, -4, 1,
         0, 1, 0;
    return k;
}

Plane sobel_magnitude(const Plane& src) {
    Eigen::MatrixXd gx(3, 3), gy(3, 3);
    gx << -1, 0, 1,
          -2, 0, 2,
          -1, 0, 1;
    gy = gx.transpose();
    const Plane dx = convolve_replicate(src, gx);
    const Plane dy = convolve_replicate(src, gy);
    return (dx.square() + dy.square()).sqrt();
}

Eigen::MatrixXd gabor_kernel(double sigma, double wavelength, double theta_deg) {
    const int half = static_cast<int>(std::ceil(3.0 * sigma));
    const int side = 2 * half + 1;
    const double theta = theta_deg * kPi / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);
    Eigen::MatrixXd k(side, side);
    for (int j = 0; j < side; ++j) {
        for (int i = 0; i < side; ++i) {
            const double x = i - half;
            const double y = j - half;
            const double xr = x * ct + y * st;
            const double yr = -x * st + y * ct;
            k(j, i) = std::exp(-(xr * xr + yr * yr) / (2.0 * sigma * sigma)) *
                      std::cos(2.0 * kPi * xr / wavelength);
        }
    }
    return k;
}

ChannelStack apply_filter_bank(const ChannelStack& stack, const FilterBankConfig& bank) {
    if (stack.empty()) throw EmptyInputError("empty channel stack");

    ChannelStack out;
    for (std::size_t i = 0; i < stack.size(); ++i)
        out.push(stack.names[i], stack.planes[i]);

    for (const std::string& src_name : bank.sources) {
        const int idx = stack.find(src_name);
        if (idx < 0) throw Error("filter source plane '" + src_name + "' not in stack");
        const Plane& src = stack.planes[idx];

        if (bank.laplacian)
            out.push("lap(" + src_name + ")",
                     rescale_unit(convolve_replicate(src, laplacian_kernel_3x3())));
        if (bank.sobel)
            out.push("sobel(" + src_name + ")", rescale_unit(sobel_magnitude(src)));
        if (bank.gabor) {
            for (double theta : {0.0, 45.0, 90.0, 135.0}) {
                const Eigen::MatrixXd k =
                    gabor_kernel(bank.gabor_sigma, bank.gabor_wavelength, theta);
                out.push("gabor" + std::to_string(static_cast<int>(theta)) + "(" +
                             src_name + ")",
                         rescale_unit(convolve_replicate(src, k)));
            }
        }
    }
    return out;
}

}  // namespace treekey
