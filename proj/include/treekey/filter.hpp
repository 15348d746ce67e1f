#pragma once

#include "treekey/core.hpp"

namespace treekey {

/// 2-D correlation with replicate border handling.
/// Throws DimensionError if the kernel is larger than the plane.
Plane convolve_replicate(const Plane& src, const Eigen::MatrixXd& kernel);

/// Gradient magnitude from the 3x3 Sobel pair, replicate borders.
Plane sobel_magnitude(const Plane& src);

Eigen::MatrixXd laplacian_kernel_3x3();

/// Even-symmetric Gabor kernel (cosine carrier, unit aspect ratio).
/// Kernel side = 2*ceil(3*sigma)+1.
Eigen::MatrixXd gabor_kernel(double sigma, double wavelength, double theta_deg);

struct FilterBankConfig {
    bool laplacian = true;
    bool sobel = true;
    bool gabor = true;
    std::vector<std::string> sources = {"gray"};  // planes the bank is applied to
    double gabor_sigma = 2.0;
    double gabor_wavelength = 4.0;
    // Gabor orientations are fixed at {0, 45, 90, 135} degrees.
};

/// Returns the input planes followed by one response plane per
/// (enabled filter, source plane) pair. Response planes are min-max rescaled
/// to [0,1] ("lap(...)", "sobel(...)", "gabor0(...)", ... naming).
ChannelStack apply_filter_bank(const ChannelStack& stack, const FilterBankConfig& bank);

}  // namespace treekey
