#pragma once

#include "treekey/core.hpp"

namespace treekey {

/// Image perturbation parameters. All operations are deterministic given
/// rng_seed.
struct AugmentSpec {
    double rotation_deg = 0.0;
    double scale = 1.0;            // > 0
    double perspective_ratio = 0.0;  // in [0,1]
    double noise_var = 0.0;        // variance of additive Gaussian noise
    std::uint64_t rng_seed = 0;
};

/// Rotation about the image center, bilinear sampling, `fill` outside.
RasterImage rotate(const RasterImage& img, double deg, double fill = 1.0);

/// Keystone warp: each top corner moves inward by ratio/4 of the top edge
/// (ratio 1 leaves the top edge at half width); bottom corners are fixed.
/// Bilinear sampling, `fill` outside. Ratio must be in [0,1].
RasterImage perspective(const RasterImage& img, double ratio, double fill = 1.0);

/// Adds i.i.d. N(0, var) per sample, clamped to [0,1]. var == 0 is identity.
RasterImage add_noise(const RasterImage& img, double var, std::uint64_t seed);

/// Bilinear resample to (round(w*f), round(h*f)).
/// Throws DimensionError when an output dimension would be zero.
RasterImage scale(const RasterImage& img, double factor);

/// Applies spec in the order scale, rotation, perspective, noise.
RasterImage apply_augment(const RasterImage& img, const AugmentSpec& spec);

/// Forward keystone map of a single point on a canvas of the given size.
Vec2 perspective_map_point(const Vec2& p, double ratio, int width, int height);

}  // namespace treekey
