#pragma once

#include "treekey/core.hpp"
#include "treekey/keypoints.hpp"

namespace treekey {

/// Loads PNG, PGM or PPM (binary or ASCII) into a [0,1] image.
/// PNG alpha is composited over white. Throws IoError.
RasterImage load_image(const std::string& path);

void save_png(const RasterImage& img, const std::string& path);
void save_pnm(const RasterImage& img, const std::string& path);

/// Saves by extension: .png, .pgm (1 channel) or .ppm (3 channels).
void save_image(const RasterImage& img, const std::string& path);

Plane to_gray_plane(const RasterImage& img);
RasterImage plane_to_image(const Plane& p);
RasterImage mask_to_image(const Mask& m, double fg = 0.0, double bg = 1.0);

/// Skeleton with key points painted on: seeds green, bifurcations blue,
/// ends red, the root as a black cross.
RasterImage render_keypoints_overlay(const Mask& skel, const std::vector<KeyPoint>& kps);

/// Reference points (blue) vs projected test points (red) with gray links.
RasterImage render_alignment_overlay(const std::vector<Vec2>& reference,
                                     const std::vector<Vec2>& projected,
                                     int width, int height);

}  // namespace treekey
