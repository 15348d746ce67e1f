#pragma once

#include "treekey/core.hpp"

namespace treekey {

// Pixel-level color conversions. RGB components are in [0,1]; chroma planes
// are offset so that the achromatic value sits at 0.5 and every output stays
// inside [0,1]. Hue is emitted as fraction of a turn (degrees / 360).

struct Yuv {
    double y, u, v;
};
struct Hsv {
    double h, s, v;
};

Yuv rgb_to_yuv(double r, double g, double b);
void yuv_to_rgb(const Yuv& c, double& r, double& g, double& b);

Hsv rgb_to_hsv(double r, double g, double b);
void hsv_to_rgb(const Hsv& c, double& r, double& g, double& b);

double rgb_to_gray(double r, double g, double b);

/// Expands an image into a fixed-order stack of named planes:
/// "gray", "yuv.y", "yuv.u", "yuv.v", "hsv.h", "hsv.s", "hsv.v", then the
/// original channels ("rgb.r","rgb.g","rgb.b" for color input, "orig.gray"
/// for single-channel input). Single-channel input replicates the gray plane
/// into the luminance slots and holds chroma planes at their neutral values.
ChannelStack expand_color_spaces(const RasterImage& img);

}  // namespace treekey
