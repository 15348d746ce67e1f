#include "treekey/color.hpp"

#include <algorithm>
#include <cmath>

namespace treekey {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

double rgb_to_gray(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

Yuv rgb_to_yuv(double r, double g, double b) {
    // Offset chroma form: achromatic input lands on (y, 0.5, 0.5).
    Yuv c;
    c.y = 0.299 * r + 0.587 * g + 0.114 * b;
    c.u = 0.5 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    c.v = 0.5 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    return c;
}

void yuv_to_rgb(const Yuv& c, double& r, double& g, double& b) {
    const double u = c.u - 0.5;
    const double v = c.v - 0.5;
    r = c.y + 1.402 * v;
    g = c.y - 0.344136 * u - 0.714136 * v;
    b = c.y + 1.772 * u;
}

Hsv rgb_to_hsv(double r, double g, double b) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    Hsv c;
    c.v = mx;
    c.s = mx > 0.0 ? d / mx : 0.0;
    if (d <= 0.0) {
        c.h = 0.0;
        return c;
    }
    double h;
    if (mx == r)
        h = std::fmod((g - b) / d, 6.0);
    else if (mx == g)
        h = (b - r) / d + 2.0;
    else
        h = (r - g) / d + 4.0;
    h /= 6.0;  // fraction of a turn
    if (h < 0.0) h += 1.0;
    c.h = h;
    return c;
}

void hsv_to_rgb(const Hsv& c, double& r, double& g, double& b) {
    if (c.s <= 0.0) {
        r = g = b = c.v;
        return;
    }
    const double h = c.h * 6.0;
    const int sector = std::min(5, static_cast<int>(std::floor(h)));
    const double f = h - sector;
    const double p = c.v * (1.0 - c.s);
    const double q = c.v * (1.0 - c.s * f);
    const double t = c.v * (1.0 - c.s * (1.0 - f));
    switch (sector) {
        case 0: r = c.v; g = t; b = p; break;
        case 1: r = q; g = c.v; b = p; break;
        case 2: r = p; g = c.v; b = t; break;
        case 3: r = p; g = q; b = c.v; break;
        case 4: r = t; g = p; b = c.v; break;
        default: r = c.v; g = p; b = q; break;
    }
}

ChannelStack expand_color_spaces(const RasterImage& img) {
    validate_image(img);
    const int w = img.width, h = img.height;

    Plane gray(h, w), yy(h, w), yu(h, w), yv(h, w);
    Plane hh(h, w), hs(h, w), hv(h, w);
    std::vector<Plane> orig;

    if (img.channels == 3) {
        orig.assign(3, Plane(h, w));
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double r = img.at(x, y, 0);
                const double g = img.at(x, y, 1);
                const double b = img.at(x, y, 2);
                gray(y, x) = rgb_to_gray(r, g, b);
                const Yuv c1 = rgb_to_yuv(r, g, b);
                yy(y, x) = c1.y;
                yu(y, x) = clamp01(c1.u);
                yv(y, x) = clamp01(c1.v);
                const Hsv c2 = rgb_to_hsv(r, g, b);
                hh(y, x) = c2.h;
                hs(y, x) = c2.s;
                hv(y, x) = c2.v;
                orig[0](y, x) = r;
                orig[1](y, x) = g;
                orig[2](y, x) = b;
            }
        }
    } else {
        orig.assign(1, Plane(h, w));
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double v = img.at(x, y, 0);
                gray(y, x) = v;
                yy(y, x) = v;
                yu(y, x) = 0.5;
                yv(y, x) = 0.5;
                hh(y, x) = 0.0;
                hs(y, x) = 0.0;
                hv(y, x) = v;
                orig[0](y, x) = v;
            }
        }
    }

    ChannelStack stack;
    stack.push("gray", std::move(gray));
    stack.push("yuv.y", std::move(yy));
    stack.push("yuv.u", std::move(yu));
    stack.push("yuv.v", std::move(yv));
    stack.push("hsv.h", std::move(hh));
    stack.push("hsv.s", std::move(hs));
    stack.push("hsv.v", std::move(hv));
    if (img.channels == 3) {
        stack.push("rgb.r", std::move(orig[0]));
        stack.push("rgb.g", std::move(orig[1]));
        stack.push("rgb.b", std::move(orig[2]));
    } else {
        stack.push("orig.gray", std::move(orig[0]));
    }
    return stack;
}

}  // namespace treekey
