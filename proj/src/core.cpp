#include "treekey/core.hpp"

#include <algorithm>
#include <cmath>

namespace treekey {

void validate_image(const RasterImage& img) {
    if (img.width <= 0 || img.height <= 0)
        throw DimensionError("image has zero extent");
    if (img.channels != 1 && img.channels != 3)
        throw Error("image must have 1 or 3 channels");
    const std::size_t want =
        static_cast<std::size_t>(img.width) * img.height * img.channels;
    if (img.data.size() != want)
        throw DimensionError("image data size does not match dimensions");
    for (double v : img.data)
        if (!(v >= 0.0 && v <= 1.0))
            throw Error("image values must lie in [0,1]");
}

void ChannelStack::push(const std::string& name, Plane p) {
    if (planes.empty() && width == 0 && height == 0) {
        width = static_cast<int>(p.cols());
        height = static_cast<int>(p.rows());
    }
    if (p.cols() != width || p.rows() != height)
        throw DimensionError("plane '" + name + "' does not match stack dimensions");
    if (find(name) >= 0)
        throw Error("duplicate plane name '" + name + "'");
    if (!p.isFinite().all())
        throw Error("plane '" + name + "' contains non-finite values");
    names.push_back(name);
    planes.push_back(std::move(p));
}

int ChannelStack::find(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<Vec2> foreground_points(const Mask& m) {
    std::vector<Vec2> pts;
    for (Eigen::Index y = 0; y < m.rows(); ++y)
        for (Eigen::Index x = 0; x < m.cols(); ++x)
            if (m(y, x)) pts.emplace_back(static_cast<double>(x), static_cast<double>(y));
    return pts;
}

Plane rescale_unit(const Plane& p) {
    const double lo = p.minCoeff();
    const double hi = p.maxCoeff();
    if (!(hi - lo > 0.0)) return Plane::Zero(p.rows(), p.cols());
    return (p - lo) / (hi - lo);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace treekey
