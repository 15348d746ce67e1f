#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treekey {

/// Scalar raster plane. Indexed (row, col) == (y, x); values usually in [0,1].
using Plane = Eigen::ArrayXXd;

/// Per-pixel 0/1 flags, same indexing as Plane.
using Mask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// ---------------------------------------------------------------------------
// Error taxonomy
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class SegmentationError : public Error {
public:
    using Error::Error;
};

class NoSeedsError : public Error {
public:
    using Error::Error;
};

class StructuralError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Error raised by the end-to-end pipeline; carries the stage that failed.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// ---------------------------------------------------------------------------
// Image containers
// ---------------------------------------------------------------------------

/// Interleaved intensity image, 1 or 3 channels, values in [0,1].
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;  // row-major, interleaved; size w*h*channels

    RasterImage() = default;
    RasterImage(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    double& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool empty() const { return width <= 0 || height <= 0; }
};

/// Throws DimensionError / Error if the image violates its invariants.
void validate_image(const RasterImage& img);

/// Ordered list of named scalar planes sharing one canvas.
struct ChannelStack {
    int width = 0;
    int height = 0;
    std::vector<std::string> names;
    std::vector<Plane> planes;

    std::size_t size() const { return planes.size(); }
    bool empty() const { return planes.empty(); }

    /// Appends a plane; verifies dimensions and name uniqueness.
    void push(const std::string& name, Plane p);

    /// Index of a named plane, or -1.
    int find(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Small raster helpers
// ---------------------------------------------------------------------------

inline long foreground_count(const Mask& m) {
    long n = 0;
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (m(r, c)) ++n;
    return n;
}

/// Foreground pixel centers as (x, y) points, in raster scan order.
std::vector<Vec2> foreground_points(const Mask& m);

/// Min-max rescale of a plane to [0,1]; a constant plane maps to all zeros.
Plane rescale_unit(const Plane& p);

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// Lower-case hex of a 64-bit value (16 chars).
std::string hex64(std::uint64_t v);

}  // namespace treekey
