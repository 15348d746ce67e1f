#include "treekey/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace treekey {

namespace {

inline std::uint8_t to_byte(double v) {
    const double c = std::min(1.0, std::max(0.0, v));
    return static_cast<std::uint8_t>(std::lround(c * 255.0));
}

std::string lower_ext(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return "";
    std::string e = path.substr(dot + 1);
    std::transform(e.begin(), e.end(), e.begin(), ::tolower);
    return e;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

RasterImage load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open '" + path + "'");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode '" + path + "'");
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);

    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    std::vector<png_byte> row(png_get_rowbytes(png, info));

    const bool gray = channels <= 2;
    RasterImage img(static_cast<int>(w), static_cast<int>(h), gray ? 1 : 3, 0.0);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < w; ++x) {
            const png_byte* px = row.data() + x * channels;
            double a = 1.0;
            if (channels == 2 || channels == 4) a = px[channels - 1] / 255.0;
            if (gray) {
                const double v = px[0] / 255.0;
                img.at(x, y) = a * v + (1.0 - a);  // composite over white
            } else {
                for (int c = 0; c < 3; ++c)
                    img.at(x, y, c) = a * (px[c] / 255.0) + (1.0 - a);
            }
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

RasterImage load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string magic;
    in >> magic;
    const bool ascii = magic == "P2" || magic == "P3";
    const bool binary = magic == "P5" || magic == "P6";
    if (!ascii && !binary) throw IoError("unsupported PNM magic '" + magic + "'");
    const int channels = (magic == "P3" || magic == "P6") ? 3 : 1;

    auto next_token = [&]() -> long {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string dummy;
                std::getline(in, dummy);
                continue;
            }
            return std::stol(tok);
        }
        throw IoError("truncated PNM header");
    };
    const int w = static_cast<int>(next_token());
    const int h = static_cast<int>(next_token());
    const long maxval = next_token();
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw IoError("bad PNM header");

    RasterImage img(w, h, channels, 0.0);
    const std::size_t count = static_cast<std::size_t>(w) * h * channels;
    if (ascii) {
        for (std::size_t i = 0; i < count; ++i) {
            long v;
            if (!(in >> v)) throw IoError("truncated PNM data");
            img.data[i] = static_cast<double>(v) / maxval;
        }
    } else {
        in.get();  // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(count * bytes);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (static_cast<std::size_t>(in.gcount()) != buf.size())
            throw IoError("truncated PNM data");
        for (std::size_t i = 0; i < count; ++i) {
            const long v = bytes == 1 ? buf[i]
                                      : (static_cast<long>(buf[2 * i]) << 8) | buf[2 * i + 1];
            img.data[i] = static_cast<double>(v) / maxval;
        }
    }
    return img;
}

}  // namespace

RasterImage load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open '" + path + "'");
    unsigned char sig[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(sig), 2);
    probe.close();
    if (sig[0] == 0x89 && sig[1] == 'P') return load_png(path);
    if (sig[0] == 'P') return load_pnm(path);
    throw IoError("unrecognized image format: '" + path + "'");
}

void save_png(const RasterImage& img, const std::string& path) {
    validate_image(img);
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot write '" + path + "'");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode '" + path + "'");
    }
    png_init_io(png, fp.get());
    const int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, 8, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(static_cast<std::size_t>(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c)
                row[static_cast<std::size_t>(x) * img.channels + c] = to_byte(img.at(x, y, c));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_pnm(const RasterImage& img, const std::string& path) {
    validate_image(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << (img.channels == 1 ? "P5" : "P6") << '\n'
        << img.width << ' ' << img.height << "\n255\n";
    std::vector<unsigned char> buf;
    buf.reserve(img.data.size());
    for (double v : img.data) buf.push_back(to_byte(v));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
}

void save_image(const RasterImage& img, const std::string& path) {
    const std::string ext = lower_ext(path);
    if (ext == "png")
        save_png(img, path);
    else if (ext == "pgm" || ext == "ppm" || ext == "pnm")
        save_pnm(img, path);
    else
        throw IoError("unsupported output extension '" + ext + "'");
}

Plane to_gray_plane(const RasterImage& img) {
    Plane p(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            p(y, x) = img.channels == 1
                          ? img.at(x, y)
                          : 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
                                0.114 * img.at(x, y, 2);
    return p;
}

RasterImage plane_to_image(const Plane& p) {
    RasterImage img(static_cast<int>(p.cols()), static_cast<int>(p.rows()), 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            img.at(x, y) = std::min(1.0, std::max(0.0, p(y, x)));
    return img;
}

RasterImage mask_to_image(const Mask& m, double fg, double bg) {
    RasterImage img(static_cast<int>(m.cols()), static_cast<int>(m.rows()), 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) img.at(x, y) = m(y, x) ? fg : bg;
    return img;
}

namespace {

void paint_square(RasterImage& img, int cx, int cy, int r, double cr, double cg, double cb) {
    for (int y = cy - r; y <= cy + r; ++y)
        for (int x = cx - r; x <= cx + r; ++x) {
            if (x < 0 || y < 0 || x >= img.width || y >= img.height) continue;
            img.at(x, y, 0) = cr;
            img.at(x, y, 1) = cg;
            img.at(x, y, 2) = cb;
        }
}

}  // namespace

RasterImage render_keypoints_overlay(const Mask& skel, const std::vector<KeyPoint>& kps) {
    RasterImage img(static_cast<int>(skel.cols()), static_cast<int>(skel.rows()), 3, 1.0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (skel(y, x))
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = 0.55;
    for (const KeyPoint& k : kps) {
        const int x = static_cast<int>(std::lround(k.x));
        const int y = static_cast<int>(std::lround(k.y));
        switch (k.kind) {
            case KeyPointKind::Seed: paint_square(img, x, y, 1, 0.0, 0.8, 0.0); break;
            case KeyPointKind::Bifurcation: paint_square(img, x, y, 1, 0.0, 0.0, 0.9); break;
            case KeyPointKind::End: paint_square(img, x, y, 1, 0.9, 0.0, 0.0); break;
            case KeyPointKind::Root:
                for (int d = -3; d <= 3; ++d) {
                    paint_square(img, x + d, y, 0, 0.0, 0.0, 0.0);
                    paint_square(img, x, y + d, 0, 0.0, 0.0, 0.0);
                }
                break;
        }
    }
    return img;
}

RasterImage render_alignment_overlay(const std::vector<Vec2>& reference,
                                     const std::vector<Vec2>& projected, int width,
                                     int height) {
    RasterImage img(width, height, 3, 1.0);
    auto draw_line = [&](const Vec2& a, const Vec2& b, double cr, double cg, double cb) {
        const int steps = static_cast<int>((a - b).norm()) + 1;
        for (int i = 0; i <= steps; ++i) {
            const Vec2 p = a + (b - a) * (static_cast<double>(i) / steps);
            const int x = static_cast<int>(std::lround(p.x()));
            const int y = static_cast<int>(std::lround(p.y()));
            if (x < 0 || y < 0 || x >= width || y >= height) continue;
            img.at(x, y, 0) = cr;
            img.at(x, y, 1) = cg;
            img.at(x, y, 2) = cb;
        }
    };
    const std::size_t n = std::min(reference.size(), projected.size());
    for (std::size_t i = 0; i < n; ++i)
        draw_line(reference[i], projected[i], 0.7, 0.7, 0.7);
    for (std::size_t i = 0; i < n; ++i) {
        paint_square(img, static_cast<int>(std::lround(reference[i].x())),
                     static_cast<int>(std::lround(reference[i].y())), 1, 0.0, 0.0, 0.9);
        paint_square(img, static_cast<int>(std::lround(projected[i].x())),
                     static_cast<int>(std::lround(projected[i].y())), 1, 0.9, 0.0, 0.0);
    }
    return img;
}

}  // namespace treekey
