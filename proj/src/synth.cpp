#include "treekey/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace treekey {

namespace {

constexpr double kPi = 3.14159265358979323846;

inline bool inside(int v, int lo, int hi) { return v >= lo && v <= hi; }

}  // namespace

Mask generate_dendrite_cluster(const SynthParams& p) {
    if (p.particles < 1) throw Error("particles must be >= 1");
    if (p.canvas < 32) throw Error("canvas must be >= 32");
    if (!(p.stickiness > 0.0 && p.stickiness <= 1.0))
        throw Error("stickiness must be in (0,1]");

    const int n = p.canvas;
    const int cx = n / 2, cy = n / 2;
    Mask cluster = Mask::Zero(n, n);
    cluster(cy, cx) = 1;
    double r_cluster = 0.0;
    const double r_max = n / 2.0 - 3.0;

    std::mt19937_64 rng(p.rng_seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::uniform_int_distribution<int> step4(0, 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr int dx4[4] = {1, -1, 0, 0};
    constexpr int dy4[4] = {0, 0, 1, -1};

    auto touches = [&](int x, int y) {
        for (int j = -1; j <= 1; ++j)
            for (int i = -1; i <= 1; ++i) {
                if (!i && !j) continue;
                const int nx = x + i, ny = y + j;
                if (inside(nx, 0, n - 1) && inside(ny, 0, n - 1) && cluster(ny, nx))
                    return true;
            }
        return false;
    };

    int stuck = 0;
    while (stuck < p.particles) {
        // Launch just outside the current cluster radius.
        const double r_launch = std::min(r_cluster + 5.0, r_max);
        const double a0 = angle(rng);
        int x = cx + static_cast<int>(std::lround(r_launch * std::cos(a0)));
        int y = cy + static_cast<int>(std::lround(r_launch * std::sin(a0)));
        const double r_kill = std::min(2.0 * r_cluster + 20.0, r_max + 2.0);

        while (true) {
            const double d = std::hypot(x - cx, y - cy);
            if (d > r_kill || !inside(x, 1, n - 2) || !inside(y, 1, n - 2)) break;
            if (touches(x, y) && !cluster(y, x)) {
                if (unit(rng) <= p.stickiness) {
                    cluster(y, x) = 1;
                    r_cluster = std::max(r_cluster, d);
                    ++stuck;
                    break;
                }
            }
            // Far from the cluster a long jump is as good as many steps.
            const double gap = d - r_cluster - 4.0;
            if (gap > 4.0) {
                const double a = angle(rng);
                x += static_cast<int>(std::lround(gap * 0.7 * std::cos(a)));
                y += static_cast<int>(std::lround(gap * 0.7 * std::sin(a)));
            } else {
                const int s = step4(rng);
                const int nx = x + dx4[s], ny = y + dy4[s];
                if (!inside(nx, 1, n - 2) || !inside(ny, 1, n - 2)) break;
                if (!cluster(ny, nx)) {
                    x = nx;
                    y = ny;
                }
            }
        }
    }
    return cluster;
}

RasterImage generate_dendrite(const SynthParams& p) {
    const Mask cluster = generate_dendrite_cluster(p);
    const int n = p.canvas;
    RasterImage img(n, n, 1, 1.0);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            if (!cluster(y, x)) continue;
            for (int j = -1; j <= 1; ++j)
                for (int i = -1; i <= 1; ++i) {
                    const int nx = x + i, ny = y + j;
                    if (inside(nx, 0, n - 1) && inside(ny, 0, n - 1))
                        img.at(nx, ny) = 0.0;
                }
        }
    }
    return img;
}

}  // namespace treekey
