#pragma once

#include "treekey/core.hpp"

namespace treekey {

/// Diffusion-limited-aggregation generator parameters.
struct SynthParams {
    std::uint64_t rng_seed = 0;
    int particles = 2000;     // walkers stuck to the cluster (>= 1)
    int canvas = 512;         // square canvas side (>= 32)
    double stickiness = 1.0;  // attach probability per contact, in (0,1]
};

/// Aggregation cluster before rendering; foreground count == particles + 1.
Mask generate_dendrite_cluster(const SynthParams& p);

/// Cluster rendered dark on a light background with 1-px dilation.
/// Single-channel image, deterministic given rng_seed.
RasterImage generate_dendrite(const SynthParams& p);

}  // namespace treekey
