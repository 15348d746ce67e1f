#pragma once

#include "treekey/core.hpp"

namespace treekey {

/// Fuses a multi-plane stack into one scalar plane: every pixel is treated as
/// a vector of plane values, planes are mean-centered, and pixels are
/// projected onto the leading eigenvector of the plane covariance matrix.
/// The output is min-max rescaled to [0,1].
///
/// Planes are processed in name-sorted order, so the result is identical for
/// any ordering of the input stack. The eigenvector sign is fixed by making
/// its largest-magnitude entry positive (first such entry on ties).
///
/// Throws EmptyInputError for stacks with <2 planes or <2 pixels and
/// DegenerateInputError when all planes are constant.
Plane fuse_pca(const ChannelStack& stack);

}  // namespace treekey
