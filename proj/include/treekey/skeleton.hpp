#pragma once

#include "treekey/core.hpp"

namespace treekey {

/// Iterative two-subiteration morphological thinning until stable.
/// Output foreground is a subset of the input; 8-connected components are
/// preserved (a component whose pixels would all be removed in one pass keeps
/// one pixel instead). Throws EmptyInputError if the mask has no foreground.
Mask thin(const Mask& mask);

/// Removes endpoint-terminated branches strictly shorter than `min_len`
/// pixels, repeatedly until stable. Branches are walked from endpoints to the
/// nearest junction; pure-path components and cycles are never touched.
/// min_len == 0 is the identity.
Mask prune_spurs(const Mask& skel, int min_len);

/// Number of foreground arcs in the 8-ring around (x, y): 0 for an isolated
/// dot, 1 for an endpoint, 2 for a path pixel, >=3 for a junction.
int crossing_number(const Mask& m, int x, int y);

}  // namespace treekey
