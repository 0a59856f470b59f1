#pragma once

#include <vector>

#include "tvdd/grid.hpp"

namespace tvdd {

/// Level structure of the orthogonal Haar transform on a rectangular block.
/// Level l maps the block [1, sizes_per_level[l-1]] onto averages in
/// [1, sizes_per_level[l]] plus detail blocks; samples on odd borders pass
/// through unchanged. After `levels` applications the transform is
/// idempotent (every remaining block has a zero half-size).
struct WaveletPlan {
  std::vector<long> sizes;                         // extents of the domain
  std::vector<std::vector<long>> sizes_per_level;  // [0] = sizes, then halved
  int levels = 0;
};

WaveletPlan make_wavelet_plan(const GridDomain& dom);

/// Orthogonal Haar transform of a single-channel field. levels < 0 applies
/// the full cascade (the idempotent limit); otherwise exactly min(levels,
/// plan depth) block transforms are applied.
GridFunction haar_forward(const GridFunction& u, int levels = -1);

/// Inverse (= adjoint) of haar_forward with the same level count.
GridFunction haar_inverse(const GridFunction& w, int levels = -1);

/// Zero all coefficients where mask != 0.
GridFunction mask_coeffs(const GridFunction& w, const GridFunction& mask);

}  // namespace tvdd
