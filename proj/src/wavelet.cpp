#include "tvdd/wavelet.hpp"

#include <bit>
#include <cmath>

namespace tvdd {

namespace {

bool any_zero(const std::vector<long>& k) {
  for (long v : k)
    if (v < 1) return true;
  return false;
}

std::vector<long> halves(const std::vector<long>& s) {
  std::vector<long> k(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) k[j] = s[j] / 2;
  return k;
}

void require_single_channel(const GridFunction& u) {
  if (u.channels() != 1) throw ShapeMismatch("wavelet transform requires a single channel");
}

// Flat offset of a 1-based block coordinate in the full array.
std::size_t pos(const GridDomain& dom, const std::vector<long>& one_based) {
  std::size_t idx = 0;
  for (int k = 0; k < dom.dim(); ++k) idx += static_cast<std::size_t>(one_based[static_cast<std::size_t>(k)] - 1) * dom.stride(k);
  return idx;
}

// Odometer over [1, hi] (inclusive, 1-based). Returns false once exhausted.
bool advance(std::vector<long>& x, const std::vector<long>& hi) {
  for (std::size_t k = x.size(); k-- > 0;) {
    if (++x[k] <= hi[k]) return true;
    x[k] = 1;
  }
  return false;
}

// One block transform on [1, cur]: averages/details over the even part
// [1, 2k], pass-through on odd borders. dir > 0 applies it, dir < 0 inverts.
void level_apply(const GridDomain& dom, const std::vector<long>& cur, const std::vector<long>& k,
                 const std::vector<double>& in, std::vector<double>& out, int dir) {
  const int d = dom.dim();
  const unsigned corners = 1u << d;
  const double scale = std::pow(2.0, -0.5 * d);

  std::vector<long> x(static_cast<std::size_t>(d), 1);
  std::vector<long> y(static_cast<std::size_t>(d));
  std::vector<std::size_t> cpos(corners), bpos(corners);
  if (!any_zero(k)) {
    do {
      // cpos: coefficient slots alpha*k + x; bpos: the 2^d source corners.
      for (unsigned a = 0; a < corners; ++a) {
        for (int j = 0; j < d; ++j) {
          const auto ju = static_cast<std::size_t>(j);
          y[ju] = ((a >> j) & 1u) ? k[ju] + x[ju] : x[ju];
        }
        cpos[a] = pos(dom, y);
        for (int j = 0; j < d; ++j) {
          const auto ju = static_cast<std::size_t>(j);
          y[ju] = 2 * (x[ju] - 1) + 1 + (((a >> j) & 1u) ? 1 : 0);
        }
        bpos[a] = pos(dom, y);
      }
      if (dir > 0) {
        for (unsigned a = 0; a < corners; ++a) {
          double s = 0.0;
          for (unsigned b = 0; b < corners; ++b) {
            const double sign = (std::popcount(a & b) & 1) ? -1.0 : 1.0;
            s += sign * in[bpos[b]];
          }
          out[cpos[a]] = scale * s;
        }
      } else {
        for (unsigned b = 0; b < corners; ++b) {
          double s = 0.0;
          for (unsigned a = 0; a < corners; ++a) {
            const double sign = (std::popcount(a & b) & 1) ? -1.0 : 1.0;
            s += sign * in[cpos[a]];
          }
          out[bpos[b]] = scale * s;
        }
      }
    } while (advance(x, k));
  }

  // Odd borders of the block copy through unchanged.
  std::vector<long> z(static_cast<std::size_t>(d), 1);
  do {
    bool border = false;
    for (int j = 0; j < d && !border; ++j) border = z[static_cast<std::size_t>(j)] > 2 * k[static_cast<std::size_t>(j)];
    if (border) {
      const std::size_t p = pos(dom, z);
      out[p] = in[p];
    }
  } while (advance(z, cur));
}

}  // namespace

WaveletPlan make_wavelet_plan(const GridDomain& dom) {
  WaveletPlan plan;
  plan.sizes.resize(static_cast<std::size_t>(dom.dim()));
  for (int k = 0; k < dom.dim(); ++k) plan.sizes[static_cast<std::size_t>(k)] = dom.extent(k);
  plan.sizes_per_level.push_back(plan.sizes);
  std::vector<long> cur = plan.sizes;
  while (!any_zero(halves(cur))) {
    cur = halves(cur);
    plan.sizes_per_level.push_back(cur);
    ++plan.levels;
  }
  return plan;
}

GridFunction haar_forward(const GridFunction& u, int levels) {
  require_single_channel(u);
  const WaveletPlan plan = make_wavelet_plan(u.domain());
  const int nlev = levels < 0 ? plan.levels : std::min(levels, plan.levels);
  GridFunction out = u;
  std::vector<double> tmp(out.values());
  for (int l = 0; l < nlev; ++l) {
    const auto& cur = plan.sizes_per_level[static_cast<std::size_t>(l)];
    const auto& k = plan.sizes_per_level[static_cast<std::size_t>(l + 1)];
    tmp = out.values();
    level_apply(u.domain(), cur, k, tmp, out.values(), +1);
  }
  return out;
}

GridFunction haar_inverse(const GridFunction& w, int levels) {
  require_single_channel(w);
  const WaveletPlan plan = make_wavelet_plan(w.domain());
  const int nlev = levels < 0 ? plan.levels : std::min(levels, plan.levels);
  GridFunction out = w;
  std::vector<double> tmp(out.values());
  for (int l = nlev; l-- > 0;) {
    const auto& cur = plan.sizes_per_level[static_cast<std::size_t>(l)];
    const auto& k = plan.sizes_per_level[static_cast<std::size_t>(l + 1)];
    tmp = out.values();
    level_apply(w.domain(), cur, k, tmp, out.values(), -1);
  }
  return out;
}

GridFunction mask_coeffs(const GridFunction& w, const GridFunction& mask) {
  require_single_channel(w);
  require_same_shape(w, mask);
  GridFunction out = w;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (mask.data()[i] != 0.0) out.data()[i] = 0.0;
  return out;
}

}  // namespace tvdd
