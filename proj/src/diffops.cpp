#include "tvdd/diffops.hpp"

#include <algorithm>
#include <cmath>

#include "tvdd/rng.hpp"

namespace tvdd {

namespace {

// Lattice lines along axis k: every flat index factors as
// q*(stride*extent) + j*stride + r with r < stride; (q, r) identifies the
// line and j the position on it.
template <class F>
void for_each_line(const GridDomain& dom, int k, F&& f) {
  const std::size_t sk = dom.stride(k);
  const std::size_t nk = static_cast<std::size_t>(dom.extent(k));
  const std::size_t nlines = dom.num_points() / nk;
  for (std::size_t line = 0; line < nlines; ++line) {
    const std::size_t base = (line / sk) * (sk * nk) + (line % sk);
    f(base, sk, nk);
  }
}

}  // namespace

GridFunction forward_diff(const GridFunction& u, int k) {
  const auto& dom = u.domain();
  const std::size_t m = static_cast<std::size_t>(u.channels());
  GridFunction out(dom, u.channels());
  const double* uv = u.data();
  double* ov = out.data();
  for_each_line(dom, k, [&](std::size_t base, std::size_t s, std::size_t n) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const std::size_t p = (base + j * s) * m;
      const std::size_t q = (base + (j + 1) * s) * m;
      for (std::size_t c = 0; c < m; ++c) ov[p + c] = uv[q + c] - uv[p + c];
    }
    // x_k = b_k: zero (already value-initialized).
  });
  return out;
}

GridFunction backward_diff(const GridFunction& v, int k) {
  const auto& dom = v.domain();
  const std::size_t m = static_cast<std::size_t>(v.channels());
  GridFunction out(dom, v.channels());
  const double* vv = v.data();
  double* ov = out.data();
  for_each_line(dom, k, [&](std::size_t base, std::size_t s, std::size_t n) {
    // Each boundary correction needs a neighbor on the respective side; on a
    // single-point axis neither exists and the output is zero, which keeps
    // the operator the exact negative adjoint of forward_diff on any domain.
    if (n > 1) {
      const std::size_t p = base * m;
      for (std::size_t c = 0; c < m; ++c) ov[p + c] = vv[p + c];
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const std::size_t p = (base + j * s) * m;
      const std::size_t q = (base + (j - 1) * s) * m;
      for (std::size_t c = 0; c < m; ++c) ov[p + c] = vv[p + c] - vv[q + c];
    }
    if (n > 1) {
      const std::size_t p = (base + (n - 1) * s) * m;
      const std::size_t q = (base + (n - 2) * s) * m;
      for (std::size_t c = 0; c < m; ++c) ov[p + c] = -vv[q + c];
    }
  });
  return out;
}

void gradient_into(const GridFunction& u, DualField& out) {
  const auto& dom = u.domain();
  const int d = dom.dim();
  const std::size_t m = static_cast<std::size_t>(u.channels());
  const std::size_t dm = static_cast<std::size_t>(d) * m;
  const double* uv = u.data();
  double* ov = out.data();
  for (int k = 0; k < d; ++k) {
    const std::size_t ku = static_cast<std::size_t>(k);
    for_each_line(dom, k, [&](std::size_t base, std::size_t s, std::size_t n) {
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const std::size_t p = base + j * s;
        const std::size_t q = base + (j + 1) * s;
        for (std::size_t c = 0; c < m; ++c) ov[p * dm + ku * m + c] = uv[q * m + c] - uv[p * m + c];
      }
      const std::size_t p = base + (n - 1) * s;
      for (std::size_t c = 0; c < m; ++c) ov[p * dm + ku * m + c] = 0.0;
    });
  }
}

DualField gradient(const GridFunction& u) {
  DualField out(u.domain(), u.channels());
  gradient_into(u, out);
  return out;
}

void divergence_into(const DualField& p, GridFunction& out) {
  const auto& dom = p.domain();
  const int d = dom.dim();
  const std::size_t m = static_cast<std::size_t>(p.channels());
  const std::size_t dm = static_cast<std::size_t>(d) * m;
  const double* pv = p.data();
  double* ov = out.data();
  std::fill(out.values().begin(), out.values().end(), 0.0);
  for (int k = 0; k < d; ++k) {
    const std::size_t ku = static_cast<std::size_t>(k);
    for_each_line(dom, k, [&](std::size_t base, std::size_t s, std::size_t n) {
      if (n > 1) {
        const std::size_t x = base;
        for (std::size_t c = 0; c < m; ++c) ov[x * m + c] += pv[x * dm + ku * m + c];
      }
      for (std::size_t j = 1; j + 1 < n; ++j) {
        const std::size_t x = base + j * s;
        const std::size_t w = base + (j - 1) * s;
        for (std::size_t c = 0; c < m; ++c) ov[x * m + c] += pv[x * dm + ku * m + c] - pv[w * dm + ku * m + c];
      }
      if (n > 1) {
        const std::size_t x = base + (n - 1) * s;
        const std::size_t w = base + (n - 2) * s;
        for (std::size_t c = 0; c < m; ++c) ov[x * m + c] += -pv[w * dm + ku * m + c];
      }
    });
  }
}

GridFunction divergence(const DualField& p) {
  GridFunction out(p.domain(), p.channels());
  divergence_into(p, out);
  return out;
}

void divergence_into(const DualField& p, GridFunction& out, const Box& box) {
  const auto& dom = p.domain();
  const int d = dom.dim();
  const int m = p.channels();
  for_each_point(dom, box, [&](std::size_t i, const std::vector<long>& x) {
    for (int c = 0; c < m; ++c) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) {
        if (dom.lo(k) == dom.hi(k)) continue;  // single-point axis contributes nothing
        const std::size_t sk = dom.stride(k);
        if (x[static_cast<std::size_t>(k)] == dom.lo(k))
          s += p.at(i, k, c);
        else if (x[static_cast<std::size_t>(k)] == dom.hi(k))
          s += -p.at(i - sk, k, c);
        else
          s += p.at(i, k, c) - p.at(i - sk, k, c);
      }
      out.at(i, c) = s;
    }
  });
}

double grad_norm_sq_estimate(const GridDomain& dom, int channels, std::uint64_t seed) {
  Rng rng(seed);
  GridFunction u(dom, channels);
  for (double& v : u.values()) v = rng.uniform(-1.0, 1.0);
  const double n0 = norm_l2(u);
  if (n0 == 0.0) return 0.0;
  scale_in_place(1.0 / n0, u);

  DualField g(dom, channels);
  GridFunction w(dom, channels);
  double lambda = 0.0;
  const int min_iters = 200;
  const int max_iters = 200000;
  for (int it = 0; it < max_iters; ++it) {
    gradient_into(u, g);
    divergence_into(g, w);
    scale_in_place(-1.0, w);  // w = grad^T grad u
    const double prev = lambda;
    lambda = dot(u, w);
    const double nw = norm_l2(w);
    if (nw == 0.0) return 0.0;
    const double inv = 1.0 / nw;
    for (std::size_t i = 0; i < u.size(); ++i) u.data()[i] = w.data()[i] * inv;
    if (it >= min_iters && std::abs(lambda - prev) <= 1e-13 * std::max(1.0, std::abs(lambda))) break;
  }
  return lambda;
}

}  // namespace tvdd
