#include "tvdd/decomp.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tvdd/diffops.hpp"
#include "tvdd/errors.hpp"
#include "tvdd/surrogate.hpp"

namespace tvdd {

AxisIntervals axis_intervals(long s, long count, long overlap) {
  if (s < 0) throw std::invalid_argument("axis length must be non-negative");
  if (count < 1) throw std::invalid_argument("need at least one interval per axis");
  if (overlap < 0) throw std::invalid_argument("overlap must be non-negative");
  AxisIntervals iv;
  const long total = s + (count - 1) * overlap;
  long assigned = 0;
  for (long i = 0; i < count; ++i) {
    const long a = (total - assigned) / (count - i);
    if (a < 2 * overlap)
      throw OverlapTooLarge("axis of length " + std::to_string(s) + " cannot host " + std::to_string(count) +
                            " intervals of overlap " + std::to_string(overlap));
    iv.len.push_back(a);
    iv.start.push_back(i == 0 ? 0 : iv.start.back() + iv.len[static_cast<std::size_t>(i - 1)] - overlap);
    assigned += a;
  }
  return iv;
}

std::vector<std::vector<double>> axis_weights(const AxisIntervals& iv, long s, long overlap) {
  const std::size_t m = iv.len.size();
  std::vector<std::vector<double>> w(m, std::vector<double>(static_cast<std::size_t>(s + 1), 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    const long lo = iv.start[i], hi = iv.start[i] + iv.len[i];
    for (long x = lo; x <= hi; ++x) {
      // integer distance from x to the complement of [lo, hi]
      const long dist = std::min(x - lo, hi - x) + 1;
      w[i][static_cast<std::size_t>(x)] =
          overlap > 0 ? std::min(1.0, static_cast<double>(dist) / static_cast<double>(overlap)) : 1.0;
    }
  }
  for (long x = 0; x <= s; ++x) {
    const std::size_t xi = static_cast<std::size_t>(x);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += w[i][xi];
    for (std::size_t i = 0; i < m; ++i) w[i][xi] /= sum;
  }
  return w;
}

DecompLayout make_decomposition(const GridDomain& dom, const std::vector<long>& counts, long overlap) {
  const int d = dom.dim();
  if (counts.size() != static_cast<std::size_t>(d))
    throw ShapeMismatch("make_decomposition: one subdomain count per axis required");

  std::vector<AxisIntervals> ivs;
  std::vector<std::vector<std::vector<double>>> prof;  // [axis][interval][coordinate]
  for (int k = 0; k < d; ++k) {
    const long s = dom.extent(k) - 1;
    ivs.push_back(axis_intervals(s, counts[static_cast<std::size_t>(k)], overlap));
    prof.push_back(axis_weights(ivs.back(), s, overlap));
  }

  DecompLayout lay{dom, counts, overlap, {}, 1 << d};
  std::vector<long> idx(static_cast<std::size_t>(d), 0);
  for (;;) {
    Subdomain sub;
    sub.cell = idx;
    Box box;
    box.lo.resize(static_cast<std::size_t>(d));
    box.hi.resize(static_cast<std::size_t>(d));
    int color = 0;
    for (int k = 0; k < d; ++k) {
      const std::size_t ku = static_cast<std::size_t>(k);
      const std::size_t ik = static_cast<std::size_t>(idx[ku]);
      box.lo[ku] = dom.lo(k) + ivs[ku].start[ik];
      box.hi[ku] = box.lo[ku] + ivs[ku].len[ik];
      color = (color << 1) | static_cast<int>(idx[ku] & 1);
    }
    sub.support = box;
    sub.color = color;
    sub.theta = GridFunction(dom, 1);
    for_each_point(dom, box, [&](std::size_t p, const std::vector<long>& x) {
      double t = 1.0;
      for (int k = 0; k < d; ++k) {
        const std::size_t ku = static_cast<std::size_t>(k);
        t *= prof[ku][static_cast<std::size_t>(idx[ku])][static_cast<std::size_t>(x[ku] - dom.lo(k))];
      }
      sub.theta.at(p, 0) = t;
    });
    lay.subs.push_back(std::move(sub));

    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == counts[static_cast<std::size_t>(k)]) {
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }

  // Make the partition of unity exact in floating point: at every point the
  // last covering subdomain absorbs the rounding residual of the others.
  const std::size_t n = dom.num_points();
  std::vector<int> last(n, -1);
  for (std::size_t si = 0; si < lay.subs.size(); ++si)
    for_each_point(dom, lay.subs[si].support,
                   [&](std::size_t p, const std::vector<long>&) { last[p] = static_cast<int>(si); });
  std::vector<double> others(n, 0.0);
  for (std::size_t si = 0; si < lay.subs.size(); ++si)
    for_each_point(dom, lay.subs[si].support, [&](std::size_t p, const std::vector<long>&) {
      if (last[p] != static_cast<int>(si)) others[p] += lay.subs[si].theta.at(p, 0);
    });
  for (std::size_t p = 0; p < n; ++p) lay.subs[static_cast<std::size_t>(last[p])].theta.at(p, 0) = 1.0 - others[p];

  return lay;
}

GridFunction local_data_term(const ProblemSpec& spec, const GridFunction& tstar_g, const Subdomain& sub,
                             const DualField& p_prev, const DualField& anchor) {
  const GridDomain& dom = spec.domain;
  const int d = dom.dim(), m = spec.primal_channels();
  DualField e = p_prev;  // e = p_prev - theta*anchor, differing only on the support
  for_each_point(dom, sub.support, [&](std::size_t i, const std::vector<long>&) {
    const double t = sub.theta.at(i, 0);
    for (int k = 0; k < d; ++k)
      for (int c = 0; c < m; ++c) e.at(i, k, c) -= t * anchor.at(i, k, c);
  });
  GridFunction f(dom, m);
  divergence_into(e, f);
  for (std::size_t j = 0; j < f.size(); ++j) f.values()[j] = tstar_g.values()[j] - f.values()[j];
  return f;
}

namespace {

// Runs fn(0..count-1), distributing over `workers` threads. Which thread
// runs which index is the only thing that varies; fn must not touch shared
// mutable state beyond its own slot.
void run_indexed(int workers, std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t spawn = std::min(static_cast<std::size_t>(workers > 0 ? workers - 1 : 0), count > 0 ? count - 1 : 0);
  if (spawn == 0) {
    for (std::size_t j = 0; j < count; ++j) fn(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errs(spawn + 1);
  auto drain = [&](std::size_t slot) {
    try {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= count) return;
        fn(j);
      }
    } catch (...) {
      errs[slot] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(drain, t + 1);
  drain(0);
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// Solves one subdomain from (p_prev, anchor) and returns the accepted update
// direction v~ - theta*anchor, zero outside the subdomain's support. The
// energy safeguard rejects solves that would increase the composed energy,
// which the warm start theta*p_prev cannot rule out in sequential sweeps.
DualField local_update(const ProblemSpec& spec, const GridFunction& tstar_g, double tau_local,
                       const Subdomain& sub, const DualField& p_prev, const DualField& anchor,
                       const DDConfig& cfg) {
  const GridDomain& dom = spec.domain;
  const int d = dom.dim(), m = spec.primal_channels();
  const Box& box = sub.support;

  GridFunction bound(dom, 1);
  DualField v0(dom, m), cand(dom, m);
  for_each_point(dom, box, [&](std::size_t i, const std::vector<long>&) {
    const double t = sub.theta.at(i, 0);
    bound.at(i, 0) = t * spec.lambda.at(i, 0);
    for (int k = 0; k < d; ++k)
      for (int c = 0; c < m; ++c) {
        v0.at(i, k, c) = t * p_prev.at(i, k, c);
        cand.at(i, k, c) = t * anchor.at(i, k, c);
      }
  });

  bool keep = false;
  DualField v(dom, m);
  if (spec.op.is_local()) {
    const GridFunction f = local_data_term(spec, tstar_g, sub, p_prev, anchor);
    SolveControl ctl;
    ctl.tau = tau_local;
    ctl.max_iters = cfg.inner_iters;
    v = solve_window(spec, f, bound, box, ctl, std::move(v0)).p;
    const Box halo = expand_clip(dom, box, 1);
    keep = window_objective(spec, f, v, halo) <= window_objective(spec, f, cand, halo);
  } else {
    DualField base = p_prev;
    for_each_point(dom, box, [&](std::size_t i, const std::vector<long>&) {
      const double t = sub.theta.at(i, 0);
      for (int k = 0; k < d; ++k)
        for (int c = 0; c < m; ++c) base.at(i, k, c) -= t * anchor.at(i, k, c);
    });
    SurrogateConfig scfg;
    scfg.tau = cfg.surrogate_tau;
    scfg.steps = std::max<std::size_t>(1, cfg.surrogate_steps);
    scfg.inner_iters = cfg.inner_iters;
    v = surrogate_solve(spec, bound, box, base, std::move(v0), scfg).v;
    keep = dual_energy(spec, axpy(1.0, v, base)) <= dual_energy(spec, axpy(1.0, cand, base));
  }

  DualField delta(dom, m);
  if (keep)
    for_each_point(dom, box, [&](std::size_t i, const std::vector<long>&) {
      for (int k = 0; k < d; ++k)
        for (int c = 0; c < m; ++c) delta.at(i, k, c) = v.at(i, k, c) - cand.at(i, k, c);
    });
  return delta;
}

}  // namespace

DDResult dd_solve(const ProblemSpec& spec, const DecompLayout& layout, const DDConfig& cfg) {
  return dd_solve(spec, layout, cfg, DualField(spec.domain, spec.primal_channels()));
}

DDResult dd_solve(const ProblemSpec& spec, const DecompLayout& layout, const DDConfig& cfg, DualField p0) {
  if (layout.domain != spec.domain) throw ShapeMismatch("decomposition was built for a different domain");
  if (p0.domain() != spec.domain || p0.channels() != spec.primal_channels())
    throw ShapeMismatch("dd_solve: starting dual field has wrong shape");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be at least 1");
  const std::size_t msub = layout.subs.size();

  double sigma = cfg.sigma;
  if (cfg.mode == DDMode::sequential) {
    if (sigma == 0.0) sigma = 1.0;
    if (!(sigma > 0.0 && sigma <= 1.0)) throw SigmaOutOfRange("sequential mode needs sigma in (0, 1]");
  } else {
    const double cap = 1.0 / static_cast<double>(msub);
    if (sigma == 0.0) sigma = cap;
    if (!(sigma > 0.0 && sigma <= cap))
      throw SigmaOutOfRange("parallel mode needs sigma in (0, 1/" + std::to_string(msub) + "]");
  }

  const GridFunction tstar_g = apply_Tstar(spec, spec.g);
  const double tau_local = spec.op.is_local() ? 1.0 / (8.0 * binv_norm(spec)) : 0.0;
  const int d = spec.domain.dim(), m = spec.primal_channels();

  DDResult res{std::move(p0), GridFunction(spec.domain, m), {}, 0};
  if (cfg.record_energy) res.trace.values.push_back(dual_energy(spec, res.p));

  std::vector<std::vector<std::size_t>> by_color(static_cast<std::size_t>(layout.num_colors));
  for (std::size_t j = 0; j < msub; ++j)
    by_color[static_cast<std::size_t>(layout.subs[j].color)].push_back(j);

  for (std::size_t n = 0; n < cfg.outer_iters; ++n) {
    const DualField anchor = res.p;

    auto sweep = [&](const std::vector<std::size_t>& group, const DualField& prev) {
      std::vector<std::unique_ptr<DualField>> deltas(group.size());
      run_indexed(cfg.workers, group.size(), [&](std::size_t j) {
        deltas[j] = std::make_unique<DualField>(
            local_update(spec, tstar_g, tau_local, layout.subs[group[j]], prev, anchor, cfg));
      });
      for (std::size_t j = 0; j < group.size(); ++j) {
        const DualField& delta = *deltas[j];
        for_each_point(spec.domain, layout.subs[group[j]].support, [&](std::size_t i, const std::vector<long>&) {
          for (int k = 0; k < d; ++k)
            for (int c = 0; c < m; ++c) res.p.at(i, k, c) += sigma * delta.at(i, k, c);
        });
      }
    };

    if (cfg.mode == DDMode::parallel) {
      std::vector<std::size_t> all(msub);
      std::iota(all.begin(), all.end(), 0);
      sweep(all, anchor);
    } else {
      for (const auto& group : by_color)
        if (!group.empty()) sweep(group, res.p);
    }
    ++res.outer_iterations;
    if (cfg.record_energy) res.trace.values.push_back(dual_energy(spec, res.p));
  }

  res.u = primal_recover(spec, res.p);
  return res;
}

}  // namespace tvdd
