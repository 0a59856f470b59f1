#include "tvdd/dualsolve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tvdd/diffops.hpp"
#include "tvdd/errors.hpp"

namespace tvdd {

bool EnergyTrace::non_increasing(double slack) const {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] + slack) return false;
  return true;
}

void EnergyTrace::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "k,energy\n";
  out.precision(17);
  for (std::size_t k = 0; k < values.size(); ++k) out << k << ',' << values[k] << '\n';
  if (!out) throw IoError("failed while writing " + path);
}

namespace {

void check_window_args(const ProblemSpec& spec, const GridFunction& f, const DualField& v) {
  if (f.domain() != spec.domain || f.channels() != spec.primal_channels())
    throw ShapeMismatch("dual solve: data term has wrong shape");
  if (v.domain() != spec.domain || v.channels() != spec.primal_channels())
    throw ShapeMismatch("dual solve: dual field has wrong shape");
}

void check_bound(const ProblemSpec& spec, const GridFunction& bound) {
  if (bound.domain() != spec.domain || bound.channels() != 1)
    throw ShapeMismatch("dual solve: bound must be a scalar field on the domain");
}

double effective_tau(const ProblemSpec& spec, double tau) {
  if (tau < 0.0) throw std::invalid_argument("step size must be positive");
  return tau > 0.0 ? tau : 1.0 / (8.0 * binv_norm(spec));
}

// One semi-implicit update using caller-provided scratch. r and w are
// full-domain buffers written only on the halo; g holds the d*m forward
// differences of w at the point being updated.
double step_impl(const ProblemSpec& spec, const GridFunction& f, const GridFunction& bound, const Box& box,
                 const Box& halo, double tau, DualField& v, GridFunction& r, GridFunction& w,
                 std::vector<double>& g) {
  const GridDomain& dom = spec.domain;
  const int d = dom.dim();
  const int m = v.channels();

  divergence_into(v, r, halo);
  for_each_point(dom, halo, [&](std::size_t i, const std::vector<long>&) {
    for (int c = 0; c < m; ++c) r.at(i, c) -= f.at(i, c);
  });
  apply_Binv_box(spec, r, halo, w);

  double change = 0.0;
  for_each_point(dom, box, [&](std::size_t i, const std::vector<long>& x) {
    const double bnd = bound.at(i, 0);
    if (bnd == 0.0) {
      for (int k = 0; k < d; ++k)
        for (int c = 0; c < m; ++c) {
          change = std::max(change, std::abs(v.at(i, k, c)));
          v.at(i, k, c) = 0.0;
        }
      return;
    }
    double gn2 = 0.0;
    for (int k = 0; k < d; ++k) {
      const std::size_t sk = dom.stride(k);
      const bool edge = x[static_cast<std::size_t>(k)] == dom.hi(k);
      for (int c = 0; c < m; ++c) {
        const double gv = edge ? 0.0 : w.at(i + sk, c) - w.at(i, c);
        g[static_cast<std::size_t>(k * m + c)] = gv;
        gn2 += gv * gv;
      }
    }
    const double denom = bnd + tau * std::sqrt(gn2);
    for (int k = 0; k < d; ++k)
      for (int c = 0; c < m; ++c) {
        const double nv = bnd * (v.at(i, k, c) + tau * g[static_cast<std::size_t>(k * m + c)]) / denom;
        change = std::max(change, std::abs(nv - v.at(i, k, c)));
        v.at(i, k, c) = nv;
      }
  });
  return change;
}

}  // namespace

double dual_step(const ProblemSpec& spec, const GridFunction& f, const GridFunction& bound, const Box& box,
                 double tau, DualField& v) {
  check_window_args(spec, f, v);
  check_bound(spec, bound);
  if (tau <= 0.0) throw std::invalid_argument("step size must be positive");
  const Box halo = expand_clip(spec.domain, box, 1);
  GridFunction r(spec.domain, v.channels()), w(spec.domain, v.channels());
  std::vector<double> g(static_cast<std::size_t>(spec.domain.dim() * v.channels()));
  return step_impl(spec, f, bound, box, halo, tau, v, r, w, g);
}

double window_objective(const ProblemSpec& spec, const GridFunction& f, const DualField& v, const Box& box) {
  check_window_args(spec, f, v);
  const int m = v.channels();
  GridFunction r(spec.domain, m), w(spec.domain, m);
  divergence_into(v, r, box);
  for_each_point(spec.domain, box, [&](std::size_t i, const std::vector<long>&) {
    for (int c = 0; c < m; ++c) r.at(i, c) -= f.at(i, c);
  });
  apply_Binv_box(spec, r, box, w);
  double s = 0.0;
  for_each_point(spec.domain, box, [&](std::size_t i, const std::vector<long>&) {
    for (int c = 0; c < m; ++c) s += r.at(i, c) * w.at(i, c);
  });
  return 0.5 * s;
}

SolveResult solve_window(const ProblemSpec& spec, const GridFunction& f, const GridFunction& bound,
                         const Box& box, const SolveControl& ctl, DualField v0) {
  check_window_args(spec, f, v0);
  check_bound(spec, bound);
  const double tau = effective_tau(spec, ctl.tau);
  const Box halo = expand_clip(spec.domain, box, 1);
  SolveResult res{std::move(v0), 0, {}};
  GridFunction r(spec.domain, res.p.channels()), w(spec.domain, res.p.channels());
  std::vector<double> g(static_cast<std::size_t>(spec.domain.dim() * res.p.channels()));
  if (ctl.record_energy) res.trace.values.push_back(window_objective(spec, f, res.p, halo));
  for (std::size_t it = 0; it < ctl.max_iters; ++it) {
    const double change = step_impl(spec, f, bound, box, halo, tau, res.p, r, w, g);
    ++res.iterations;
    if (ctl.record_energy) res.trace.values.push_back(window_objective(spec, f, res.p, halo));
    if (ctl.tol > 0.0 && change <= ctl.tol) break;
  }
  return res;
}

SolveResult solve_dual(const ProblemSpec& spec, const SolveControl& ctl) {
  if (!spec.op.is_local())
    throw GlobalOperatorRequiresSurrogate(
        "the dual iteration needs a pointwise B^{-1}; route composed transform operators through the surrogate");
  const GridFunction f = apply_Tstar(spec, spec.g);
  const double tau = effective_tau(spec, ctl.tau);
  const Box box = whole_box(spec.domain);
  SolveResult res{DualField(spec.domain, spec.primal_channels()), 0, {}};
  GridFunction r(spec.domain, res.p.channels()), w(spec.domain, res.p.channels());
  std::vector<double> g(static_cast<std::size_t>(spec.domain.dim() * res.p.channels()));
  if (ctl.record_energy) res.trace.values.push_back(dual_energy(spec, res.p));
  for (std::size_t it = 0; it < ctl.max_iters; ++it) {
    const double change = step_impl(spec, f, spec.lambda, box, box, tau, res.p, r, w, g);
    ++res.iterations;
    if (ctl.record_energy) res.trace.values.push_back(dual_energy(spec, res.p));
    if (ctl.tol > 0.0 && change <= ctl.tol) break;
  }
  return res;
}

}  // namespace tvdd
