#include "tvdd/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "tvdd/diffops.hpp"
#include "tvdd/errors.hpp"

namespace tvdd {

double default_surrogate_tau(const ProblemSpec& spec) { return 1.05 * binv_norm(spec); }

double surrogate_eta(const ProblemSpec& spec, double tau) {
  const double bmax = binv_norm(spec);
  if (!(tau > bmax))
    throw TauTooSmall("majorization weight " + std::to_string(tau) + " must exceed ||B^{-1}|| = " +
                      std::to_string(bmax));
  const double bmin = binv_spectrum_min(spec);
  const double c = (tau - bmin) / bmin;
  return c >= 0.5 ? 1.0 / (4.0 * c) : 1.0 - c;
}

GridFunction surrogate_data_term(const ProblemSpec& spec, const DualField& base, const DualField& v, double tau) {
  // residual of the composed field: R = div(base + v) - T*g
  GridFunction r = divergence(axpy(1.0, base, v));
  axpy_in_place(-1.0, apply_Tstar(spec, spec.g), r);
  GridFunction w = apply_Binv_global(spec, r);
  GridFunction s = divergence(v);
  axpy_in_place(-1.0 / tau, w, s);
  return s;
}

namespace {

double chain_objective(const ProblemSpec& spec, const DualField& base, const DualField& v) {
  return dual_energy(spec, axpy(1.0, base, v));
}

}  // namespace

SurrogateResult surrogate_solve(const ProblemSpec& spec, const GridFunction& bound, const Box& box,
                                const DualField& base, DualField v0, const SurrogateConfig& cfg) {
  if (base.domain() != spec.domain || base.channels() != spec.primal_channels() || v0.domain() != spec.domain ||
      v0.channels() != spec.primal_channels())
    throw ShapeMismatch("surrogate_solve: dual fields have wrong shape");
  const double tau = cfg.tau > 0.0 ? cfg.tau : default_surrogate_tau(spec);
  const double eta = surrogate_eta(spec, tau);  // also validates tau

  // The majorized subproblem min 1/2 |div v - s|^2 over the bound carries a
  // plain Euclidean metric; this derived instance only supplies it to the
  // window solver.
  const ProblemSpec plain = make_problem(spec.domain, ForwardOperator::identity_op(spec.primal_channels()),
                                         GridFunction(spec.domain, spec.primal_channels()), spec.lambda, 0.0);

  const std::size_t steps = std::max<std::size_t>(1, cfg.steps);
  SurrogateResult res{std::move(v0), {}, eta, 1.0 - std::pow(1.0 - eta, static_cast<double>(steps))};
  if (cfg.record_objective) res.objective.values.push_back(chain_objective(spec, base, res.v));

  SolveControl ctl;
  ctl.tau = cfg.inner_tau > 0.0 ? cfg.inner_tau : 0.125;
  ctl.max_iters = cfg.inner_iters;
  for (std::size_t l = 0; l < steps; ++l) {
    const GridFunction s = surrogate_data_term(spec, base, res.v, tau);
    res.v = solve_window(plain, s, bound, box, ctl, std::move(res.v)).p;
    if (cfg.record_objective) res.objective.values.push_back(chain_objective(spec, base, res.v));
  }
  return res;
}

DDResult surrogate_outer_solve(const ProblemSpec& spec, const DecompLayout& layout, const DDConfig& ddcfg,
                               const SurrogateConfig& scfg) {
  const double tau = scfg.tau > 0.0 ? scfg.tau : default_surrogate_tau(spec);
  (void)surrogate_eta(spec, tau);  // validates tau

  const int m = spec.primal_channels();
  const DualField zero(spec.domain, m);
  DDConfig inner = ddcfg;
  inner.record_energy = false;

  DDResult res{DualField(spec.domain, m), GridFunction(spec.domain, m), {}, 0};
  res.trace.values.push_back(dual_energy(spec, res.p));
  const std::size_t steps = std::max<std::size_t>(1, scfg.steps);
  for (std::size_t l = 0; l < steps; ++l) {
    const GridFunction s = surrogate_data_term(spec, zero, res.p, tau);
    const ProblemSpec plain =
        make_problem(spec.domain, ForwardOperator::identity_op(m), s, spec.lambda, 0.0);
    DDResult sub = dd_solve(plain, layout, inner, std::move(res.p));
    res.p = std::move(sub.p);
    ++res.outer_iterations;
    res.trace.values.push_back(dual_energy(spec, res.p));
  }
  res.u = primal_recover(spec, res.p);
  return res;
}

}  // namespace tvdd
