#pragma once

#include <cstddef>

#include "tvdd/decomp.hpp"
#include "tvdd/dualsolve.hpp"
#include "tvdd/grid.hpp"
#include "tvdd/model.hpp"

namespace tvdd {

struct SurrogateConfig {
  /// Majorization weight; must exceed ||B^{-1}|| (TauTooSmall otherwise).
  /// 0 picks 1.05*||B^{-1}||.
  double tau = 0.0;
  /// Number of majorization updates (length of the chain).
  std::size_t steps = 1;
  /// Semi-implicit iterations spent on each majorized subproblem.
  std::size_t inner_iters = 50;
  /// Step size inside the majorized subproblem, whose metric is Euclidean;
  /// 0 picks 1/8.
  double inner_tau = 0.0;
  /// Record the exact objective after every majorization update.
  bool record_objective = false;
};

struct SurrogateResult {
  DualField v;
  /// Exact objectives F(v^0), ..., F(v^L) when recorded.
  EnergyTrace objective;
  /// Guaranteed contraction of F - min F: per majorization step (eta) and
  /// for the whole chain (rho = 1 - (1-eta)^steps), valid when each
  /// majorized subproblem is solved exactly.
  double eta = 0.0;
  double rho = 0.0;
};

/// The always-admissible default majorization weight, 1.05*||B^{-1}||.
double default_surrogate_tau(const ProblemSpec& spec);

/// Guaranteed per-step contraction factor of the majorized chain for a given
/// weight. Throws TauTooSmall when tau does not exceed ||B^{-1}||.
double surrogate_eta(const ProblemSpec& spec, double tau);

/// Right-hand side of the majorized subproblem expanded around v:
///   s = div v - (1/tau) B^{-1}(div(base + v) - T*g),
/// with B^{-1} applied exactly (in the transform basis for composed kinds).
GridFunction surrogate_data_term(const ProblemSpec& spec, const DualField& base, const DualField& v, double tau);

/// Minimizes F(v) = 1/2 <div(base+v) - T*g, B^{-1}(div(base+v) - T*g)> over
/// {|v(x)|_F <= bound(x)} by repeatedly replacing the metric B^{-1} with
/// tau*I around the current iterate and solving the resulting plain problem
/// on the window `box` with the semi-implicit iteration. F never increases
/// along the chain even when the inner solves are truncated, because each
/// inner run starts from its expansion point. This is the only route for
/// composed operators, whose B^{-1} is not pointwise.
SurrogateResult surrogate_solve(const ProblemSpec& spec, const GridFunction& bound, const Box& box,
                                const DualField& base, DualField v0, const SurrogateConfig& cfg);

/// The outer nesting: alternates one majorization of the full problem with a
/// domain-decomposition solve of the resulting plain problem (warm-started
/// from the current iterate). The trace holds the exact energy of every
/// majorization iterate; scfg.steps counts the outer updates.
DDResult surrogate_outer_solve(const ProblemSpec& spec, const DecompLayout& layout, const DDConfig& ddcfg,
                               const SurrogateConfig& scfg);

}  // namespace tvdd
