#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tvdd/grid.hpp"
#include "tvdd/model.hpp"

namespace tvdd {

/// Energy of each accepted iterate, values[0] being the starting point.
struct EnergyTrace {
  std::vector<double> values;

  /// True when no entry exceeds its predecessor by more than `slack`.
  bool non_increasing(double slack = 0.0) const;
  /// Writes "k,energy" rows with full double precision.
  void write_csv(const std::string& path) const;
};

struct SolveControl {
  /// Step size of the semi-implicit update; 0 selects 1/(8*||B^{-1}||).
  double tau = 0.0;
  std::size_t max_iters = 500;
  /// Early stop once the largest pointwise change falls below this; 0 runs
  /// the full budget.
  double tol = 0.0;
  /// Record the objective of every iterate (adds one evaluation per step).
  bool record_energy = false;
};

struct SolveResult {
  DualField p;
  std::size_t iterations = 0;
  EnergyTrace trace;
};

/// One semi-implicit update of
///   min { E(v) = 1/2 <div v - f, B^{-1}(div v - f)> : |v(x)|_F <= bound(x) }
/// restricted to points of `box`:
///   w = B^{-1}(div v - f),  v <- bound*(v + tau*grad w)/(bound + tau*|grad w|_F).
/// The update keeps v feasible and never increases E for tau <= 1/(8*||B^{-1}||).
/// Returns the largest absolute component change. Only the pointwise-invertible
/// operator kinds are accepted (see apply_Binv).
double dual_step(const ProblemSpec& spec, const GridFunction& f, const GridFunction& bound, const Box& box,
                 double tau, DualField& v);

/// Runs dual_step until the iteration budget or the tolerance is reached.
/// v0 must satisfy the bound (project_K first otherwise) and be zero outside
/// `box`; the recorded energies are window objectives over the one-point halo
/// of `box`, which differ from E by a constant independent of v.
SolveResult solve_window(const ProblemSpec& spec, const GridFunction& f, const GridFunction& bound,
                         const Box& box, const SolveControl& ctl, DualField v0);

/// E restricted to a box: 1/2 sum_{x in box} <(div v - f)(x), (B^{-1}(div v - f))(x)>.
/// Two fields that agree outside `box`'s interior-facing halo compare exactly.
double window_objective(const ProblemSpec& spec, const GridFunction& f, const DualField& v, const Box& box);

/// Solves the full dual problem min_{|p| <= lambda} D(p) from p = 0, with
/// f = T*g and the whole domain as the window. The trace records D itself.
SolveResult solve_dual(const ProblemSpec& spec, const SolveControl& ctl);

}  // namespace tvdd
