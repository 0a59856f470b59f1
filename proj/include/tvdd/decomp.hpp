#pragma once

#include <cstddef>
#include <vector>

#include "tvdd/dualsolve.hpp"
#include "tvdd/grid.hpp"
#include "tvdd/model.hpp"

namespace tvdd {

/// Closed integer intervals [start_i, start_i + len_i] covering [0, s],
/// consecutive ones overlapping on a segment of length exactly `overlap`.
struct AxisIntervals {
  std::vector<long> len;
  std::vector<long> start;
};

/// Splits [0, s] into `count` such intervals, longer ones last. Throws
/// OverlapTooLarge when some interval would be shorter than twice the
/// overlap, i.e. when only neighbouring intervals may intersect.
AxisIntervals axis_intervals(long s, long count, long overlap);

/// Weight profiles of the intervals: weights[i][x] is 0 outside interval i,
/// ramps linearly over `overlap` steps from each boundary (measured as the
/// integer distance to the complement of the interval) and the profiles are
/// normalized to sum to one at every x in [0, s].
std::vector<std::vector<double>> axis_weights(const AxisIntervals& iv, long s, long overlap);

struct Subdomain {
  std::vector<long> cell;  ///< per-axis interval index
  Box support;             ///< the closed box the weight lives on
  GridFunction theta;      ///< weight field, zero outside `support`
  int color = 0;           ///< parity class of `cell`
};

struct DecompLayout {
  GridDomain domain;
  std::vector<long> counts;
  long overlap = 0;
  /// Row-major over `cell` (last axis fastest), matching the grid order.
  std::vector<Subdomain> subs;
  int num_colors = 1;
};

/// Tensor-product covering of the whole domain with counts[k] subdomains
/// along axis k, all overlaps equal. The weights are tensor products of the
/// axis profiles, adjusted pointwise so that at every grid point the weights
/// sum to 1.0 exactly in floating point.
DecompLayout make_decomposition(const GridDomain& dom, const std::vector<long>& counts, long overlap);

enum class DDMode { sequential, parallel };

struct DDConfig {
  DDMode mode = DDMode::sequential;
  /// Relaxation weight sigma: sequential mode accepts (0, 1], parallel mode
  /// (0, 1/#subdomains]. 0 picks the upper end of the valid range.
  double sigma = 0.0;
  std::size_t outer_iters = 30;
  /// Semi-implicit steps per local solve.
  std::size_t inner_iters = 50;
  /// Majorization updates per local solve (composed operators only).
  std::size_t surrogate_steps = 1;
  double surrogate_tau = 0.0;  ///< 0 picks 1.05*||B^{-1}||
  int workers = 1;
  /// Record the energy of every outer iterate.
  bool record_energy = true;
};

struct DDResult {
  DualField p;
  GridFunction u;
  EnergyTrace trace;
  std::size_t outer_iterations = 0;
};

/// Data term of the local subproblem on `sub` given the working field and
/// the outer anchor:
///   f = T*g - div(p_prev - theta*anchor),
/// chosen so that the subproblem objective 1/2|div v - f|^2_{B^{-1}} equals
/// the full dual energy of the composed field p_prev + (v - theta*anchor),
/// with no additive constant.
GridFunction local_data_term(const ProblemSpec& spec, const GridFunction& tstar_g, const Subdomain& sub,
                             const DualField& p_prev, const DualField& anchor);

/// Overlapping domain-decomposition solver for the constrained dual problem.
///
/// Both modes restrict each local solve to the subdomain's weight support
/// and accept its result only if it does not increase the energy. Sequential
/// mode sweeps the parity colors in ascending order; the subproblems of one
/// color all read the state left by the previous colors and their updates
/// are applied in ascending subdomain order. Parallel mode solves every
/// subproblem against the previous outer iterate. Consequently the result
/// is a pure function of the configuration: `workers` only distributes the
/// solves of a group across threads and never changes a single bit of the
/// output.
DDResult dd_solve(const ProblemSpec& spec, const DecompLayout& layout, const DDConfig& cfg);

/// Same, warm-started from p0 (must be feasible).
DDResult dd_solve(const ProblemSpec& spec, const DecompLayout& layout, const DDConfig& cfg, DualField p0);

}  // namespace tvdd
