#pragma once

#include <cstdint>

#include "tvdd/grid.hpp"

namespace tvdd {

/// Linear forward operators T of the data term.
struct ForwardOperator {
  enum class Kind { identity, mask, pointwise_flow, composed_wavelet };

  Kind kind = Kind::identity;
  int channels = 1;         // channels m of the primal space
  GridFunction mask;        // 1-channel 0/1; 1 marks a lost pixel       [mask]
  DualField flow_weights;   // (d,1) per-pixel weight vector             [pointwise_flow]
  GridFunction coeff_mask;  // 1-channel 0/1; 1 marks a lost coefficient [composed_wavelet]

  static ForwardOperator identity_op(int channels = 1);
  /// T zeroes the pixels where lost_pixels != 0, acting on all channels.
  static ForwardOperator mask_op(GridFunction lost_pixels);
  /// (T u)(x) = sum_k w_k(x) u_k(x); the number of channels equals the
  /// domain dimension.
  static ForwardOperator flow_op(DualField weights);
  /// T = (zero lost coefficients) after the full orthogonal Haar transform.
  static ForwardOperator wavelet_op(GridFunction lost_coeffs);

  /// True when B^{-1} acts pixel-by-pixel.
  bool is_local() const { return kind != Kind::composed_wavelet; }
};

/// One dual problem instance:
///   minimize 1/2 ||div p - T* g||^2 in the B^{-1} inner product over the
///   pointwise Frobenius balls |p(x)|_F <= lambda(x), with B = T*T + beta I.
struct ProblemSpec {
  GridDomain domain;
  ForwardOperator op;
  GridFunction g;       // observed data, in the range space of T
  GridFunction lambda;  // 1-channel pointwise bound, >= 0
  double beta = 0.0;

  int primal_channels() const { return op.channels; }
};

ProblemSpec make_problem(GridDomain domain, ForwardOperator op, GridFunction g, GridFunction lambda, double beta);
/// Constant bound broadcast over the domain.
ProblemSpec make_problem(GridDomain domain, ForwardOperator op, GridFunction g, double lambda, double beta);

GridFunction apply_T(const ProblemSpec& spec, const GridFunction& u);
GridFunction apply_Tstar(const ProblemSpec& spec, const GridFunction& w);
GridFunction apply_B(const ProblemSpec& spec, const GridFunction& u);

/// Pointwise application of B^{-1}. Throws GlobalOperatorRequiresSurrogate
/// when T couples distant lattice points (iterative solvers must then use
/// the surrogate route) and NotCoercive when beta = 0 makes B singular.
GridFunction apply_Binv(const ProblemSpec& spec, const GridFunction& w);

/// Same inverse restricted to a window: writes out(x) only inside `box`.
void apply_Binv_box(const ProblemSpec& spec, const GridFunction& w, const Box& box, GridFunction& out);

/// Exact B^{-1} for every operator kind; global operators are inverted
/// diagonally in their orthogonal transform basis. Intended for energy
/// reporting, primal recovery and the surrogate right-hand side only.
GridFunction apply_Binv_global(const ProblemSpec& spec, const GridFunction& w);

/// Largest eigenvalue of B^{-1} present in the instance (= ||B^{-1}||).
double binv_norm(const ProblemSpec& spec);
/// Smallest eigenvalue of B^{-1} present in the instance (1/||B||).
double binv_spectrum_min(const ProblemSpec& spec);

/// D(p) = 1/2 <div p - T* g, B^{-1} (div p - T* g)>.
double dual_energy(const ProblemSpec& spec, const DualField& p);

/// u = B^{-1}(T* g - div p).
GridFunction primal_recover(const ProblemSpec& spec, const DualField& p);

/// Pointwise projection onto the Frobenius balls of radius lambda(x).
DualField project_K(const DualField& p, const GridFunction& lambda);

/// max over x of |p(x)|_F - lambda(x); feasible iff <= 0 (up to tolerance).
double feasibility_violation(const DualField& p, const GridFunction& lambda);

/// 0/1 field with independent Bernoulli(prob) entries, deterministic in seed.
GridFunction random_mask(const GridDomain& dom, double prob, std::uint64_t seed);

}  // namespace tvdd
