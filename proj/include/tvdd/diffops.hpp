#pragma once

#include <cstdint>

#include "tvdd/grid.hpp"

namespace tvdd {

/// Forward difference along axis k with zero at the upper boundary:
///   (D+ u)(x) = u(x + e_k) - u(x),  and 0 where x_k = b_k.
GridFunction forward_diff(const GridFunction& u, int k);

/// Backward difference along axis k, the negative adjoint of forward_diff:
///   (D- v)(x) = v(x)            where x_k = a_k,
///             = -v(x - e_k)     where x_k = b_k,
///             = v(x) - v(x - e_k) otherwise.
GridFunction backward_diff(const GridFunction& v, int k);

/// Discrete gradient: component k is forward_diff(u, k).
DualField gradient(const GridFunction& u);
void gradient_into(const GridFunction& u, DualField& out);

/// Discrete divergence: sum over k of backward_diff of the k-th component.
/// Adjointness: <gradient(u), p> = -<u, divergence(p)>.
GridFunction divergence(const DualField& p);
void divergence_into(const DualField& p, GridFunction& out);

/// Windowed divergence: writes out(x) only for points inside `box`, leaving
/// the rest of `out` untouched. Values agree exactly with the full form.
void divergence_into(const DualField& p, GridFunction& out, const Box& box);

/// Estimate of the squared operator norm of the gradient on this domain,
/// computed by power iteration on -div(grad(.)) from a seeded random start.
/// Runs at least 200 iterations and stops once the Rayleigh quotient
/// stagnates (relative change far below 1e-10). The estimate never exceeds
/// the true norm, which is bounded by 4*d.
double grad_norm_sq_estimate(const GridDomain& dom, int channels,
                             std::uint64_t seed = 0x2545f4914f6cdd1dULL);

}  // namespace tvdd
