#include "tvdd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvdd/diffops.hpp"
#include "tvdd/rng.hpp"
#include "tvdd/wavelet.hpp"

namespace tvdd {

namespace {

void require_binary(const GridFunction& f, const char* what) {
  for (double v : f.values())
    if (v != 0.0 && v != 1.0) throw std::invalid_argument(std::string(what) + " must be a 0/1 field");
}

}  // namespace

ForwardOperator ForwardOperator::identity_op(int channels) {
  ForwardOperator op;
  op.kind = Kind::identity;
  op.channels = channels;
  return op;
}

ForwardOperator ForwardOperator::mask_op(GridFunction lost_pixels) {
  require_binary(lost_pixels, "pixel mask");
  if (lost_pixels.channels() != 1) throw ShapeMismatch("pixel mask must have one channel");
  ForwardOperator op;
  op.kind = Kind::mask;
  op.channels = 1;
  op.mask = std::move(lost_pixels);
  return op;
}

ForwardOperator ForwardOperator::flow_op(DualField weights) {
  if (weights.channels() != 1) throw ShapeMismatch("flow weights must have one channel per axis");
  ForwardOperator op;
  op.kind = Kind::pointwise_flow;
  op.channels = weights.domain().dim();
  op.flow_weights = std::move(weights);
  return op;
}

ForwardOperator ForwardOperator::wavelet_op(GridFunction lost_coeffs) {
  require_binary(lost_coeffs, "coefficient mask");
  if (lost_coeffs.channels() != 1) throw ShapeMismatch("coefficient mask must have one channel");
  ForwardOperator op;
  op.kind = Kind::composed_wavelet;
  op.channels = 1;
  op.coeff_mask = std::move(lost_coeffs);
  return op;
}

ProblemSpec make_problem(GridDomain domain, ForwardOperator op, GridFunction g, GridFunction lambda, double beta) {
  if (beta < 0.0) throw std::invalid_argument("beta must be nonnegative");
  if (lambda.domain() != domain || lambda.channels() != 1) throw ShapeMismatch("lambda must be a 1-channel field on the domain");
  for (double v : lambda.values())
    if (!(v >= 0.0)) throw std::invalid_argument("lambda must be nonnegative everywhere");
  if (g.domain() != domain) throw ShapeMismatch("data field lives on a different domain");

  int data_channels = 0;
  switch (op.kind) {
    case ForwardOperator::Kind::identity:
      op.channels = g.channels();
      data_channels = g.channels();
      break;
    case ForwardOperator::Kind::mask:
      if (op.mask.domain() != domain) throw ShapeMismatch("pixel mask lives on a different domain");
      op.channels = g.channels();
      data_channels = g.channels();
      break;
    case ForwardOperator::Kind::pointwise_flow:
      if (op.flow_weights.domain() != domain) throw ShapeMismatch("flow weights live on a different domain");
      data_channels = 1;
      break;
    case ForwardOperator::Kind::composed_wavelet:
      if (op.coeff_mask.domain() != domain) throw ShapeMismatch("coefficient mask lives on a different domain");
      data_channels = 1;
      break;
  }
  if (g.channels() != data_channels) throw ShapeMismatch("data channels do not match the forward operator");

  ProblemSpec spec;
  spec.domain = std::move(domain);
  spec.op = std::move(op);
  spec.g = std::move(g);
  spec.lambda = std::move(lambda);
  spec.beta = beta;
  return spec;
}

ProblemSpec make_problem(GridDomain domain, ForwardOperator op, GridFunction g, double lambda, double beta) {
  GridFunction bound(domain, 1);
  bound.fill(lambda);
  return make_problem(std::move(domain), std::move(op), std::move(g), std::move(bound), beta);
}

GridFunction apply_T(const ProblemSpec& spec, const GridFunction& u) {
  if (u.domain() != spec.domain || u.channels() != spec.primal_channels())
    throw ShapeMismatch("apply_T: input has wrong shape");
  switch (spec.op.kind) {
    case ForwardOperator::Kind::identity:
      return u;
    case ForwardOperator::Kind::mask: {
      GridFunction out = u;
      const std::size_t n = spec.domain.num_points();
      for (std::size_t i = 0; i < n; ++i)
        if (spec.op.mask.at(i, 0) != 0.0)
          for (int c = 0; c < u.channels(); ++c) out.at(i, c) = 0.0;
      return out;
    }
    case ForwardOperator::Kind::pointwise_flow: {
      GridFunction out(spec.domain, 1);
      const std::size_t n = spec.domain.num_points();
      const int d = spec.domain.dim();
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) s += spec.op.flow_weights.at(i, k, 0) * u.at(i, k);
        out.at(i, 0) = s;
      }
      return out;
    }
    case ForwardOperator::Kind::composed_wavelet:
      return mask_coeffs(haar_forward(u), spec.op.coeff_mask);
  }
  throw std::logic_error("unreachable");
}

GridFunction apply_Tstar(const ProblemSpec& spec, const GridFunction& w) {
  if (w.domain() != spec.domain || w.channels() != spec.g.channels())
    throw ShapeMismatch("apply_Tstar: input has wrong shape");
  switch (spec.op.kind) {
    case ForwardOperator::Kind::identity:
      return w;
    case ForwardOperator::Kind::mask: {
      GridFunction out = w;
      const std::size_t n = spec.domain.num_points();
      for (std::size_t i = 0; i < n; ++i)
        if (spec.op.mask.at(i, 0) != 0.0)
          for (int c = 0; c < w.channels(); ++c) out.at(i, c) = 0.0;
      return out;
    }
    case ForwardOperator::Kind::pointwise_flow: {
      GridFunction out(spec.domain, spec.domain.dim());
      const std::size_t n = spec.domain.num_points();
      for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < spec.domain.dim(); ++k) out.at(i, k) = spec.op.flow_weights.at(i, k, 0) * w.at(i, 0);
      return out;
    }
    case ForwardOperator::Kind::composed_wavelet:
      return haar_inverse(mask_coeffs(w, spec.op.coeff_mask));
  }
  throw std::logic_error("unreachable");
}

GridFunction apply_B(const ProblemSpec& spec, const GridFunction& u) {
  GridFunction out = apply_Tstar(spec, apply_T(spec, u));
  axpy_in_place(spec.beta, u, out);
  return out;
}

void apply_Binv_box(const ProblemSpec& spec, const GridFunction& w, const Box& box, GridFunction& out) {
  if (w.domain() != spec.domain || w.channels() != spec.primal_channels())
    throw ShapeMismatch("apply_Binv_box: input has wrong shape");
  require_same_shape(w, out);
  if (!spec.op.is_local())
    throw GlobalOperatorRequiresSurrogate("B^{-1} of a composed transform operator is not pointwise; use the surrogate iteration");
  const double beta = spec.beta;
  const int m = w.channels();
  switch (spec.op.kind) {
    case ForwardOperator::Kind::identity: {
      const double f = 1.0 / (1.0 + beta);
      for_each_point(spec.domain, box, [&](std::size_t i, const std::vector<long>&) {
        for (int c = 0; c < m; ++c) out.at(i, c) = w.at(i, c) * f;
      });
      return;
    }
    case ForwardOperator::Kind::mask: {
      if (beta == 0.0) throw NotCoercive("beta = 0 with a pixel mask: B is singular");
      const double on = 1.0 / beta, off = 1.0 / (1.0 + beta);
      for_each_point(spec.domain, box, [&](std::size_t i, const std::vector<long>&) {
        const double f = spec.op.mask.at(i, 0) != 0.0 ? on : off;
        for (int c = 0; c < m; ++c) out.at(i, c) = w.at(i, c) * f;
      });
      return;
    }
    case ForwardOperator::Kind::pointwise_flow: {
      if (beta == 0.0) throw NotCoercive("beta = 0 with a pointwise flow operator: B is singular");
      const int d = spec.domain.dim();
      for_each_point(spec.domain, box, [&](std::size_t i, const std::vector<long>&) {
        double wn = 0.0, wr = 0.0;
        for (int k = 0; k < d; ++k) {
          const double wk = spec.op.flow_weights.at(i, k, 0);
          wn += wk * wk;
          wr += wk * w.at(i, k);
        }
        const double corr = wr / (beta * (beta + wn));
        for (int k = 0; k < d; ++k) out.at(i, k) = w.at(i, k) / beta - spec.op.flow_weights.at(i, k, 0) * corr;
      });
      return;
    }
    case ForwardOperator::Kind::composed_wavelet:
      break;
  }
  throw std::logic_error("unreachable");
}

GridFunction apply_Binv(const ProblemSpec& spec, const GridFunction& w) {
  GridFunction out(spec.domain, w.channels());
  apply_Binv_box(spec, w, whole_box(spec.domain), out);
  return out;
}

GridFunction apply_Binv_global(const ProblemSpec& spec, const GridFunction& w) {
  if (spec.op.is_local()) return apply_Binv(spec, w);
  if (w.domain() != spec.domain || w.channels() != 1) throw ShapeMismatch("apply_Binv_global: input has wrong shape");
  if (spec.beta == 0.0) throw NotCoercive("beta = 0 with a coefficient mask: B is singular");
  // B is diagonal in the transform basis: beta on lost coefficients,
  // 1 + beta elsewhere.
  GridFunction c = haar_forward(w);
  const double on = 1.0 / spec.beta, off = 1.0 / (1.0 + spec.beta);
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] *= spec.op.coeff_mask.data()[i] != 0.0 ? on : off;
  return haar_inverse(c);
}

double binv_norm(const ProblemSpec& spec) {
  const double beta = spec.beta;
  switch (spec.op.kind) {
    case ForwardOperator::Kind::identity:
      return 1.0 / (1.0 + beta);
    case ForwardOperator::Kind::mask: {
      bool any_masked = false;
      for (double v : spec.op.mask.values()) any_masked |= v != 0.0;
      if (!any_masked) return 1.0 / (1.0 + beta);
      if (beta == 0.0) throw NotCoercive("beta = 0 with a pixel mask: B is singular");
      return 1.0 / beta;
    }
    case ForwardOperator::Kind::pointwise_flow: {
      if (spec.domain.dim() >= 2) {
        if (beta == 0.0) throw NotCoercive("beta = 0 with a pointwise flow operator: B is singular");
        return 1.0 / beta;  // the weight vector has a nontrivial orthogonal complement
      }
      double lmin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < spec.domain.num_points(); ++i) {
        const double w0 = spec.op.flow_weights.at(i, 0, 0);
        lmin = std::min(lmin, beta + w0 * w0);
      }
      if (lmin == 0.0) throw NotCoercive("vanishing flow weight with beta = 0: B is singular");
      return 1.0 / lmin;
    }
    case ForwardOperator::Kind::composed_wavelet: {
      bool any_masked = false;
      for (double v : spec.op.coeff_mask.values()) any_masked |= v != 0.0;
      if (!any_masked) return 1.0 / (1.0 + beta);
      if (beta == 0.0) throw NotCoercive("beta = 0 with a coefficient mask: B is singular");
      return 1.0 / beta;
    }
  }
  throw std::logic_error("unreachable");
}

double binv_spectrum_min(const ProblemSpec& spec) {
  const double beta = spec.beta;
  switch (spec.op.kind) {
    case ForwardOperator::Kind::identity:
      return 1.0 / (1.0 + beta);
    case ForwardOperator::Kind::mask: {
      bool any_kept = false;
      for (double v : spec.op.mask.values()) any_kept |= v == 0.0;
      return any_kept ? 1.0 / (1.0 + beta) : 1.0 / beta;
    }
    case ForwardOperator::Kind::pointwise_flow: {
      double wmax = 0.0;
      for (std::size_t i = 0; i < spec.domain.num_points(); ++i) {
        double wn = 0.0;
        for (int k = 0; k < spec.domain.dim(); ++k) {
          const double wk = spec.op.flow_weights.at(i, k, 0);
          wn += wk * wk;
        }
        wmax = std::max(wmax, wn);
      }
      return 1.0 / (beta + wmax);
    }
    case ForwardOperator::Kind::composed_wavelet: {
      bool any_kept = false;
      for (double v : spec.op.coeff_mask.values()) any_kept |= v == 0.0;
      return any_kept ? 1.0 / (1.0 + beta) : 1.0 / beta;
    }
  }
  throw std::logic_error("unreachable");
}

double dual_energy(const ProblemSpec& spec, const DualField& p) {
  if (p.domain() != spec.domain || p.channels() != spec.primal_channels())
    throw ShapeMismatch("dual_energy: dual field has wrong shape");
  GridFunction r = divergence(p);
  axpy_in_place(-1.0, apply_Tstar(spec, spec.g), r);
  return 0.5 * dot(r, apply_Binv_global(spec, r));
}

GridFunction primal_recover(const ProblemSpec& spec, const DualField& p) {
  if (p.domain() != spec.domain || p.channels() != spec.primal_channels())
    throw ShapeMismatch("primal_recover: dual field has wrong shape");
  GridFunction r = apply_Tstar(spec, spec.g);
  axpy_in_place(-1.0, divergence(p), r);
  return apply_Binv_global(spec, r);
}

DualField project_K(const DualField& p, const GridFunction& lambda) {
  if (p.domain() != lambda.domain() || lambda.channels() != 1) throw ShapeMismatch("project_K: bound has wrong shape");
  DualField out = p;
  const std::size_t n = p.domain().num_points();
  const std::size_t dm = static_cast<std::size_t>(p.axes()) * static_cast<std::size_t>(p.channels());
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dm; ++j) {
      const double v = out.data()[i * dm + j];
      s += v * v;
    }
    const double nrm = std::sqrt(s);
    const double lim = lambda.at(i, 0);
    if (nrm > lim) {
      const double f = nrm > 0.0 ? lim / nrm : 0.0;
      for (std::size_t j = 0; j < dm; ++j) out.data()[i * dm + j] *= f;
    }
  }
  return out;
}

double feasibility_violation(const DualField& p, const GridFunction& lambda) {
  if (p.domain() != lambda.domain() || lambda.channels() != 1)
    throw ShapeMismatch("feasibility_violation: bound has wrong shape");
  GridFunction f = frobenius_pointwise(p);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, f.data()[i] - lambda.data()[i]);
  return worst;
}

GridFunction random_mask(const GridDomain& dom, double prob, std::uint64_t seed) {
  if (!(prob >= 0.0 && prob <= 1.0)) throw std::invalid_argument("mask probability must be in [0, 1]");
  Rng rng(seed);
  GridFunction out(dom, 1);
  for (double& v : out.values()) v = rng.bernoulli(prob) ? 1.0 : 0.0;
  return out;
}

}  // namespace tvdd
