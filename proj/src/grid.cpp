#include "tvdd/grid.hpp"

#include <cmath>
#include <string>

namespace tvdd {

GridDomain::GridDomain(std::vector<long> a, std::vector<long> b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size() || a_.empty()) throw ShapeMismatch("domain bounds must have equal nonzero dimension");
  for (std::size_t k = 0; k < a_.size(); ++k)
    if (b_[k] < a_[k]) throw ShapeMismatch("domain upper bound below lower bound");
  strides_.assign(a_.size(), 1);
  npoints_ = 1;
  for (std::size_t k = a_.size(); k-- > 0;) {
    strides_[k] = npoints_;
    npoints_ *= static_cast<std::size_t>(b_[k] - a_[k] + 1);
  }
}

GridDomain GridDomain::from_sizes(const std::vector<long>& sizes) {
  std::vector<long> a(sizes.size(), 0), b(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 1) throw ShapeMismatch("domain extent must be positive");
    b[k] = sizes[k] - 1;
  }
  return GridDomain(std::move(a), std::move(b));
}

std::size_t GridDomain::index(const std::vector<long>& x) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < a_.size(); ++k) idx += static_cast<std::size_t>(x[k] - a_[k]) * strides_[k];
  return idx;
}

std::vector<long> GridDomain::coords(std::size_t idx) const {
  std::vector<long> x(a_.size());
  for (std::size_t k = 0; k < a_.size(); ++k) {
    x[k] = a_[k] + static_cast<long>(idx / strides_[k]);
    idx %= strides_[k];
  }
  return x;
}

Box whole_box(const GridDomain& dom) {
  Box box;
  box.lo.resize(static_cast<std::size_t>(dom.dim()));
  box.hi.resize(static_cast<std::size_t>(dom.dim()));
  for (int k = 0; k < dom.dim(); ++k) {
    box.lo[static_cast<std::size_t>(k)] = dom.lo(k);
    box.hi[static_cast<std::size_t>(k)] = dom.hi(k);
  }
  return box;
}

Box expand_clip(const GridDomain& dom, Box box, long by) {
  for (int k = 0; k < dom.dim(); ++k) {
    auto ku = static_cast<std::size_t>(k);
    box.lo[ku] = std::max(dom.lo(k), box.lo[ku] - by);
    box.hi[ku] = std::min(dom.hi(k), box.hi[ku] + by);
  }
  return box;
}

GridFunction::GridFunction(GridDomain dom, int channels) : dom_(std::move(dom)), m_(channels) {
  if (m_ < 1) throw ShapeMismatch("field needs at least one channel");
  v_.assign(dom_.num_points() * static_cast<std::size_t>(m_), 0.0);
}

void GridFunction::fill(double value) { v_.assign(v_.size(), value); }

DualField::DualField(GridDomain dom, int channels) : dom_(std::move(dom)), d_(dom_.dim()), m_(channels) {
  if (m_ < 1) throw ShapeMismatch("field needs at least one channel");
  v_.assign(dom_.num_points() * static_cast<std::size_t>(d_) * static_cast<std::size_t>(m_), 0.0);
}

void DualField::fill(double value) { v_.assign(v_.size(), value); }

void require_same_shape(const GridFunction& a, const GridFunction& b) {
  if (a.domain() != b.domain() || a.channels() != b.channels())
    throw ShapeMismatch("grid functions have different shape");
}

void require_same_shape(const DualField& a, const DualField& b) {
  if (a.domain() != b.domain() || a.channels() != b.channels())
    throw ShapeMismatch("dual fields have different shape");
}

GridFunction frobenius_pointwise(const DualField& p) {
  GridFunction out(p.domain(), 1);
  const std::size_t n = p.domain().num_points();
  const std::size_t dm = static_cast<std::size_t>(p.axes()) * static_cast<std::size_t>(p.channels());
  const double* v = p.data();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dm; ++j) {
      double t = v[i * dm + j];
      s += t * t;
    }
    out.at(i, 0) = std::sqrt(s);
  }
  return out;
}

namespace {

template <class Field>
Field axpy_impl(double alpha, const Field& x, const Field& y) {
  require_same_shape(x, y);
  Field out = y;
  double* o = out.data();
  const double* xv = x.data();
  for (std::size_t i = 0; i < out.size(); ++i) o[i] += alpha * xv[i];
  return out;
}

template <class Field>
void axpy_in_place_impl(double alpha, const Field& x, Field& y) {
  require_same_shape(x, y);
  double* yv = y.data();
  const double* xv = x.data();
  for (std::size_t i = 0; i < y.size(); ++i) yv[i] += alpha * xv[i];
}

}  // namespace

GridFunction axpy(double alpha, const GridFunction& x, const GridFunction& y) { return axpy_impl(alpha, x, y); }
DualField axpy(double alpha, const DualField& x, const DualField& y) { return axpy_impl(alpha, x, y); }
void axpy_in_place(double alpha, const GridFunction& x, GridFunction& y) { axpy_in_place_impl(alpha, x, y); }
void axpy_in_place(double alpha, const DualField& x, DualField& y) { axpy_in_place_impl(alpha, x, y); }

void scale_in_place(double alpha, GridFunction& x) {
  for (double& v : x.values()) v *= alpha;
}
void scale_in_place(double alpha, DualField& x) {
  for (double& v : x.values()) v *= alpha;
}

namespace detail {

double pairwise_dot(const double* a, const double* b, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_dot(a, b, h) + pairwise_dot(a + h, b + h, n - h);
}

double pairwise_sum(const double* a, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(a, h) + pairwise_sum(a + h, n - h);
}

}  // namespace detail

double dot(const GridFunction& a, const GridFunction& b) {
  require_same_shape(a, b);
  return detail::pairwise_dot(a.data(), b.data(), a.size());
}

double dot(const DualField& a, const DualField& b) {
  require_same_shape(a, b);
  return detail::pairwise_dot(a.data(), b.data(), a.size());
}

double norm_l2(const GridFunction& a) { return std::sqrt(dot(a, a)); }
double norm_l2(const DualField& a) { return std::sqrt(dot(a, a)); }

DualField scale_pointwise(const GridFunction& s, const DualField& p) {
  if (s.domain() != p.domain() || s.channels() != 1)
    throw ShapeMismatch("scale_pointwise: weight must be a scalar field on the same domain");
  DualField out = p;
  const std::size_t n = p.domain().num_points();
  const int d = p.axes(), m = p.channels();
  for (std::size_t i = 0; i < n; ++i) {
    const double f = s.at(i, 0);
    for (int k = 0; k < d; ++k)
      for (int c = 0; c < m; ++c) out.at(i, k, c) *= f;
  }
  return out;
}

}  // namespace tvdd
