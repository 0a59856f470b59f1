#pragma once

#include <cstddef>
#include <vector>

#include "tvdd/errors.hpp"

namespace tvdd {

/// Axis-aligned box of lattice points [a, b] in Z^d, bounds inclusive.
class GridDomain {
 public:
  GridDomain() = default;
  GridDomain(std::vector<long> a, std::vector<long> b);

  /// Domain [0, n_k - 1] per axis.
  static GridDomain from_sizes(const std::vector<long>& sizes);

  int dim() const { return static_cast<int>(a_.size()); }
  long lo(int k) const { return a_[static_cast<std::size_t>(k)]; }
  long hi(int k) const { return b_[static_cast<std::size_t>(k)]; }
  long extent(int k) const { return hi(k) - lo(k) + 1; }
  std::size_t num_points() const { return npoints_; }
  /// Flat-index distance between neighbors along axis k.
  std::size_t stride(int k) const { return strides_[static_cast<std::size_t>(k)]; }

  bool operator==(const GridDomain& o) const { return a_ == o.a_ && b_ == o.b_; }
  bool operator!=(const GridDomain& o) const { return !(*this == o); }

  /// Flat index of a lattice point. Points are ordered row-major: the last
  /// coordinate varies fastest.
  std::size_t index(const std::vector<long>& x) const;
  std::vector<long> coords(std::size_t idx) const;

 private:
  std::vector<long> a_, b_;
  std::vector<std::size_t> strides_;
  std::size_t npoints_ = 0;
};

/// Inclusive coordinate box used to restrict loops to part of a domain.
struct Box {
  std::vector<long> lo, hi;
};

/// Box covering all of dom.
Box whole_box(const GridDomain& dom);
/// Box grown by `by` per axis and clipped to dom.
Box expand_clip(const GridDomain& dom, Box box, long by);

/// Calls f(flat_index, coords) for every lattice point of dom inside box
/// in row-major order. The coords vector is reused between calls.
template <class F>
void for_each_point(const GridDomain& dom, const Box& box, F&& f) {
  const int d = dom.dim();
  for (int k = 0; k < d; ++k)
    if (box.lo[static_cast<std::size_t>(k)] > box.hi[static_cast<std::size_t>(k)]) return;
  std::vector<long> x(box.lo);
  for (;;) {
    f(dom.index(x), x);
    int k = d - 1;
    while (k >= 0) {
      if (++x[static_cast<std::size_t>(k)] <= box.hi[static_cast<std::size_t>(k)]) break;
      x[static_cast<std::size_t>(k)] = box.lo[static_cast<std::size_t>(k)];
      --k;
    }
    if (k < 0) return;
  }
}

/// m scalar channels per lattice point; the channels of one point are
/// stored contiguously (point index major, channel minor). Values are
/// copied on assignment; fields behave like plain values.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridDomain dom, int channels);

  const GridDomain& domain() const { return dom_; }
  int channels() const { return m_; }
  std::size_t size() const { return v_.size(); }

  double& at(std::size_t point, int c) { return v_[point * static_cast<std::size_t>(m_) + static_cast<std::size_t>(c)]; }
  double at(std::size_t point, int c) const { return v_[point * static_cast<std::size_t>(m_) + static_cast<std::size_t>(c)]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  void fill(double value);

 private:
  GridDomain dom_;
  int m_ = 0;
  std::vector<double> v_;
};

/// Dual variable: one d-vector of m channels per lattice point, i.e. shape
/// (d, m) per point, stored point-major, then axis, then channel.
class DualField {
 public:
  DualField() = default;
  DualField(GridDomain dom, int channels);

  const GridDomain& domain() const { return dom_; }
  int axes() const { return d_; }
  int channels() const { return m_; }
  std::size_t size() const { return v_.size(); }

  std::size_t offset(std::size_t point, int k, int c) const {
    return (point * static_cast<std::size_t>(d_) + static_cast<std::size_t>(k)) * static_cast<std::size_t>(m_) +
           static_cast<std::size_t>(c);
  }
  double& at(std::size_t point, int k, int c) { return v_[offset(point, k, c)]; }
  double at(std::size_t point, int k, int c) const { return v_[offset(point, k, c)]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  void fill(double value);

 private:
  GridDomain dom_;
  int d_ = 0, m_ = 0;
  std::vector<double> v_;
};

void require_same_shape(const GridFunction& a, const GridFunction& b);
void require_same_shape(const DualField& a, const DualField& b);

/// Pointwise Frobenius norm sqrt(sum_{k,c} p_{k,c}(x)^2) as a 1-channel field.
GridFunction frobenius_pointwise(const DualField& p);

/// alpha*x + y.
GridFunction axpy(double alpha, const GridFunction& x, const GridFunction& y);
DualField axpy(double alpha, const DualField& x, const DualField& y);
/// y += alpha*x.
void axpy_in_place(double alpha, const GridFunction& x, GridFunction& y);
void axpy_in_place(double alpha, const DualField& x, DualField& y);
void scale_in_place(double alpha, GridFunction& x);
void scale_in_place(double alpha, DualField& x);

/// Pointwise scaling by a scalar field: out(x, k, c) = s(x) * p(x, k, c).
DualField scale_pointwise(const GridFunction& s, const DualField& p);

/// L^2 inner products. Summation uses a fixed pairwise order, so results do
/// not depend on evaluation context (worker counts, chunk sizes, ...).
double dot(const GridFunction& a, const GridFunction& b);
double dot(const DualField& a, const DualField& b);
double norm_l2(const GridFunction& a);
double norm_l2(const DualField& a);

namespace detail {
double pairwise_dot(const double* a, const double* b, std::size_t n);
double pairwise_sum(const double* a, std::size_t n);
}  // namespace detail

}  // namespace tvdd
