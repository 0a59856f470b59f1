#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "tvdd/grid.hpp"
#include "tvdd/rng.hpp"

using namespace tvdd;

TEST_CASE("domain indexing is row-major with the last coordinate fastest") {
  GridDomain dom = GridDomain::from_sizes({2, 3});
  CHECK(dom.num_points() == 6);
  CHECK(dom.index({0, 0}) == 0);
  CHECK(dom.index({0, 2}) == 2);
  CHECK(dom.index({1, 0}) == 3);
  CHECK(dom.index({1, 2}) == 5);
  CHECK(dom.coords(4) == std::vector<long>{1, 1});

  GridDomain shifted({-1, 2}, {0, 4});
  CHECK(shifted.num_points() == 6);
  CHECK(shifted.index({-1, 2}) == 0);
  CHECK(shifted.index({0, 3}) == 4);
}

TEST_CASE("channel values of one point are contiguous") {
  GridFunction u(GridDomain::from_sizes({2, 2}), 3);
  u.at(1, 0) = 10.0;
  u.at(1, 2) = 12.0;
  CHECK(u.values()[3] == 10.0);
  CHECK(u.values()[5] == 12.0);

  DualField p(GridDomain::from_sizes({2, 2}), 2);
  p.at(1, 1, 0) = 7.0;  // point 1, axis 1, channel 0
  CHECK(p.values()[1 * 4 + 1 * 2 + 0] == 7.0);
}

TEST_CASE("fields copy by value") {
  GridFunction u(GridDomain::from_sizes({4}), 1);
  u.at(0, 0) = 1.0;
  GridFunction v = u;
  v.at(0, 0) = 2.0;
  CHECK(u.at(0, 0) == 1.0);
}

TEST_CASE("frobenius_pointwise on a hand-built field") {
  GridDomain dom = GridDomain::from_sizes({2});
  DualField p(dom, 1);  // d = 1, but two channels via m? use m=2 on 1-D axis
  DualField q(dom, 2);
  q.at(0, 0, 0) = 3.0;
  q.at(0, 0, 1) = 4.0;
  GridFunction f = frobenius_pointwise(q);
  CHECK(f.at(0, 0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(f.at(1, 0) == 0.0);
  (void)p;
}

TEST_CASE("frobenius_pointwise matches the naive loop on random fields") {
  Rng rng(7);
  DualField p(GridDomain::from_sizes({5, 4}), 2);
  oracle::fill_random(p, rng);
  GridFunction a = frobenius_pointwise(p);
  GridFunction b = oracle::naive_frobenius(p);
  CHECK(oracle::max_abs_diff(a, b) == 0.0);
}

TEST_CASE("axpy identities") {
  Rng rng(3);
  GridFunction x(GridDomain::from_sizes({3, 3}), 2), y(GridDomain::from_sizes({3, 3}), 2);
  oracle::fill_random(x, rng);
  oracle::fill_random(y, rng);

  GridFunction zero(GridDomain::from_sizes({3, 3}), 2);
  CHECK(oracle::max_abs_diff(axpy(0.0, x, y), y) == 0.0);
  CHECK(oracle::max_abs_diff(axpy(1.0, x, zero), x) == 0.0);

  GridFunction z = axpy(-2.5, x, y);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(z.data()[i] == doctest::Approx(y.data()[i] - 2.5 * x.data()[i]));
}

TEST_CASE("inner product: symmetry, linearity, norm consistency") {
  Rng rng(11);
  GridDomain dom = GridDomain::from_sizes({6, 3});
  GridFunction a(dom, 2), b(dom, 2), c(dom, 2);
  oracle::fill_random(a, rng);
  oracle::fill_random(b, rng);
  oracle::fill_random(c, rng);

  CHECK(dot(a, b) == dot(b, a));
  CHECK(dot(a, b) == doctest::Approx(oracle::naive_dot(a, b)).epsilon(1e-14));
  const double lhs = dot(axpy(2.0, a, b), c);
  CHECK(lhs == doctest::Approx(2.0 * dot(a, c) + dot(b, c)).epsilon(1e-13));
  CHECK(norm_l2(a) * norm_l2(a) == doctest::Approx(dot(a, a)).epsilon(1e-14));

  DualField p(dom, 2), q(dom, 2);
  oracle::fill_random(p, rng);
  oracle::fill_random(q, rng);
  CHECK(dot(p, q) == doctest::Approx(oracle::naive_dot(p, q)).epsilon(1e-14));
}

TEST_CASE("shape mismatches raise ShapeMismatch") {
  GridFunction a(GridDomain::from_sizes({3, 3}), 1);
  GridFunction b(GridDomain::from_sizes({3, 4}), 1);
  GridFunction c(GridDomain::from_sizes({3, 3}), 2);
  CHECK_THROWS_AS((void)dot(a, b), ShapeMismatch);
  CHECK_THROWS_AS((void)dot(a, c), ShapeMismatch);
  CHECK_THROWS_AS((void)axpy(1.0, a, b), ShapeMismatch);

  DualField p(GridDomain::from_sizes({3, 3}), 1), q(GridDomain::from_sizes({2, 3}), 1);
  CHECK_THROWS_AS((void)dot(p, q), ShapeMismatch);
  CHECK_THROWS_AS(GridDomain({0, 0}, {1}), ShapeMismatch);
  CHECK_THROWS_AS(GridDomain({2}, {1}), ShapeMismatch);
}

TEST_CASE("pairwise summation agrees with plain accumulation") {
  Rng rng(5);
  std::vector<double> v(1000);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  double plain = 0.0;
  for (double x : v) plain += x;
  CHECK(detail::pairwise_sum(v.data(), v.size()) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("box iteration respects bounds and order") {
  GridDomain dom = GridDomain::from_sizes({4, 4});
  Box box{{1, 2}, {2, 3}};
  std::vector<std::size_t> seen;
  for_each_point(dom, box, [&](std::size_t i, const std::vector<long>&) { seen.push_back(i); });
  CHECK(seen == std::vector<std::size_t>{6, 7, 10, 11});

  Box grown = expand_clip(dom, box, 1);
  CHECK(grown.lo == std::vector<long>{0, 1});
  CHECK(grown.hi == std::vector<long>{3, 3});
}
