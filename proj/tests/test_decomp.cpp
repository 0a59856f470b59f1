#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "tvdd/decomp.hpp"
#include "tvdd/diffops.hpp"
#include "tvdd/dualsolve.hpp"
#include "tvdd/model.hpp"
#include "tvdd/rng.hpp"

using namespace tvdd;

namespace {

ProblemSpec denoise_spec(const GridDomain& dom, const GridFunction& g, double lambda, double beta) {
  return make_problem(dom, ForwardOperator::identity_op(), g, lambda, beta);
}

DualField feasible_random(const GridDomain& dom, int m, const GridFunction& lam, Rng& rng) {
  DualField p(dom, m);
  oracle::fill_random(p, rng);
  return project_K(p, lam);
}

}  // namespace

TEST_CASE("interval splitting matches the hand-worked layouts") {
  AxisIntervals one = axis_intervals(9, 1, 0);
  CHECK(one.len == std::vector<long>{9});
  CHECK(one.start == std::vector<long>{0});

  AxisIntervals two = axis_intervals(9, 2, 2);
  CHECK(two.len == std::vector<long>{5, 6});
  CHECK(two.start == std::vector<long>{0, 3});

  AxisIntervals three = axis_intervals(20, 3, 2);
  CHECK(three.len == std::vector<long>{8, 8, 8});
  CHECK(three.start == std::vector<long>{0, 6, 12});

  AxisIntervals tight = axis_intervals(9, 3, 2);
  CHECK(tight.len == std::vector<long>{4, 4, 5});
  CHECK(tight.start == std::vector<long>{0, 2, 4});
}

TEST_CASE("too much overlap for the axis is refused") {
  CHECK_THROWS_AS((void)axis_intervals(9, 4, 2), OverlapTooLarge);
  CHECK_THROWS_AS((void)axis_intervals(5, 2, 3), OverlapTooLarge);
  CHECK_THROWS_AS((void)axis_intervals(-1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)axis_intervals(9, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)axis_intervals(9, 2, -1), std::invalid_argument);
}

TEST_CASE("interval sweeps tile the axis with exact overlaps") {
  for (long s : {9L, 10L, 16L, 23L, 37L, 64L})
    for (long m : {1L, 2L, 3L, 4L})
      for (long r : {1L, 2L, 5L}) {
        AxisIntervals iv;
        try {
          iv = axis_intervals(s, m, r);
        } catch (const OverlapTooLarge&) {
          continue;
        }
        REQUIRE(iv.len.size() == static_cast<std::size_t>(m));
        CHECK(iv.start.front() == 0);
        CHECK(iv.start.back() + iv.len.back() == s);
        for (std::size_t i = 0; i < iv.len.size(); ++i) {
          CHECK(iv.len[i] >= 2 * r);
          if (i + 1 < iv.len.size()) {
            CHECK(iv.start[i + 1] > iv.start[i]);
            CHECK(iv.start[i] + iv.len[i] - iv.start[i + 1] == r);  // shared segment length
          }
        }
      }
}

TEST_CASE("axis weight profiles ramp linearly and sum to one") {
  AxisIntervals iv = axis_intervals(9, 2, 2);
  auto w = axis_weights(iv, 9, 2);
  REQUIRE(w.size() == 2);

  for (long x = 0; x <= 2; ++x) {
    CHECK(w[0][static_cast<std::size_t>(x)] == 1.0);
    CHECK(w[1][static_cast<std::size_t>(x)] == 0.0);
  }
  CHECK(w[0][3] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w[1][3] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w[0][4] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w[1][4] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w[0][5] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w[1][5] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (long x = 6; x <= 9; ++x) {
    CHECK(w[0][static_cast<std::size_t>(x)] == 0.0);
    CHECK(w[1][static_cast<std::size_t>(x)] == 1.0);
  }
}

TEST_CASE("two-dimensional decompositions partition unity exactly") {
  GridDomain dom = GridDomain::from_sizes({10, 10});
  DecompLayout lay = make_decomposition(dom, {2, 2}, 2);
  REQUIRE(lay.subs.size() == 4);
  CHECK(lay.num_colors == 4);

  // row-major cell order, axis-0-major color bits
  CHECK(lay.subs[0].cell == std::vector<long>{0, 0});
  CHECK(lay.subs[1].cell == std::vector<long>{0, 1});
  CHECK(lay.subs[2].cell == std::vector<long>{1, 0});
  CHECK(lay.subs[3].cell == std::vector<long>{1, 1});
  CHECK(lay.subs[0].color != lay.subs[1].color);
  CHECK(lay.subs[0].color != lay.subs[2].color);
  CHECK(lay.subs[1].color != lay.subs[2].color);

  CHECK(lay.subs[0].support.lo == std::vector<long>{0, 0});
  CHECK(lay.subs[0].support.hi == std::vector<long>{5, 5});
  CHECK(lay.subs[3].support.lo == std::vector<long>{3, 3});
  CHECK(lay.subs[3].support.hi == std::vector<long>{9, 9});

  for (std::size_t i = 0; i < dom.num_points(); ++i) {
    double sum = 0.0;
    for (const auto& sub : lay.subs) {
      const double t = sub.theta.at(i, 0);
      CHECK(t >= 0.0);
      sum += t;
    }
    CHECK(sum == 1.0);  // exact, not approximate
  }

  // weights vanish exactly off their box and are positive on it
  for (const auto& sub : lay.subs) {
    GridFunction inside(dom, 1);
    for_each_point(dom, sub.support,
                   [&](std::size_t p, const std::vector<long>&) { inside.at(p, 0) = 1.0; });
    for (std::size_t i = 0; i < dom.num_points(); ++i) {
      if (inside.at(i, 0) == 0.0)
        CHECK(sub.theta.at(i, 0) == 0.0);
      else
        CHECK(sub.theta.at(i, 0) > 0.0);
    }
  }
}

TEST_CASE("touching same-color supports still sum to one") {
  // s = 9 with three intervals of overlap 2 makes intervals 1 and 3 share
  // the single point x = 4.
  GridDomain dom = GridDomain::from_sizes({10});
  DecompLayout lay = make_decomposition(dom, {3}, 2);
  REQUIRE(lay.subs.size() == 3);
  CHECK(lay.subs[0].color == lay.subs[2].color);
  CHECK(lay.subs[0].color != lay.subs[1].color);
  CHECK(lay.subs[0].support.hi[0] == 4);
  CHECK(lay.subs[2].support.lo[0] == 4);
  for (std::size_t i = 0; i < dom.num_points(); ++i) {
    double sum = 0.0;
    for (const auto& sub : lay.subs) sum += sub.theta.at(i, 0);
    CHECK(sum == 1.0);
  }
}

TEST_CASE("the local data term makes subproblem and composed energies coincide") {
  Rng rng(31);
  GridDomain dom = GridDomain::from_sizes({10, 10});
  GridFunction g(dom, 1);
  oracle::fill_random(g, rng, 0.0, 1.0);
  auto spec = make_problem(dom, ForwardOperator::mask_op(random_mask(dom, 0.3, 4)), g, 0.2, 0.7);
  const GridFunction tstar_g = apply_Tstar(spec, spec.g);
  DecompLayout lay = make_decomposition(dom, {2, 2}, 2);

  DualField p_prev = feasible_random(dom, 1, spec.lambda, rng);
  DualField anchor = feasible_random(dom, 1, spec.lambda, rng);
  for (const auto& sub : lay.subs) {
    GridFunction sub_lambda(dom, 1);
    for_each_point(dom, sub.support, [&](std::size_t i, const std::vector<long>&) {
      sub_lambda.at(i, 0) = sub.theta.at(i, 0) * spec.lambda.at(i, 0);
    });
    DualField v = feasible_random(dom, 1, sub_lambda, rng);

    const GridFunction f = local_data_term(spec, tstar_g, sub, p_prev, anchor);
    const double lhs = window_objective(spec, f, v, whole_box(dom));
    DualField composed = axpy(1.0, v, axpy(-1.0, scale_pointwise(sub.theta, anchor), p_prev));
    const double rhs = dual_energy(spec, composed);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("a single subdomain reproduces the plain dual iteration") {
  Rng rng(37);
  GridDomain dom = GridDomain::from_sizes({8, 8});
  GridFunction g(dom, 1);
  oracle::fill_random(g, rng, 0.0, 1.0);
  auto spec = denoise_spec(dom, g, 0.15, 0.0);

  DecompLayout lay = make_decomposition(dom, {1, 1}, 2);
  REQUIRE(lay.subs.size() == 1);
  for (std::size_t i = 0; i < dom.num_points(); ++i) CHECK(lay.subs[0].theta.at(i, 0) == 1.0);

  DDConfig cfg;
  cfg.mode = DDMode::sequential;
  cfg.outer_iters = 3;
  cfg.inner_iters = 20;
  DDResult dd = dd_solve(spec, lay, cfg);

  SolveControl ctl;
  ctl.max_iters = 60;
  SolveResult direct = solve_dual(spec, ctl);
  CHECK(oracle::max_abs_diff(dd.p, direct.p) <= 1e-14);
  CHECK(dual_energy(spec, dd.p) == doctest::Approx(dual_energy(spec, direct.p)).epsilon(1e-13));
}

TEST_CASE("outer energies decrease for every kind and both modes") {
  Rng rng(41);
  GridDomain dom = GridDomain::from_sizes({12, 12});
  GridFunction g(dom, 1);
  oracle::fill_random(g, rng, 0.0, 1.0);
  DecompLayout lay = make_decomposition(dom, {2, 2}, 2);

  auto check_modes = [&](const ProblemSpec& spec) {
    for (DDMode mode : {DDMode::sequential, DDMode::parallel}) {
      DDConfig cfg;
      cfg.mode = mode;
      cfg.outer_iters = 12;
      cfg.inner_iters = 10;
      DDResult res = dd_solve(spec, lay, cfg);
      REQUIRE(res.trace.values.size() == 13);
      CHECK(res.trace.non_increasing(1e-12));
      CHECK(res.trace.values.back() < res.trace.values.front());
      CHECK(feasibility_violation(res.p, spec.lambda) <= 1e-12);
    }
  };

  check_modes(denoise_spec(dom, g, 0.15, 0.0));
  check_modes(make_problem(dom, ForwardOperator::mask_op(random_mask(dom, 0.3, 7)), g, 0.1, 0.5));
  DualField fw(dom, 1);
  oracle::fill_random(fw, rng);
  check_modes(make_problem(dom, ForwardOperator::flow_op(fw), g, 0.05, 0.2));
}

TEST_CASE("sequential sweeps converge to the global minimum") {
  Rng rng(43);
  GridDomain dom = GridDomain::from_sizes({12, 12});
  GridFunction g(dom, 1);
  oracle::fill_random(g, rng, 0.0, 1.0);
  auto spec = denoise_spec(dom, g, 0.1, 0.0);

  SolveControl ctl;
  ctl.max_iters = 6000;
  const double d_star = dual_energy(spec, solve_dual(spec, ctl).p);

  DecompLayout lay = make_decomposition(dom, {2, 2}, 2);
  DDConfig cfg;
  cfg.outer_iters = 60;
  cfg.inner_iters = 20;
  DDResult res = dd_solve(spec, lay, cfg);
  CHECK(res.trace.values.back() <= d_star + 1e-5 * (1.0 + std::abs(d_star)));

  cfg.mode = DDMode::parallel;
  cfg.outer_iters = 200;
  DDResult par = dd_solve(spec, lay, cfg);
  CHECK(par.trace.values.back() <= d_star + 1e-5 * (1.0 + std::abs(d_star)));
}

TEST_CASE("modes genuinely differ and warm starts are honored") {
  Rng rng(47);
  GridDomain dom = GridDomain::from_sizes({10, 10});
  GridFunction g(dom, 1);
  oracle::fill_random(g, rng, 0.0, 1.0);
  auto spec = denoise_spec(dom, g, 0.15, 0.0);
  DecompLayout lay = make_decomposition(dom, {2, 2}, 2);

  DDConfig cfg;
  cfg.outer_iters = 4;
  cfg.inner_iters = 8;
  DDResult seq = dd_solve(spec, lay, cfg);
  cfg.mode = DDMode::parallel;
  DDResult par = dd_solve(spec, lay, cfg);
  CHECK(oracle::max_abs_diff(seq.p, par.p) > 0.0);

  DualField p0 = feasible_random(dom, 1, spec.lambda, rng);
  cfg.mode = DDMode::sequential;
  DDResult warm = dd_solve(spec, lay, cfg, p0);
  CHECK(warm.trace.values.front() == doctest::Approx(dual_energy(spec, p0)).epsilon(1e-15));
  CHECK(warm.trace.non_increasing(1e-12));
}

TEST_CASE("invalid relaxation weights and worker counts are refused") {
  GridDomain dom = GridDomain::from_sizes({10, 10});
  GridFunction g(dom, 1);
  auto spec = denoise_spec(dom, g, 0.1, 0.0);
  DecompLayout lay = make_decomposition(dom, {2, 2}, 2);

  DDConfig cfg;
  cfg.sigma = 1.5;
  CHECK_THROWS_AS((void)dd_solve(spec, lay, cfg), SigmaOutOfRange);
  cfg.sigma = -0.1;
  CHECK_THROWS_AS((void)dd_solve(spec, lay, cfg), SigmaOutOfRange);
  cfg.sigma = 0.3;  // above 1/4
  cfg.mode = DDMode::parallel;
  CHECK_THROWS_AS((void)dd_solve(spec, lay, cfg), SigmaOutOfRange);
  cfg.sigma = 0.0;
  cfg.workers = 0;
  CHECK_THROWS_AS((void)dd_solve(spec, lay, cfg), std::invalid_argument);

  GridDomain other = GridDomain::from_sizes({9, 9});
  GridFunction g2(other, 1);
  auto spec2 = denoise_spec(other, g2, 0.1, 0.0);
  DDConfig ok;
  CHECK_THROWS_AS((void)dd_solve(spec2, lay, ok), ShapeMismatch);
}

TEST_CASE("results do not depend on the number of workers") {
  Rng rng(53);
  GridDomain dom = GridDomain::from_sizes({12, 12});
  GridFunction g(dom, 1);
  oracle::fill_random(g, rng, 0.0, 1.0);
  DualField fw(dom, 1);
  oracle::fill_random(fw, rng);
  auto spec = make_problem(dom, ForwardOperator::flow_op(fw), g, 0.05, 0.2);
  DecompLayout lay = make_decomposition(dom, {2, 2}, 2);

  for (DDMode mode : {DDMode::sequential, DDMode::parallel}) {
    DDConfig cfg;
    cfg.mode = mode;
    cfg.outer_iters = 5;
    cfg.inner_iters = 8;
    cfg.workers = 1;
    DDResult one = dd_solve(spec, lay, cfg);
    cfg.workers = 2;
    DDResult two = dd_solve(spec, lay, cfg);
    cfg.workers = 4;
    DDResult four = dd_solve(spec, lay, cfg);
    CHECK(oracle::max_abs_diff(one.p, two.p) == 0.0);
    CHECK(oracle::max_abs_diff(one.p, four.p) == 0.0);
  }
}
