#include "tvdd/app.hpp"

#include <cmath>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tvdd/decomp.hpp"
#include "tvdd/diffops.hpp"
#include "tvdd/dualsolve.hpp"
#include "tvdd/flowcolor.hpp"
#include "tvdd/image_io.hpp"
#include "tvdd/rng.hpp"
#include "tvdd/wavelet.hpp"

namespace tvdd {

namespace {

std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

struct SolveOutput {
  DualField p;
  GridFunction u;
  std::vector<double> energies;
  double k_scale = 1.0;  // one recorded step costs 1/k_scale subproblem iterations
};

SolveOutput run_solver(const ProblemSpec& spec, const RunConfig& cfg, RunMode mode) {
  SolveOutput out;
  if (mode == RunMode::global && spec.op.is_local()) {
    SolveControl ctl;
    ctl.max_iters = cfg.outer_iters * cfg.inner_iters;
    ctl.record_energy = true;
    SolveResult res = solve_dual(spec, ctl);
    out.p = std::move(res.p);
    out.u = primal_recover(spec, out.p);
    out.energies = std::move(res.trace.values);
    out.k_scale = cfg.inner_iters > 0 ? 1.0 / static_cast<double>(cfg.inner_iters) : 1.0;
    return out;
  }

  // Global operators have no pointwise whole-domain iteration; the trivial
  // one-subdomain decomposition with the majorized local solver plays that
  // role, and its sweeps already count as inner_iters iterations each.
  const bool trivial = mode == RunMode::global;
  std::vector<long> counts(static_cast<std::size_t>(spec.domain.dim()), 1);
  if (!trivial) {
    counts[0] = cfg.mx;
    counts[1] = cfg.my;
  }
  DecompLayout lay = make_decomposition(spec.domain, counts, trivial ? 1 : cfg.overlap);

  DDConfig dcfg;
  dcfg.mode = mode == RunMode::par ? DDMode::parallel : DDMode::sequential;
  dcfg.sigma = trivial ? 1.0 : cfg.sigma;
  dcfg.outer_iters = cfg.outer_iters;
  dcfg.inner_iters = cfg.inner_iters;
  dcfg.surrogate_steps = cfg.nsur;
  dcfg.workers = cfg.workers;
  dcfg.record_energy = true;
  DDResult res = dd_solve(spec, lay, dcfg);
  out.p = std::move(res.p);
  out.u = std::move(res.u);
  out.energies = std::move(res.trace.values);
  out.k_scale = 1.0;
  return out;
}

void write_artifacts(const RunConfig& cfg, const SolveOutput& out) {
  if (cfg.app == Application::optflow) {
    save_color_image(flow_to_color(out.u), cfg.output);
    write_flow_csv(out.u, replace_extension(cfg.output, ".csv"));
  } else {
    save_image(out.u, cfg.output);
  }
}

}  // namespace

double default_lambda(Application app) {
  switch (app) {
    case Application::denoise: return 0.1;
    case Application::inpaint: return 0.05;
    case Application::optflow: return 0.01;
    case Application::waveletinpaint: return 0.05;
  }
  throw std::invalid_argument("unknown application");
}

double default_beta(Application app) {
  switch (app) {
    case Application::denoise: return 0.0;
    case Application::inpaint: return 0.01;
    case Application::optflow: return 0.01;
    case Application::waveletinpaint: return 0.01;
  }
  throw std::invalid_argument("unknown application");
}

CorruptedInput corrupt(const RunConfig& cfg, const GridFunction& truth, const GridFunction& frame2) {
  const GridDomain& dom = truth.domain();
  switch (cfg.app) {
    case Application::denoise: {
      Rng rng(cfg.seed);
      GridFunction g = truth;
      const double sd = std::sqrt(std::max(0.0, cfg.noise_var));
      for (double& v : g.values()) v += sd * rng.normal();
      return {std::move(g), ForwardOperator::identity_op()};
    }
    case Application::inpaint: {
      GridFunction lost = random_mask(dom, cfg.mask_prob, cfg.seed);
      GridFunction g = truth;
      for (std::size_t i = 0; i < dom.num_points(); ++i)
        if (lost.at(i, 0) != 0.0) g.at(i, 0) = 0.0;
      return {std::move(g), ForwardOperator::mask_op(std::move(lost))};
    }
    case Application::waveletinpaint: {
      GridFunction lost = random_mask(dom, cfg.mask_prob, cfg.seed);
      GridFunction g = mask_coeffs(haar_forward(truth), lost);
      return {std::move(g), ForwardOperator::wavelet_op(std::move(lost))};
    }
    case Application::optflow: {
      require_same_shape(truth, frame2);
      GridFunction g = axpy(-1.0, frame2, truth);  // frame difference
      return {std::move(g), ForwardOperator::flow_op(gradient(frame2))};
    }
  }
  throw std::invalid_argument("unknown application");
}

int run_application(const RunConfig& cfg) {
  try {
    GridFunction truth = load_image(cfg.input);
    GridFunction frame2;
    if (cfg.app == Application::optflow) {
      if (cfg.input2.empty())
        throw std::invalid_argument("optical flow needs --input2 with the second frame");
      frame2 = load_image(cfg.input2);
      require_same_shape(truth, frame2);
    }

    CorruptedInput ci = corrupt(cfg, truth, frame2);
    const double lam = cfg.lambda >= 0.0 ? cfg.lambda : default_lambda(cfg.app);
    const double bet = cfg.beta >= 0.0 ? cfg.beta : default_beta(cfg.app);
    ProblemSpec spec = make_problem(truth.domain(), std::move(ci.op), std::move(ci.g), lam, bet);

    if (cfg.compare) {
      SolveOutput glob = run_solver(spec, cfg, RunMode::global);
      SolveOutput seq = run_solver(spec, cfg, RunMode::seq);
      SolveOutput par = run_solver(spec, cfg, RunMode::par);
      if (!cfg.energy_csv.empty()) {
        const auto stride = static_cast<std::size_t>(std::lround(1.0 / glob.k_scale));
        write_comparison_csv(glob.energies, stride, seq.energies, par.energies, cfg.energy_csv);
      }
      write_artifacts(cfg, seq);
      return 0;
    }

    SolveOutput out = run_solver(spec, cfg, cfg.mode);
    if (!cfg.energy_csv.empty()) write_energy_csv(out.energies, out.k_scale, cfg.energy_csv);
    write_artifacts(cfg, out);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tvdd
