#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "tvdd/model.hpp"

namespace tvdd {

enum class Application { denoise, inpaint, optflow, waveletinpaint };
enum class RunMode { seq, par, global };

/// Everything one CLI run needs. lambda/beta < 0 select the per-application
/// artifact defaults (see default_lambda / default_beta); sigma = 0 selects
/// the mode default (1 sequential, 1/M parallel).
struct RunConfig {
  Application app = Application::denoise;
  std::string input;
  std::string input2;  // second frame, optical flow only
  std::string output;
  double lambda = -1.0;
  double beta = -1.0;
  RunMode mode = RunMode::seq;
  long mx = 2;
  long my = 2;
  long overlap = 5;
  double sigma = 0.0;
  std::size_t outer_iters = 30;
  std::size_t inner_iters = 50;
  std::size_t nsur = 1;
  int workers = 1;
  std::uint64_t seed = 42;
  double noise_var = 0.01;
  double mask_prob = 0.5;
  std::string energy_csv;
  bool compare = false;
};

/// Artifact defaults; every value is overridable from the command line.
double default_lambda(Application app);
double default_beta(Application app);

/// Observed data plus the forward operator the corruption induces.
struct CorruptedInput {
  GridFunction g;
  ForwardOperator op;
};

/// Applies the application's seeded corruption model to the ground truth:
/// denoise adds Gaussian noise, inpaint drops pixels, waveletinpaint drops
/// transform coefficients, optflow differences the two frames and carries
/// the linearized brightness weights. frame2 is only read for optflow.
CorruptedInput corrupt(const RunConfig& cfg, const GridFunction& truth, const GridFunction& frame2);

/// Runs one configured application end to end, writing the restored image
/// (or flow color image + raw flow CSV) and the requested energy CSV.
/// Returns 0 exactly when every artifact was written; failures are
/// reported on stderr.
int run_application(const RunConfig& cfg);

}  // namespace tvdd
