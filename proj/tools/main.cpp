#include <CLI11.hpp>

#include <map>
#include <string>

#include "tvdd/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Total-variation image restoration by overlapping domain decomposition"};
  cli.option_defaults()->always_capture_default();

  tvdd::RunConfig cfg;
  const std::map<std::string, tvdd::Application> apps{
      {"denoise", tvdd::Application::denoise},
      {"inpaint", tvdd::Application::inpaint},
      {"optflow", tvdd::Application::optflow},
      {"waveletinpaint", tvdd::Application::waveletinpaint},
  };
  const std::map<std::string, tvdd::RunMode> modes{
      {"seq", tvdd::RunMode::seq},
      {"par", tvdd::RunMode::par},
      {"global", tvdd::RunMode::global},
  };

  cli.set_config("--config", "", "Key=value configuration file; command-line flags take precedence");
  cli.add_option("--app", cfg.app, "Application to run")
      ->transform(CLI::CheckedTransformer(apps, CLI::ignore_case))
      ->required();
  cli.add_option("--input", cfg.input, "Input image (PGM or greyscale PNG)")->required();
  cli.add_option("--input2", cfg.input2, "Second frame (optical flow only)");
  cli.add_option("--output", cfg.output, "Output image path (.pgm or .png; optical flow needs .png)")
      ->required();
  cli.add_option("--lambda", cfg.lambda, "Regularization strength (default: per application)");
  cli.add_option("--beta", cfg.beta, "Data-term ridge weight (default: per application)");
  cli.add_option("--mode", cfg.mode, "Solver mode")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  cli.add_option("--mx", cfg.mx, "Subdomains along the first image axis")->check(CLI::PositiveNumber);
  cli.add_option("--my", cfg.my, "Subdomains along the second image axis")->check(CLI::PositiveNumber);
  cli.add_option("--overlap", cfg.overlap, "Overlap width in pixels")->check(CLI::PositiveNumber);
  cli.add_option("--sigma", cfg.sigma,
                 "Update weight (0 = mode default: 1 sequential, 1/num-subdomains parallel)");
  cli.add_option("--outer-iters", cfg.outer_iters, "Outer sweeps");
  cli.add_option("--inner-iters", cfg.inner_iters, "Subproblem iterations per sweep");
  cli.add_option("--nsur", cfg.nsur, "Majorization steps per subproblem solve (global operators)");
  cli.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  cli.add_option("--seed", cfg.seed, "Seed for noise and corruption masks");
  cli.add_option("--noise-var", cfg.noise_var, "Gaussian noise variance (denoise)")
      ->check(CLI::NonNegativeNumber);
  cli.add_option("--mask-prob", cfg.mask_prob, "Corruption probability (inpaint/waveletinpaint)")
      ->check(CLI::Range(0.0, 1.0));
  cli.add_option("--energy-csv", cfg.energy_csv, "Write the energy trace to this CSV file");
  cli.add_flag("--compare", cfg.compare,
               "Run the global, sequential and parallel solvers and log a comparison CSV");

  CLI11_PARSE(cli, argc, argv);
  return tvdd::run_application(cfg);
}
