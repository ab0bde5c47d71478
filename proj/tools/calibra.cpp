#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "calibra/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"calibra: auditors, learners and hardness experiments for multi-group prediction"};

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")->required();

  calibra::cli::Overrides ov;
  uint64_t seed = 0;
  std::string out_dir, formats;
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  auto* out_opt = app.add_option("--out", out_dir, "override the output directory");
  auto* fmt_opt = app.add_option("--format", formats, "comma-separated: json,csv,plotdata");

  CLI11_PARSE(app, argc, argv);

  if (*seed_opt) ov.seed = seed;
  if (*out_opt) ov.out_dir = out_dir;
  if (*fmt_opt) ov.formats = formats;

#ifdef _OPENMP
  if (const char* env = std::getenv("CALIBRA_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif

  return calibra::cli::run_file(config_path, ov);
}
