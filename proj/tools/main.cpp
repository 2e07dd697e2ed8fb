#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"
#include "mvie/config.hpp"
#include "mvie/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"volume-integral Maxwell solver for moving dielectrics"};
  std::string config_path, out_dir, baseline;
  std::uint64_t seed = 7;
  int threads = 1;
  app.add_option("--config", config_path, "experiment configuration file")
      ->required();
  app.add_option("--out", out_dir,
                 "output directory (default: the config's output block)");
  app.add_option("--seed", seed, "seed for the operator-norm estimator");
  app.add_option("--threads", threads,
                 "worker cap, recorded in the manifest (execution is single-threaded)");
  app.add_option("--baseline", baseline,
                 "baseline file: compare when it exists, record otherwise");
  CLI11_PARSE(app, argc, argv);

  try {
    const mvie::RunConfig cfg = mvie::load_config(config_path);
    const std::string out = out_dir.empty() ? cfg.output.directory : out_dir;
    const mvie::RunResult res = mvie::run_experiment(cfg, out, seed, threads);
    std::fputs(res.summary.c_str(), stdout);
    if (res.exit_code != 0) return res.exit_code;
    if (!baseline.empty()) {
      if (std::filesystem::exists(baseline)) {
        const std::string gap = mvie::compare_baseline(out, baseline);
        if (!gap.empty()) {
          std::fprintf(stderr, "baseline mismatch: %s\n", gap.c_str());
          return 1;
        }
        std::puts("baseline: match");
      } else {
        mvie::emit_baseline(out, baseline);
        std::printf("baseline: recorded %s\n", baseline.c_str());
      }
    }
    return 0;
  } catch (const mvie::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
