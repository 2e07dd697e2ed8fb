#pragma once

#include <map>
#include <string>

#include "mvie/grid.hpp"
#include "mvie/media.hpp"
#include "mvie/types.hpp"

namespace mvie {

struct SolverConfig {
  std::string method = "krylov";  // born | krylov
  double tol = 1e-8;
  int maxit = 300;
  int restart = 60;
  double series_tol = 1e-14;
  int J = -1;  // -1 picks the cutoff from series_tol
};

struct ExperimentConfig {
  std::string kind;  // check-regime | solve | farfield | mie-validate |
                     // probe-blowup | discriminate
  Vec3 direction = Vec3(0, 0, 1);
  Vec3 polarization = Vec3(1, 0, 0);
  int ndirs = 196;            // far-field sample
  double max_rel_err = 0.03;  // mie-validate bound
  Vec3 probe_dir = Vec3(1, 1, 0.6);
  double probe_d0 = 0.5;
  int probe_levels = 4;
  int incident_dirs = 26;
  double threshold = 0.0;  // 0 = auto (10x cross-validation error)
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  std::string units = "natural";
  MediumSpec medium;
  MediumSpec medium2;  // discriminate only
  bool has_medium2 = false;
  ShapeSpec shape;
  ShapeSpec shape2;
  bool has_shape2 = false;
  double h = 0.0;
  int margin = 2;
  SolverConfig solver;
  ExperimentConfig experiment;
  OutputConfig output;
};

// Sections of key = value pairs; '#' and ';' start comments. Throws
// ConfigError naming the file line on malformed input.
std::map<std::string, std::map<std::string, std::string>> parse_ini(
    const std::string& path);

// Validated typed config; ConfigError messages name the offending
// section.key. The shape2/medium2 blocks are only legal for discriminate.
RunConfig load_config(const std::string& path);

}  // namespace mvie
