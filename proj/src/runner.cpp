#include "mvie/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "mvie/farfield.hpp"
#include "mvie/fields.hpp"
#include "mvie/greens.hpp"
#include "mvie/inverse.hpp"
#include "mvie/oracle.hpp"
#include "mvie/scatter.hpp"

namespace mvie {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const ShapeSpec& s) {
  json j;
  switch (s.kind) {
    case ShapeSpec::Kind::Sphere:
      j["kind"] = "sphere";
      j["radius"] = s.radii.x();
      break;
    case ShapeSpec::Kind::Ellipsoid:
      j["kind"] = "ellipsoid";
      j["semi_axes"] = to_json(s.radii);
      break;
    case ShapeSpec::Kind::Box:
      j["kind"] = "box";
      j["half_widths"] = to_json(s.radii);
      break;
    case ShapeSpec::Kind::TwoSpheres:
      j["kind"] = "two-spheres";
      j["radius"] = s.radii.x();
      j["radius2"] = s.radius2;
      j["center2"] = to_json(s.center2);
      break;
  }
  j["center"] = to_json(s.center);
  return j;
}

json to_json(const MediumSpec& m) {
  return {{"eps0", m.eps0}, {"mu0", m.mu0},     {"eps", m.eps},  {"mu", m.mu},
          {"v", to_json(m.V)}, {"omega", m.omega}, {"cpw", m.cpw}};
}

json to_json(const RegimeReport& r) {
  return {{"lhs1", r.lhs1},         {"pass1", r.pass1},
          {"lhs2", r.lhs2},         {"pass2", r.pass2},
          {"c", r.c},               {"c_Omega", r.c_Omega},
          {"normT", r.normT},       {"normCplusT", r.normCplusT},
          {"pass", r.pass()}};
}

json to_json(const SolveReport& rep, bool with_residuals) {
  json j = {{"method", rep.method},
            {"iterations", rep.iterations},
            {"converged", rep.converged},
            {"rho", rep.rho},
            {"wall_seconds", rep.wall_seconds}};
  if (rep.norm_G_minus1 >= 0.0) j["norm_G_minus1"] = rep.norm_G_minus1;
  if (with_residuals) j["residuals"] = rep.residuals;
  return j;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["units"] = cfg.units;
  j["medium"] = to_json(cfg.medium);
  j["shape"] = to_json(cfg.shape);
  if (cfg.has_shape2) j["shape2"] = to_json(cfg.shape2);
  if (cfg.has_medium2) j["medium2"] = to_json(cfg.medium2);
  j["grid"] = {{"h", cfg.h}, {"margin", cfg.margin}};
  j["solver"] = {{"method", cfg.solver.method},   {"tol", cfg.solver.tol},
                 {"maxit", cfg.solver.maxit},     {"restart", cfg.solver.restart},
                 {"series_tol", cfg.solver.series_tol}, {"j", cfg.solver.J}};
  j["experiment"] = {{"kind", cfg.experiment.kind},
                     {"direction", to_json(cfg.experiment.direction)},
                     {"polarization", to_json(cfg.experiment.polarization)},
                     {"ndirs", cfg.experiment.ndirs},
                     {"max_rel_err", cfg.experiment.max_rel_err},
                     {"probe_dir", to_json(cfg.experiment.probe_dir)},
                     {"probe_d0", cfg.experiment.probe_d0},
                     {"probe_levels", cfg.experiment.probe_levels},
                     {"incident_dirs", cfg.experiment.incident_dirs},
                     {"threshold", cfg.experiment.threshold}};
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string file_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  char b[20];
  std::snprintf(b, sizeof b, "%016llx",
                static_cast<unsigned long long>(fnv1a(ss.str())));
  return b;
}

// Numeric leaves of the results subtree, dotted paths; timings excluded.
void flatten(const json& j, const std::string& prefix, json& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (key == "wall_seconds") continue;
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (j.is_array()) {
    std::size_t i = 0;
    for (const auto& value : j) flatten(value, prefix + "." + std::to_string(i++), out);
  } else if (j.is_number() || j.is_boolean()) {
    out[prefix] = j;
  }
}

void write_residuals_csv(const fs::path& path, const std::vector<double>& r) {
  std::ostringstream ss;
  ss << "# mvie-residuals v1\niter,residual\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    ss << (i + 1) << "," << fmt17(r[i]) << "\n";
  write_text(path, ss.str());
}

Vec3 unit(const Vec3& v, const char* what) {
  const double n = v.norm();
  if (n == 0.0) throw ConfigError(std::string("[experiment] ") + what + ": zero vector");
  return v / n;
}

struct Forward {
  VoxelDomain dom;
  std::shared_ptr<const KernelTable> table;
  LSOperator op;
  SolveReport rep;
};

// Builds grid + table + operator and runs the configured solver on the
// configured plane wave. `fw` is filled in place so op.domain stays valid.
void forward_solve(const RunConfig& cfg, std::uint64_t seed, Forward& fw) {
  fw.dom = rasterize(cfg.shape, cfg.h, cfg.margin);
  fw.table = std::make_shared<const KernelTable>(
      make_kernel_table(cfg.medium.k0(), cfg.h, fw.dom.dims));
  fw.op = make_ls_operator(fw.dom, fw.table, cfg.medium, cfg.solver.series_tol,
                           cfg.medium.cpw);
  if (cfg.solver.J >= 0) {
    fw.op.J = cfg.solver.J;
    fw.op.M_J = assemble_M_truncated(cfg.medium, cfg.solver.J);
  }
  const Vec3 d = unit(cfg.experiment.direction, "direction");
  const Field inc = incident_plane_field(cfg.medium, d, cfg.experiment.polarization,
                                         fw.dom);
  fw.rep = cfg.solver.method == "born"
               ? solve_born(fw.op, inc, cfg.solver.tol, cfg.solver.maxit, seed)
               : solve_krylov(fw.op, inc, cfg.solver.tol, cfg.solver.maxit,
                              cfg.solver.restart);
}

}  // namespace

RunResult run_experiment(const RunConfig& cfg, const std::string& out_dir,
                         std::uint64_t seed, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);
  const fs::path out(out_dir);

  json manifest;
  manifest["tool"] = "mvie-run";
  manifest["format_version"] = 1;
  manifest["experiment"] = cfg.experiment.kind;
  manifest["seed"] = seed;
  manifest["threads"] = threads;
  manifest["config"] = config_json(cfg);
  json results;
  std::ostringstream summary;
  summary << "experiment: " << cfg.experiment.kind << "\n";
  int exit_code = 0;

  try {
    const std::string kind = cfg.experiment.kind;
    if (kind == "check-regime") {
      const RegimeReport rep = check_regime(cfg.medium, cfg.medium.cpw);
      results = to_json(rep);
      write_text(out / "regime.json", to_json(rep).dump(2) + "\n");
      summary << "lhs1: " << fmt17(rep.lhs1) << " (pass " << rep.pass1 << ")\n"
              << "lhs2: " << fmt17(rep.lhs2) << " (pass " << rep.pass2 << ")\n"
              << "admissible: " << (rep.pass() ? "yes" : "no") << "\n";
    } else if (kind == "solve") {
      Forward fw;
      forward_solve(cfg, seed, fw);
      results["solve"] = to_json(fw.rep, true);
      results["norm_u"] = fw.rep.u.norm();
      write_residuals_csv(out / "residuals.csv", fw.rep.residuals);
      summary << "method: " << fw.rep.method << "\niterations: " << fw.rep.iterations
              << "\nfinal residual: "
              << fmt17(fw.rep.residuals.empty() ? 0.0 : fw.rep.residuals.back())
              << "\n";
    } else if (kind == "farfield") {
      Forward fw;
      forward_solve(cfg, seed, fw);
      const FarField ff =
          far_field(fw.op, fw.rep, fibonacci_directions(cfg.experiment.ndirs));
      save_farfield_csv(ff, (out / "farfield.csv").string());
      save_farfield_json(ff, (out / "farfield.json").string());
      results["solve"] = to_json(fw.rep, true);
      results["farfield"] = {{"ndirs", cfg.experiment.ndirs},
                             {"norm_e", ff.values.topRows<3>().norm()}};
      write_residuals_csv(out / "residuals.csv", fw.rep.residuals);
      summary << "directions: " << cfg.experiment.ndirs << "\n|E_inf| (L2): "
              << fmt17(ff.values.topRows<3>().norm()) << "\n";
    } else if (kind == "mie-validate") {
      if (cfg.shape.kind != ShapeSpec::Kind::Sphere || cfg.shape.center.norm() != 0.0)
        throw ConfigError("[shape] kind: mie-validate needs a sphere at the origin");
      if (cfg.medium.V.norm() != 0.0)
        throw ConfigError("[medium] v: mie-validate needs a medium at rest");
      Forward fw;
      forward_solve(cfg, seed, fw);
      const std::vector<Vec3> dirs = fibonacci_directions(cfg.experiment.ndirs);
      const FarField ff = far_field(fw.op, fw.rep, dirs);
      const FarField fm =
          mie_far_field(cfg.shape.radii.x(), cfg.medium,
                        unit(cfg.experiment.direction, "direction"),
                        cfg.experiment.polarization, dirs);
      save_farfield_csv(ff, (out / "farfield.csv").string());
      save_farfield_json(ff, (out / "farfield.json").string());
      save_farfield_csv(fm, (out / "mie.csv").string());

      const double rel_e = (ff.values.topRows<3>() - fm.values.topRows<3>()).norm() /
                           fm.values.topRows<3>().norm();
      const double rel_h = (ff.values.bottomRows<3>() - fm.values.bottomRows<3>()).norm() /
                           fm.values.bottomRows<3>().norm();
      const double rms = fm.values.topRows<3>().norm() /
                         std::sqrt(static_cast<double>(dirs.size()));
      std::ostringstream diff;
      diff << "# mvie-farfield-diff v1\ntx,ty,tz,abs_e,rel_e\n";
      double max_dir_rel = 0.0;
      for (std::size_t a = 0; a < dirs.size(); ++a) {
        const double gap = (ff.values.block<3, 1>(0, static_cast<Eigen::Index>(a)) -
                            fm.values.block<3, 1>(0, static_cast<Eigen::Index>(a)))
                               .norm();
        max_dir_rel = std::max(max_dir_rel, gap / rms);
        diff << fmt17(dirs[a].x()) << "," << fmt17(dirs[a].y()) << ","
             << fmt17(dirs[a].z()) << "," << fmt17(gap) << "," << fmt17(gap / rms)
             << "\n";
      }
      write_text(out / "diff.csv", diff.str());
      const bool pass = rel_e <= cfg.experiment.max_rel_err;
      results["solve"] = to_json(fw.rep, true);
      results["mie"] = {{"rel_l2_e", rel_e},
                        {"rel_l2_h", rel_h},
                        {"max_dir_rel", max_dir_rel},
                        {"bound", cfg.experiment.max_rel_err},
                        {"pass", pass}};
      summary << "rel L2 error (E): " << fmt17(rel_e) << "\nbound: "
              << fmt17(cfg.experiment.max_rel_err) << "\npass: " << (pass ? "yes" : "no")
              << "\n";
      if (!pass) throw NotConverged("validation gap above the configured bound");
    } else if (kind == "probe-blowup") {
      ProbeSpec ray;
      ray.kind = ProbeSpec::Kind::Ray;
      ray.dir = cfg.experiment.probe_dir;
      ray.d0 = cfg.experiment.probe_d0;
      ray.levels = cfg.experiment.probe_levels;
      const ProbeExperiment exp =
          probe_blowup(cfg.shape, cfg.medium, cfg.h, cfg.margin, ray,
                       cfg.experiment.polarization, cfg.solver.tol, cfg.solver.maxit);
      std::ostringstream csv;
      csv << "# mvie-probe v1\nd,magnitude\n";
      for (std::size_t i = 0; i < exp.distances.size(); ++i)
        csv << fmt17(exp.distances[i]) << "," << fmt17(exp.magnitudes[i]) << "\n";
      write_text(out / "probe.csv", csv.str());
      json solves = json::array();
      for (const auto& s : exp.solves) solves.push_back(to_json(s, false));
      results["probe"] = {{"distances", exp.distances},
                          {"magnitudes", exp.magnitudes},
                          {"exponent", exp.exponent},
                          {"exponent_stderr", exp.exponent_stderr},
                          {"resolution_limited", exp.resolution_limited},
                          {"solves", solves}};
      summary << "fitted exponent: " << fmt17(exp.exponent) << " +- "
              << fmt17(2.0 * exp.exponent_stderr) << "\nresolution limited: "
              << (exp.resolution_limited ? "yes" : "no") << "\n";
    } else if (kind == "discriminate") {
      IncidentSet set;
      if (cfg.experiment.incident_dirs == 26)
        set = default_incident_set();
      else
        set.directions = fibonacci_directions(cfg.experiment.incident_dirs);
      const DiscriminationReport rep = discriminate(
          cfg.shape, cfg.shape2, cfg.medium, cfg.medium2, set, cfg.h, cfg.margin,
          cfg.solver.tol, cfg.solver.maxit, cfg.experiment.ndirs,
          cfg.experiment.threshold);
      std::ostringstream csv;
      csv << "# mvie-deltas v1\ndx,dy,dz,delta\n";
      for (std::size_t i = 0; i < rep.deltas.size(); ++i) {
        const Vec3& d = set.directions[i];
        csv << fmt17(d.x()) << "," << fmt17(d.y()) << "," << fmt17(d.z()) << ","
            << fmt17(rep.deltas[i]) << "\n";
      }
      write_text(out / "deltas.csv", csv.str());
      json it1 = json::array(), it2 = json::array();
      for (const auto& s : rep.solves1) it1.push_back(s.iterations);
      for (const auto& s : rep.solves2) it2.push_back(s.iterations);
      results["discriminate"] = {{"delta", rep.delta},
                                 {"threshold", rep.threshold},
                                 {"cross_validation_error", rep.cross_validation_error},
                                 {"same", rep.same},
                                 {"deltas", rep.deltas},
                                 {"iterations1", it1},
                                 {"iterations2", it2}};
      summary << "delta: " << fmt17(rep.delta) << "\nthreshold: "
              << fmt17(rep.threshold) << "\nverdict: "
              << (rep.same ? "same" : "different") << "\n";
    }
  } catch (const RegimeViolation& e) {
    exit_code = 3;
    manifest["error"] = {{"type", "RegimeViolation"}, {"what", e.what()}};
    summary << "error: RegimeViolation: " << e.what() << "\n";
  } catch (const NotContractive& e) {
    exit_code = 4;
    manifest["error"] = {{"type", "NotContractive"}, {"what", e.what()}};
    summary << "error: NotContractive: " << e.what() << "\n";
  } catch (const MaxIterationsExceeded& e) {
    exit_code = 4;
    manifest["error"] = {{"type", "MaxIterationsExceeded"}, {"what", e.what()}};
    summary << "error: MaxIterationsExceeded: " << e.what() << "\n";
  } catch (const NotConverged& e) {
    exit_code = 4;
    manifest["error"] = {{"type", "NotConverged"}, {"what", e.what()}};
    summary << "error: NotConverged: " << e.what() << "\n";
  } catch (const Error& e) {
    exit_code = 2;
    manifest["error"] = {{"type", "SetupError"}, {"what", e.what()}};
    summary << "error: " << e.what() << "\n";
  }

  manifest["results"] = results;
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["exit_code"] = exit_code;
  summary << "exit: " << exit_code << "\n";
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  write_text(out / "summary.txt", summary.str());
  return {exit_code, summary.str()};
}

void emit_baseline(const std::string& out_dir, const std::string& baseline_path) {
  const fs::path out(out_dir);
  std::ifstream mf(out / "manifest.json");
  if (!mf) throw Error("no manifest.json in " + out_dir + "; run an experiment first");
  json manifest = json::parse(mf);

  json baseline;
  baseline["format_version"] = 1;
  json cfgkey = {{"config", manifest["config"]},
                 {"experiment", manifest["experiment"]},
                 {"seed", manifest["seed"]}};
  char b[20];
  std::snprintf(b, sizeof b, "%016llx",
                static_cast<unsigned long long>(fnv1a(cfgkey.dump())));
  baseline["config_hash"] = b;
  json files;
  for (const auto& entry : fs::directory_iterator(out)) {
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() == ".csv" || name == "regime.json")
      files[name] = file_hash(entry.path());
  }
  baseline["files"] = files;
  json fields;
  flatten(manifest["results"], "", fields);
  baseline["fields"] = fields;
  write_text(baseline_path, baseline.dump(2) + "\n");
}

std::string compare_baseline(const std::string& out_dir,
                             const std::string& baseline_path) {
  std::ifstream bf(baseline_path);
  if (!bf) return "cannot open baseline " + baseline_path;
  const json baseline = json::parse(bf);
  const fs::path out(out_dir);
  std::ifstream mf(out / "manifest.json");
  if (!mf) return "no manifest.json in " + out_dir;
  const json manifest = json::parse(mf);

  json cfgkey = {{"config", manifest["config"]},
                 {"experiment", manifest["experiment"]},
                 {"seed", manifest["seed"]}};
  char b[20];
  std::snprintf(b, sizeof b, "%016llx",
                static_cast<unsigned long long>(fnv1a(cfgkey.dump())));
  if (baseline["config_hash"] != b)
    return "config changed: baseline was recorded for a different setup";

  bool hashes_match = true;
  for (const auto& [name, hash] : baseline["files"].items()) {
    const fs::path p = out / name;
    if (!fs::exists(p)) return "missing artifact " + name;
    if (file_hash(p) != hash.get<std::string>()) hashes_match = false;
  }
  if (hashes_match) return "";

  // Bitwise gap; fall back to the numeric fields with tolerance.
  json fields;
  flatten(manifest["results"], "", fields);
  for (const auto& [key, want] : baseline["fields"].items()) {
    if (!fields.contains(key)) return "missing result field " + key;
    const json& got = fields[key];
    if (want.is_boolean() || got.is_boolean()) {
      if (want != got) return "field " + key + " changed";
      continue;
    }
    const double a = want.get<double>(), g = got.get<double>();
    if (std::abs(a - g) > 1e-12 * std::max({std::abs(a), std::abs(g), 1e-300}))
      return "field " + key + ": baseline " + fmt17(a) + " vs " + fmt17(g);
  }
  return "";
}

}  // namespace mvie
