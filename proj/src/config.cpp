#include "mvie/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace mvie {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Tracks which keys were consumed so typos fail loudly.
class Section {
 public:
  Section(std::string name, const std::map<std::string, std::string>* kv)
      : name_(std::move(name)), kv_(kv) {}

  bool has(const std::string& key) const { return kv_ && kv_->count(key) > 0; }

  std::string raw(const std::string& key) const {
    used_.insert(key);
    return kv_->at(key);
  }

  double number(const std::string& key) const {
    const std::string v = raw(key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || trim(end) != "")
      throw ConfigError("[" + name_ + "] " + key + ": not a number: '" + v + "'");
    return x;
  }

  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double x = number(key);
    if (x != static_cast<int>(x))
      throw ConfigError("[" + name_ + "] " + key + ": expected an integer");
    return static_cast<int>(x);
  }

  Vec3 vec(const std::string& key) const {
    const std::string v = raw(key);
    std::istringstream is(v);
    Vec3 out;
    if (!(is >> out[0] >> out[1] >> out[2]))
      throw ConfigError("[" + name_ + "] " + key + ": expected three numbers");
    std::string rest;
    if (is >> rest)
      throw ConfigError("[" + name_ + "] " + key + ": expected exactly three numbers");
    return out;
  }

  Vec3 vec(const std::string& key, const Vec3& fallback) const {
    return has(key) ? vec(key) : fallback;
  }

  std::string word(const std::string& key, const std::string& fallback) const {
    return has(key) ? lower(trim(raw(key))) : fallback;
  }

  std::string require(const std::string& key) const {
    if (!has(key)) throw ConfigError("[" + name_ + "] " + key + ": missing");
    return raw(key);
  }

  void reject_unknown() const {
    if (!kv_) return;
    for (const auto& [key, value] : *kv_) {
      (void)value;
      if (!used_.count(key))
        throw ConfigError("[" + name_ + "] " + key + ": unknown key");
    }
  }

 private:
  std::string name_;
  const std::map<std::string, std::string>* kv_;
  mutable std::set<std::string> used_;
};

ShapeSpec parse_shape(const Section& s, const std::string& name) {
  const std::string kind = s.word("kind", "sphere");
  const Vec3 center = s.vec("center", Vec3::Zero());
  ShapeSpec shape;
  if (kind == "sphere") {
    shape = ShapeSpec::sphere(s.number("radius", 1.0), center);
  } else if (kind == "ellipsoid") {
    if (!s.has("semi_axes"))
      throw ConfigError("[" + name + "] semi_axes: missing for ellipsoid");
    shape = ShapeSpec::ellipsoid(s.vec("semi_axes"), center);
  } else if (kind == "box") {
    if (!s.has("half_widths"))
      throw ConfigError("[" + name + "] half_widths: missing for box");
    shape = ShapeSpec::box(s.vec("half_widths"), center);
  } else if (kind == "two-spheres") {
    if (!s.has("center2"))
      throw ConfigError("[" + name + "] center2: missing for two-spheres");
    shape = ShapeSpec::two_spheres(s.number("radius", 1.0), center,
                                   s.number("radius2", 1.0), s.vec("center2"));
  } else {
    throw ConfigError("[" + name + "] kind: unknown shape '" + kind + "'");
  }
  return shape;
}

MediumSpec parse_medium(const Section& s, const std::string& name,
                        const std::string& units) {
  MediumSpec m;
  if (units == "natural") {
    m.eps0 = s.number("eps0", 1.0);
    m.mu0 = s.number("mu0", 1.0);
  } else {  // si
    m.eps0 = s.number("eps0", 8.8541878128e-12);
    m.mu0 = s.number("mu0", 1.25663706212e-6);
  }
  if (s.has("eps") && s.has("eps_rel"))
    throw ConfigError("[" + name + "] eps: give either eps or eps_rel, not both");
  if (s.has("mu") && s.has("mu_rel"))
    throw ConfigError("[" + name + "] mu: give either mu or mu_rel, not both");
  m.eps = s.has("eps_rel") ? s.number("eps_rel") * m.eps0 : s.number("eps", m.eps0);
  m.mu = s.has("mu_rel") ? s.number("mu_rel") * m.mu0 : s.number("mu", m.mu0);
  m.omega = s.number("omega", 0.0);
  if (m.omega <= 0.0) throw ConfigError("[" + name + "] omega: must be positive");
  if (m.eps <= 0.0) throw ConfigError("[" + name + "] eps: must be positive");
  if (m.mu <= 0.0) throw ConfigError("[" + name + "] mu: must be positive");

  if (s.has("v") && s.has("v_frac"))
    throw ConfigError("[" + name + "] v: give either v or v_frac/v_dir, not both");
  if (s.has("v")) {
    m.V = s.vec("v");
  } else if (s.has("v_frac")) {
    const double f = s.number("v_frac");
    Vec3 dir = s.vec("v_dir", Vec3(0, 0, 1));
    if (dir.norm() == 0.0)
      throw ConfigError("[" + name + "] v_dir: zero direction");
    m.V = f * m.c_Omega() * dir.normalized();
  } else {
    m.V = Vec3::Zero();
  }
  return m;
}

}  // namespace

std::map<std::string, std::map<std::string, std::string>> parse_ini(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.erase(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path + ":" + std::to_string(lineno) + ": unterminated section");
      section = lower(trim(line.substr(1, line.size() - 2)));
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || section.empty())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": key outside a section");
    if (sections[section].count(key))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
    sections[section][key] = value;
  }
  return sections;
}

RunConfig load_config(const std::string& path) {
  const auto ini = parse_ini(path);
  auto section = [&](const std::string& name) -> Section {
    const auto it = ini.find(name);
    return Section(name, it == ini.end() ? nullptr : &it->second);
  };
  const std::set<std::string> known = {"medium", "medium2", "shape",  "shape2",
                                       "grid",   "solver",  "experiment", "output"};
  for (const auto& [name, kv] : ini) {
    (void)kv;
    if (!known.count(name)) throw ConfigError("[" + name + "]: unknown section");
  }

  RunConfig cfg;
  const Section med = section("medium");
  if (!ini.count("medium")) throw ConfigError("[medium]: missing section");
  cfg.units = med.word("units", "natural");
  if (cfg.units != "natural" && cfg.units != "si")
    throw ConfigError("[medium] units: expected natural or si");
  cfg.medium = parse_medium(med, "medium", cfg.units);
  cfg.medium.cpw = med.number("cpw", 1.0);
  med.reject_unknown();

  if (!ini.count("shape")) throw ConfigError("[shape]: missing section");
  const Section shp = section("shape");
  cfg.shape = parse_shape(shp, "shape");
  shp.reject_unknown();

  if (!ini.count("grid")) throw ConfigError("[grid]: missing section");
  const Section grd = section("grid");
  cfg.h = grd.number("h", 0.0);
  if (cfg.h <= 0.0) throw ConfigError("[grid] h: must be positive");
  cfg.margin = grd.integer("margin", 2);
  if (cfg.margin < 1) throw ConfigError("[grid] margin: at least one empty cell");
  grd.reject_unknown();

  const Section sol = section("solver");
  cfg.solver.method = sol.word("method", "krylov");
  if (cfg.solver.method != "born" && cfg.solver.method != "krylov")
    throw ConfigError("[solver] method: expected born or krylov");
  cfg.solver.tol = sol.number("tol", 1e-8);
  if (cfg.solver.tol <= 0.0) throw ConfigError("[solver] tol: must be positive");
  cfg.solver.maxit = sol.integer("maxit", 300);
  cfg.solver.restart = sol.integer("restart", 60);
  cfg.solver.series_tol = sol.number("series_tol", 1e-14);
  cfg.solver.J = sol.integer("j", -1);
  sol.reject_unknown();

  if (!ini.count("experiment")) throw ConfigError("[experiment]: missing section");
  const Section exp = section("experiment");
  cfg.experiment.kind = exp.word("kind", "");
  const std::set<std::string> kinds = {"check-regime", "solve",        "farfield",
                                       "mie-validate", "probe-blowup", "discriminate"};
  if (!kinds.count(cfg.experiment.kind))
    throw ConfigError("[experiment] kind: unknown experiment '" + cfg.experiment.kind +
                      "'");
  cfg.experiment.direction = exp.vec("direction", Vec3(0, 0, 1));
  cfg.experiment.polarization = exp.vec("polarization", Vec3(1, 0, 0));
  cfg.experiment.ndirs = exp.integer("ndirs", 196);
  cfg.experiment.max_rel_err = exp.number("max_rel_err", 0.03);
  cfg.experiment.probe_dir = exp.vec("probe_dir", Vec3(1, 1, 0.6));
  cfg.experiment.probe_d0 = exp.number("probe_d0", 0.5);
  cfg.experiment.probe_levels = exp.integer("probe_levels", 4);
  cfg.experiment.incident_dirs = exp.integer("incident_dirs", 26);
  cfg.experiment.threshold = exp.number("threshold", 0.0);
  exp.reject_unknown();

  cfg.has_shape2 = ini.count("shape2") > 0;
  cfg.has_medium2 = ini.count("medium2") > 0;
  if (cfg.experiment.kind == "discriminate") {
    if (!cfg.has_shape2) throw ConfigError("[shape2]: required for discriminate");
    const Section shp2 = section("shape2");
    cfg.shape2 = parse_shape(shp2, "shape2");
    shp2.reject_unknown();
    if (cfg.has_medium2) {
      const Section med2 = section("medium2");
      cfg.medium2 = parse_medium(med2, "medium2", cfg.units);
      cfg.medium2.cpw = med2.number("cpw", 1.0);
      med2.reject_unknown();
    } else {
      cfg.medium2 = cfg.medium;
    }
  } else if (cfg.has_shape2 || cfg.has_medium2) {
    throw ConfigError("[shape2]: only legal for the discriminate experiment");
  }

  const Section out = section("output");
  cfg.output.directory = ini.count("output") && out.has("directory")
                             ? out.raw("directory")
                             : std::string("out");
  const std::string formats =
      ini.count("output") ? out.word("formats", "csv json") : "csv json";
  cfg.output.csv = formats.find("csv") != std::string::npos;
  cfg.output.json = formats.find("json") != std::string::npos;
  if (ini.count("output")) out.reject_unknown();
  return cfg;
}

}  // namespace mvie
