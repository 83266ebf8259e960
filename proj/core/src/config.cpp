#include "qflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "qflow/errors.hpp"
#include "qflow/io.hpp"

namespace qflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long parse_int(const std::string& value, const std::string& where) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    throw ConfigError(where + ": expected an integer, got \"" + value + "\"");
  }
  return v;
}

double parse_real(const std::string& value, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError(where + ": expected a finite number, got \"" + value +
                      "\"");
  }
  return v;
}

struct NamedKind {
  const char* name;
  RunKind kind;
};
constexpr NamedKind kKinds[] = {
    {"grid", RunKind::Grid},       {"hedgehog", RunKind::Hedgehog},
    {"uv", RunKind::Uv},           {"s2d", RunKind::S2d},
    {"uv_static", RunKind::UvStatic},
};

struct NamedFamily {
  const char* name;
  InitFamily family;
};
constexpr NamedFamily kFamilies[] = {
    {"case1", InitFamily::CaseI},
    {"case2", InitFamily::CaseII},
    {"biaxial_sphere", InitFamily::BiaxialSphere},
    {"ellipsoidal", InitFamily::Ellipsoidal},
    {"uv_tanh", InitFamily::UvTanh},
    {"uv_star", InitFamily::UvStar},
    {"uv_perturbed", InitFamily::UvPerturbed},
    {"step_front", InitFamily::StepFront},
    {"efficient_interface", InitFamily::EfficientInterface},
    {"s2d_tanh", InitFamily::S2dTanh},
    {"uv_static", InitFamily::UvStaticSolution},
};

struct NamedBoundary {
  const char* name;
  BoundaryScenario boundary;
};
constexpr NamedBoundary kBoundaries[] = {
    {"ball_radial", BoundaryScenario::BallRadial},
    {"disc_planar_uniaxial", BoundaryScenario::DiscPlanarUniaxial},
    {"disc_biaxial", BoundaryScenario::DiscBiaxial},
};

template <typename Table, std::size_t N>
std::string valid_names(const Table (&table)[N]) {
  std::string out;
  for (const auto& entry : table) {
    if (!out.empty()) {
      out += ", ";
    }
    out += entry.name;
  }
  return out;
}

RunKind kind_from(const std::string& value, const std::string& where) {
  for (const auto& e : kKinds) {
    if (value == e.name) {
      return e.kind;
    }
  }
  throw ConfigError(where + ": unknown kind \"" + value + "\" (valid: " +
                    valid_names(kKinds) + ")");
}

InitFamily family_from(const std::string& value, const std::string& where) {
  for (const auto& e : kFamilies) {
    if (value == e.name) {
      return e.family;
    }
  }
  throw ConfigError(where + ": unknown family \"" + value + "\" (valid: " +
                    valid_names(kFamilies) + ")");
}

BoundaryScenario boundary_from(const std::string& value,
                               const std::string& where) {
  for (const auto& e : kBoundaries) {
    if (value == e.name) {
      return e.boundary;
    }
  }
  throw ConfigError(where + ": unknown boundary \"" + value + "\" (valid: " +
                    valid_names(kBoundaries) + ")");
}

const char* kind_name(RunKind k) {
  for (const auto& e : kKinds) {
    if (e.kind == k) {
      return e.name;
    }
  }
  return "?";
}

const char* family_name(InitFamily f) {
  for (const auto& e : kFamilies) {
    if (e.family == f) {
      return e.name;
    }
  }
  return "?";
}

const char* boundary_name(BoundaryScenario b) {
  for (const auto& e : kBoundaries) {
    if (e.boundary == b) {
      return e.name;
    }
  }
  return "?";
}

void check_unit_interval(double v, const char* key, const std::string& where) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ConfigError(where + ": " + key + " must lie strictly between 0 and 1");
  }
}

/// Shared key handler for config lines and --set overrides; `where`
/// identifies the source ("line 7" or the override text) in errors.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
  if (key == "kind") {
    cfg.kind = kind_from(value, where);
  } else if (key == "dim") {
    const long v = parse_int(value, where);
    if (v != 2 && v != 3) {
      throw ConfigError(where + ": dim must be 2 or 3");
    }
    cfg.dim = static_cast<int>(v);
  } else if (key == "n") {
    const long v = parse_int(value, where);
    if (v < 16 || v % 2 != 0) {
      throw ConfigError(where + ": n must be even and at least 16");
    }
    cfg.n = static_cast<int>(v);
  } else if (key == "m") {
    const long v = parse_int(value, where);
    if (v < 8) {
      throw ConfigError(where + ": m must be at least 8");
    }
    cfg.m = static_cast<int>(v);
  } else if (key == "ltilde") {
    const double v = parse_real(value, where);
    if (!(v > 0.0)) {
      throw ConfigError(where + ": ltilde must be positive");
    }
    cfg.ltilde = v;
  } else if (key == "params") {
    try {
      cfg.ltilde = parameter_preset(value).Ltilde;
    } catch (const ConfigError& err) {
      throw ConfigError(where + ": " + err.what());
    }
  } else if (key == "family") {
    cfg.family = family_from(value, where);
  } else if (key == "boundary") {
    cfg.boundary = boundary_from(value, where);
  } else if (key == "r0") {
    cfg.r0 = parse_real(value, where);
    check_unit_interval(cfg.r0, "r0", where);
  } else if (key == "u0") {
    cfg.u0 = parse_real(value, where);
    check_unit_interval(cfg.u0, "u0", where);
  } else if (key == "v0") {
    cfg.v0 = parse_real(value, where);
    check_unit_interval(cfg.v0, "v0", where);
  } else if (key == "epsilon") {
    const double v = parse_real(value, where);
    if (v < 0.0 || v >= 1.0) {
      throw ConfigError(where + ": epsilon must lie in [0, 1)");
    }
    cfg.epsilon = v;
  } else if (key == "t_end") {
    const double v = parse_real(value, where);
    if (!(v > 0.0)) {
      throw ConfigError(where + ": t_end must be positive");
    }
    cfg.t_end = v;
  } else if (key == "dt") {
    const double v = parse_real(value, where);
    if (v < 0.0) {
      throw ConfigError(where + ": dt must be nonnegative (0 = automatic)");
    }
    cfg.dt = v;
  } else if (key == "stencil") {
    if (value == "second") {
      cfg.stencil = Stencil::SecondOrder;
    } else if (value == "fourth") {
      cfg.stencil = Stencil::FourthOrder;
    } else {
      throw ConfigError(where + ": unknown stencil \"" + value +
                        "\" (valid: second, fourth)");
    }
  } else if (key == "series_every") {
    const long v = parse_int(value, where);
    if (v < 1) {
      throw ConfigError(where + ": series_every must be at least 1");
    }
    cfg.series_every = static_cast<int>(v);
  } else if (key == "snapshot_every") {
    const long v = parse_int(value, where);
    if (v < 0) {
      throw ConfigError(where + ": snapshot_every must be nonnegative");
    }
    cfg.snapshot_every = static_cast<int>(v);
  } else if (key == "out") {
    if (value.empty()) {
      throw ConfigError(where + ": out must not be empty");
    }
    cfg.out = value;
  } else if (key == "threads") {
    const long v = parse_int(value, where);
    if (v < 0) {
      throw ConfigError(where + ": threads must be nonnegative");
    }
    cfg.threads = static_cast<int>(v);
  } else {
    throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

struct Entry {
  std::string key, value;
  int line;
};

const std::map<std::string, RunConfig>& preset_catalog() {
  static const std::map<std::string, RunConfig> catalog = [] {
    std::map<std::string, RunConfig> c;

    auto ball = [](int n, double lt, InitFamily fam, double r0, double t_end) {
      RunConfig cfg;
      cfg.kind = RunKind::Grid;
      cfg.dim = 3;
      cfg.n = n;
      cfg.ltilde = lt;
      cfg.family = fam;
      cfg.boundary = BoundaryScenario::BallRadial;
      cfg.r0 = r0;
      cfg.t_end = t_end;
      return cfg;
    };
    auto disc = [](int n, double lt, InitFamily fam, BoundaryScenario bc,
                   double t_end) {
      RunConfig cfg;
      cfg.kind = RunKind::Grid;
      cfg.dim = 2;
      cfg.n = n;
      cfg.ltilde = lt;
      cfg.family = fam;
      cfg.boundary = bc;
      cfg.t_end = t_end;
      return cfg;
    };
    auto radial = [](RunKind kind, int m, double lt, InitFamily fam, double r0,
                     double t_end) {
      RunConfig cfg;
      cfg.kind = kind;
      cfg.m = m;
      cfg.ltilde = lt;
      cfg.family = fam;
      cfg.r0 = r0;
      cfg.t_end = t_end;
      cfg.series_every = 2000;
      return cfg;
    };

    c["case1_ball_L005"] = ball(128, 0.05, InitFamily::CaseI, 0.5, 0.125);
    c["case1_ball_L001"] = ball(256, 0.01, InitFamily::CaseI, 0.5, 0.125);
    c["case2_ball_L005"] = ball(128, 0.05, InitFamily::CaseII, 0.5, 0.125);
    c["case2_ball_L001"] = ball(256, 0.01, InitFamily::CaseII, 0.5, 0.125);
    c["biaxial_ball_L001"] =
        ball(256, 0.01, InitFamily::BiaxialSphere, 0.5, 0.085);
    c["ellipsoid_ball_L001"] =
        ball(256, 0.01, InitFamily::Ellipsoidal, 0.5, 0.1);

    {
      RunConfig cfg = disc(256, 0.01, InitFamily::UvTanh,
                           BoundaryScenario::DiscPlanarUniaxial, 0.25);
      cfg.u0 = 0.6;
      cfg.v0 = 0.4;
      c["uv_planar_disc_L001"] = cfg;
      cfg.family = InitFamily::UvStar;
      cfg.t_end = 0.2;
      c["uv_star_disc_L001"] = cfg;
    }
    {
      RunConfig cfg = disc(128, 0.05, InitFamily::UvPerturbed,
                           BoundaryScenario::DiscPlanarUniaxial, 2.0);
      cfg.u0 = 0.6;
      cfg.v0 = 0.4;
      cfg.epsilon = 1e-3;
      c["perturbed_disc_L005"] = cfg;
    }
    {
      RunConfig cfg = disc(256, 0.01, InitFamily::S2dTanh,
                           BoundaryScenario::DiscBiaxial, 0.25);
      cfg.r0 = 0.5;
      c["biaxial_bc_disc_r05"] = cfg;
      cfg.r0 = 0.92;
      c["biaxial_bc_disc_r092"] = cfg;
    }

    c["s2d_radial_L005"] =
        radial(RunKind::S2d, 2048, 0.05, InitFamily::S2dTanh, 0.5, 0.01);
    c["s2d_radial_L001"] =
        radial(RunKind::S2d, 2048, 0.01, InitFamily::S2dTanh, 0.5, 0.01);
    c["hedgehog_radial_L001"] =
        radial(RunKind::Hedgehog, 2048, 0.01, InitFamily::CaseI, 0.75, 0.0625);

    for (auto& [name, cfg] : c) {
      cfg.scenario = name;
    }
    return c;
  }();
  return catalog;
}

}  // namespace

RunConfig scenario_preset(const std::string& name) {
  const auto& catalog = preset_catalog();
  const auto it = catalog.find(name);
  if (it == catalog.end()) {
    std::string names;
    for (const auto& [n, cfg] : catalog) {
      (void)cfg;
      if (!names.empty()) {
        names += ", ";
      }
      names += n;
    }
    throw ConfigError("unknown scenario \"" + name + "\" (valid: " + names +
                      ")");
  }
  return it->second;
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& [n, cfg] : preset_catalog()) {
    (void)cfg;
    names.push_back(n);
  }
  return names;
}

RunConfig parse_config(const std::string& text) {
  std::vector<Entry> entries;
  std::map<std::string, int> first_line;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value, got \"" + body + "\"");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    const auto [it, fresh] = first_line.emplace(key, lineno);
    if (!fresh) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key \"" +
                        key + "\" (first set on line " +
                        std::to_string(it->second) + ")");
    }
    entries.push_back({key, value, lineno});
  }

  {
    const auto lt = first_line.find("ltilde");
    const auto pp = first_line.find("params");
    if (lt != first_line.end() && pp != first_line.end()) {
      const int later = std::max(lt->second, pp->second);
      const int earlier = std::min(lt->second, pp->second);
      throw ConfigError("line " + std::to_string(later) +
                        ": params and ltilde both set the elastic constant "
                        "(other key on line " +
                        std::to_string(earlier) + "); pick one");
    }
  }

  RunConfig cfg;
  bool have_scenario = false;
  for (const auto& e : entries) {
    if (e.key == "scenario") {
      try {
        cfg = scenario_preset(e.value);
      } catch (const ConfigError& err) {
        throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
      }
      have_scenario = true;
    }
  }
  for (const auto& e : entries) {
    if (e.key == "scenario") {
      continue;
    }
    apply_key(cfg, e.key, e.value, "line " + std::to_string(e.line));
  }

  if (!have_scenario) {
    if (first_line.find("kind") == first_line.end()) {
      throw ConfigError(
          "config sets neither scenario nor kind; required keys: scenario, or "
          "kind plus the size (n for grid, m for radial), family, and t_end");
    }
    auto require = [&](std::initializer_list<const char*> keys) {
      std::string missing;
      for (const char* k : keys) {
        if (first_line.find(k) == first_line.end()) {
          if (!missing.empty()) {
            missing += ", ";
          }
          missing += k;
        }
      }
      if (!missing.empty()) {
        throw ConfigError("kind " + std::string(kind_name(cfg.kind)) +
                          " is missing required keys: " + missing);
      }
    };
    switch (cfg.kind) {
      case RunKind::Grid:
        require({"n", "family", "boundary", "t_end"});
        break;
      case RunKind::Hedgehog:
      case RunKind::Uv:
      case RunKind::S2d:
        require({"m", "family", "t_end"});
        break;
      case RunKind::UvStatic:
        require({"m"});
        break;
    }
  }

  validate_run(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const std::string where = "--set " + s;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected key=value");
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key == "scenario") {
      throw ConfigError(where +
                        ": pick the scenario with --scenario, then override "
                        "individual keys");
    }
    apply_key(cfg, key, value, where);
  }
  validate_run(cfg);
}

void validate_run(const RunConfig& cfg) {
  if (cfg.dim != 2 && cfg.dim != 3) {
    throw ConfigError("dim must be 2 or 3");
  }
  if (!(cfg.ltilde > 0.0) || !std::isfinite(cfg.ltilde)) {
    throw ConfigError("ltilde must be positive and finite");
  }
  if (cfg.kind == RunKind::Grid) {
    if (cfg.n < 16 || cfg.n % 2 != 0) {
      throw ConfigError("grid runs need n even and at least 16");
    }
  } else {
    if (cfg.m < 8) {
      throw ConfigError(std::string(kind_name(cfg.kind)) +
                        " runs need m at least 8");
    }
  }
  if (cfg.kind != RunKind::UvStatic && !(cfg.t_end > 0.0)) {
    throw ConfigError("t_end must be positive");
  }
  if (cfg.dt < 0.0 || !std::isfinite(cfg.dt)) {
    throw ConfigError("dt must be nonnegative and finite");
  }
  if (cfg.series_every < 1) {
    throw ConfigError("series_every must be at least 1");
  }
  if (cfg.snapshot_every < 0) {
    throw ConfigError("snapshot_every must be nonnegative");
  }
  if (cfg.threads < 0) {
    throw ConfigError("threads must be nonnegative");
  }
  if (cfg.out.empty()) {
    throw ConfigError("out must not be empty");
  }
  check_unit_interval(cfg.r0, "r0", "config");
  check_unit_interval(cfg.u0, "u0", "config");
  check_unit_interval(cfg.v0, "v0", "config");
  if (cfg.epsilon < 0.0 || cfg.epsilon >= 1.0) {
    throw ConfigError("epsilon must lie in [0, 1)");
  }

  auto family_in = [&](std::initializer_list<InitFamily> allowed) {
    return std::find(allowed.begin(), allowed.end(), cfg.family) !=
           allowed.end();
  };
  switch (cfg.kind) {
    case RunKind::Grid:
      break;  // generate_grid checks the family against the dimension
    case RunKind::Hedgehog:
      if (!family_in({InitFamily::CaseI, InitFamily::CaseII,
                      InitFamily::StepFront, InitFamily::EfficientInterface})) {
        throw ConfigError(std::string("family ") + family_name(cfg.family) +
                          " has no single-amplitude radial form");
      }
      break;
    case RunKind::Uv:
      if (!family_in({InitFamily::UvTanh, InitFamily::UvStaticSolution})) {
        throw ConfigError(std::string("family ") + family_name(cfg.family) +
                          " has no rotationally symmetric (u, v) form");
      }
      break;
    case RunKind::S2d:
      if (!family_in({InitFamily::S2dTanh, InitFamily::StepFront})) {
        throw ConfigError(std::string("family ") + family_name(cfg.family) +
                          " has no single-amplitude planar form");
      }
      break;
    case RunKind::UvStatic:
      break;  // the static solve ignores the initial family
  }
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  if (!cfg.scenario.empty()) {
    out << "# resolved from scenario " << cfg.scenario << "\n";
  }
  out << "kind = " << kind_name(cfg.kind) << "\n";
  if (cfg.kind == RunKind::Grid) {
    out << "dim = " << cfg.dim << "\n";
    out << "n = " << cfg.n << "\n";
  } else {
    out << "m = " << cfg.m << "\n";
  }
  out << "ltilde = " << format_double(cfg.ltilde) << "\n";
  if (cfg.kind != RunKind::UvStatic) {
    out << "family = " << family_name(cfg.family) << "\n";
  }
  if (cfg.kind == RunKind::Grid) {
    out << "boundary = " << boundary_name(cfg.boundary) << "\n";
    out << "stencil = "
        << (cfg.stencil == Stencil::SecondOrder ? "second" : "fourth") << "\n";
  }
  out << "r0 = " << format_double(cfg.r0) << "\n";
  out << "u0 = " << format_double(cfg.u0) << "\n";
  out << "v0 = " << format_double(cfg.v0) << "\n";
  out << "epsilon = " << format_double(cfg.epsilon) << "\n";
  if (cfg.t_end > 0.0) {
    out << "t_end = " << format_double(cfg.t_end) << "\n";
  }
  if (cfg.dt > 0.0) {
    out << "dt = " << format_double(cfg.dt) << "\n";
  }
  out << "series_every = " << cfg.series_every << "\n";
  out << "snapshot_every = " << cfg.snapshot_every << "\n";
  out << "out = " << cfg.out << "\n";
  out << "threads = " << cfg.threads << "\n";
  return out.str();
}

}  // namespace qflow
