#include "nematoflow/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nematoflow/error.hpp"

namespace nematoflow::config {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"free_energy", {"name", "a", "k", "k0", "k1", "k2", "bulk"}},
      {"material",
       {"rho", "n_dim", "mu_s", "mu_b", "mu_V", "mu_D", "mu_P", "mu_L", "mu_0", "alpha_0",
        "alpha_1", "gamma"}},
      {"grid", {"nx", "ny", "lx", "ly"}},
      {"time", {"dt", "t_end", "cfl_safety", "output_every"}},
      {"scenario", {"name", "amplitude", "seed", "theta_star", "director_angle", "modes"}},
      {"mode", {"type"}},
      {"toggles", {"renormalize_director", "freeze_velocity", "theta_floor"}},
      {"output", {"directory", "snapshot_every"}},
      {"check",
       {"theta_min", "theta_max", "tau_min", "tau_max", "rho_min", "rho_max", "samples", "seed"}},
      {"symbol",
       {"samples", "dim", "seed", "theta_min", "theta_max", "tau_min", "tau_max", "z_radii",
        "z_angles"}},
  };
  return keys;
}

class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  bool present() const { return tree_ != nullptr; }
  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }
  std::string path(const std::string& key) const { return name_ + "." + key; }

  std::string text(const std::string& key) const {
    auto v = tree_->get<std::string>(key);
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
  }

  double number(const std::string& key) const {
    const std::string t = text(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size() || !std::isfinite(v)) {
      throw ConfigError(path(key), "expected a number, got '" + t + "'");
    }
    return v;
  }

  long long integer(const std::string& key) const {
    const std::string t = text(key);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) {
      throw ConfigError(path(key), "expected an integer, got '" + t + "'");
    }
    return v;
  }

  bool boolean(const std::string& key) const {
    const std::string t = text(key);
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    throw ConfigError(path(key), "expected true or false, got '" + t + "'");
  }

  template <class T, class Get>
  void optional(const std::string& key, T& out, Get get) const {
    if (has(key)) out = static_cast<T>((this->*get)(key));
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
};

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

RunConfig build(const pt::ptree& root) {
  for (const auto& [section, body] : root) {
    const auto it = known_keys().find(section);
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, "key outside of any section");
    }
    if (it == known_keys().end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
  auto section = [&](const std::string& name) {
    const auto it = root.find(name);
    return Section(name, it == root.not_found() ? nullptr : &it->second);
  };

  RunConfig c;

  if (const Section fe = section("free_energy"); fe.present()) {
    require(fe.has("name"), "free_energy.name", "missing required key");
    const std::string name = fe.text("name");
    std::map<std::string, double> coeffs;
    std::map<std::string, double> defaults;
    try {
      defaults = material::catalog_defaults(name);
    } catch (const Error& e) {
      throw ConfigError("free_energy.name", e.what());
    }
    for (const auto& [key, def] : defaults) {
      if (fe.has(key)) coeffs[key] = fe.number(key);
    }
    for (const char* key : {"a", "k", "k0", "k1", "k2", "bulk"}) {
      if (fe.has(key) && !defaults.count(key)) {
        throw ConfigError(fe.path(key), "not a coefficient of free energy '" + name + "'");
      }
    }
    c.material.free_energy = material::make_free_energy(name, coeffs);
  }

  if (const Section m = section("material"); m.present()) {
    auto& p = c.material.params;
    if (m.has("rho")) {
      p.rho = m.number("rho");
      require(p.rho > 0.0, m.path("rho"), "must be positive");
    }
    if (m.has("n_dim")) {
      p.n_dim = static_cast<int>(m.integer("n_dim"));
      require(p.n_dim == 2 || p.n_dim == 3, m.path("n_dim"), "must be 2 or 3");
    }
    for (auto name : material::ParameterSet::rule_names()) {
      const std::string key(name);
      if (!m.has(key)) continue;
      try {
        *p.rule(key) = material::ParameterRule::parse(m.text(key));
      } catch (const Error& e) {
        throw ConfigError(m.path(key), e.what());
      }
    }
  }

  if (const Section g = section("grid"); g.present()) {
    for (const char* key : {"nx", "ny", "lx", "ly"}) {
      require(g.has(key), g.path(key), "missing required key");
    }
    grid::Grid gr;
    gr.nx = static_cast<int>(g.integer("nx"));
    gr.ny = static_cast<int>(g.integer("ny"));
    gr.lx = g.number("lx");
    gr.ly = g.number("ly");
    require(gr.nx >= 2 && gr.nx <= 4096, g.path("nx"), "must be in [2, 4096]");
    require(gr.ny >= 2 && gr.ny <= 4096, g.path("ny"), "must be in [2, 4096]");
    require(gr.lx > 0.0, g.path("lx"), "must be positive");
    require(gr.ly > 0.0, g.path("ly"), "must be positive");
    c.grid = gr;
  }

  if (const Section t = section("time"); t.present()) {
    require(t.has("dt"), t.path("dt"), "missing required key");
    require(t.has("t_end"), t.path("t_end"), "missing required key");
    c.has_time = true;
    c.step.dt = t.number("dt");
    c.step.t_end = t.number("t_end");
    t.optional("cfl_safety", c.step.cfl_safety, &Section::number);
    t.optional("output_every", c.step.output_every, &Section::integer);
    require(c.step.dt > 0.0, t.path("dt"), "must be positive");
    require(c.step.t_end >= 0.0, t.path("t_end"), "must be non-negative");
    require(c.step.cfl_safety > 0.0 && c.step.cfl_safety <= 1.0, t.path("cfl_safety"),
            "must lie in (0, 1]");
    require(c.step.output_every >= 1, t.path("output_every"), "must be at least 1");
  }

  if (const Section s = section("scenario"); s.present()) {
    require(s.has("name"), s.path("name"), "missing required key");
    solver::Scenario sc;
    sc.name = s.text("name");
    require(sc.name == "equilibrium_perturbation" || sc.name == "taylor_green_director" ||
                sc.name == "random_smooth",
            s.path("name"),
            "unknown scenario '" + sc.name +
                "' (equilibrium_perturbation, taylor_green_director, random_smooth)");
    s.optional("amplitude", sc.amplitude, &Section::number);
    if (s.has("seed")) {
      const long long seed = s.integer("seed");
      require(seed >= 0, s.path("seed"), "must be non-negative");
      sc.seed = static_cast<std::uint64_t>(seed);
    }
    s.optional("theta_star", sc.theta_star, &Section::number);
    s.optional("director_angle", sc.director_angle, &Section::number);
    s.optional("modes", sc.modes, &Section::integer);
    require(sc.theta_star > 0.0, s.path("theta_star"), "must be positive");
    require(sc.modes >= 1 && sc.modes <= 16, s.path("modes"), "must be in [1, 16]");
    c.scenario = sc;
  }

  if (const Section m = section("mode"); m.present() && m.has("type")) {
    const std::string t = m.text("type");
    require(t == "isothermal" || t == "nonisothermal", m.path("type"),
            "must be isothermal or nonisothermal");
    c.step.isothermal = t == "isothermal";
  }

  if (const Section t = section("toggles"); t.present()) {
    t.optional("renormalize_director", c.step.renormalize_director, &Section::boolean);
    t.optional("freeze_velocity", c.step.freeze_velocity, &Section::boolean);
    t.optional("theta_floor", c.step.theta_floor, &Section::number);
    require(c.step.theta_floor > 0.0, t.path("theta_floor"), "must be positive");
  }

  if (const Section o = section("output"); o.present()) {
    if (o.has("directory")) c.output_directory = o.text("directory");
    require(!c.output_directory.empty(), o.path("directory"), "must not be empty");
    o.optional("snapshot_every", c.snapshot_every, &Section::integer);
    require(c.snapshot_every >= 0, o.path("snapshot_every"), "must be non-negative");
  }

  if (const Section k = section("check"); k.present()) {
    auto& d = c.check_domain;
    k.optional("theta_min", d.theta_min, &Section::number);
    k.optional("theta_max", d.theta_max, &Section::number);
    k.optional("tau_min", d.tau_min, &Section::number);
    k.optional("tau_max", d.tau_max, &Section::number);
    require(k.has("rho_min") == k.has("rho_max"), k.path(k.has("rho_min") ? "rho_max" : "rho_min"),
            "rho_min and rho_max must be given together");
    if (k.has("rho_min")) d.rho_range = std::pair{k.number("rho_min"), k.number("rho_max")};
    if (k.has("samples")) {
      const long long n = k.integer("samples");
      require(n >= 1, k.path("samples"), "must be at least 1");
      d.samples = static_cast<std::size_t>(n);
    }
    if (k.has("seed")) {
      const long long n = k.integer("seed");
      require(n >= 0, k.path("seed"), "must be non-negative");
      d.seed = static_cast<std::uint64_t>(n);
    }
    require(d.theta_min > 0.0 && d.theta_min <= d.theta_max, k.path("theta_min"),
            "need 0 < theta_min <= theta_max");
    require(d.tau_min >= 0.0 && d.tau_min <= d.tau_max, k.path("tau_min"),
            "need 0 <= tau_min <= tau_max");
    if (d.rho_range) {
      require(d.rho_range->first > 0.0 && d.rho_range->first <= d.rho_range->second,
              k.path("rho_min"), "need 0 < rho_min <= rho_max");
    }
  }

  if (const Section s = section("symbol"); s.present()) {
    auto& w = c.sweep;
    if (s.has("samples")) {
      const long long n = s.integer("samples");
      require(n >= 1, s.path("samples"), "must be at least 1");
      w.samples = static_cast<std::size_t>(n);
    }
    s.optional("dim", w.dim, &Section::integer);
    require(w.dim == 2 || w.dim == 3, s.path("dim"), "must be 2 or 3");
    if (s.has("seed")) {
      const long long n = s.integer("seed");
      require(n >= 0, s.path("seed"), "must be non-negative");
      w.seed = static_cast<std::uint64_t>(n);
    }
    s.optional("theta_min", w.theta_min, &Section::number);
    s.optional("theta_max", w.theta_max, &Section::number);
    s.optional("tau_min", w.tau_min, &Section::number);
    s.optional("tau_max", w.tau_max, &Section::number);
    s.optional("z_radii", w.z_radii, &Section::integer);
    s.optional("z_angles", w.z_angles, &Section::integer);
    require(w.theta_min > 0.0 && w.theta_min <= w.theta_max, s.path("theta_min"),
            "need 0 < theta_min <= theta_max");
    require(w.tau_min >= 0.0 && w.tau_min <= w.tau_max, s.path("tau_min"),
            "need 0 <= tau_min <= tau_max");
    require(w.z_radii >= 1, s.path("z_radii"), "must be at least 1");
    require(w.z_angles >= 1, s.path("z_angles"), "must be at least 1");
  }
  return c;
}

}  // namespace

void RunConfig::require_simulation() const {
  if (!grid) throw ConfigError("grid.nx", "missing required key");
  if (!has_time) throw ConfigError("time.dt", "missing required key");
  if (!scenario) throw ConfigError("scenario.name", "missing required key");
}

RunConfig parse_string(const std::string& text, const std::string& name) {
  pt::ptree root;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream msg;
    msg << e.message() << " (line " << e.line() << ")";
    throw ConfigError(name, msg.str());
  }
  RunConfig c = build(root);
  c.source = text;
  return c;
}

RunConfig parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_string(text.str(), path);
}

}  // namespace nematoflow::config
