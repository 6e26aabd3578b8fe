#include "nematoflow/cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <numbers>
#include <thread>

#include <CLI11.hpp>

#include "nematoflow/config.hpp"
#include "nematoflow/consistency.hpp"
#include "nematoflow/error.hpp"
#include "nematoflow/snapshot.hpp"
#include "nematoflow/symbolcheck.hpp"

namespace nematoflow::cli {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Exclusive ownership of an output directory for the lifetime of a command.
class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : path_(dir / ".nematoflow.lock") {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("output.directory", dir.string() + ": " + ec.message());
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      if (errno == EEXIST) {
        throw ConfigError("output.directory",
                          "'" + dir.string() + "' is locked by another run (" + path_.string() +
                              ")");
      }
      throw ConfigError("output.directory", path_.string() + ": " + std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
  }
  ~DirectoryLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw PreconditionError(path.string() + ": cannot open for writing");
  out << text;
}

std::string snapshot_name(std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu.txt", index);
  return buf;
}

// Maps library errors onto exit codes and prints them.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  } catch (const SolverAbort& e) {
    err << "abort at t=" << e.time() << ": " << e.what() << '\n';
    return kRuntimeAbort;
  } catch (const Error& e) {
    err << "abort: " << e.what() << '\n';
    return kRuntimeAbort;
  }
}

}  // namespace

unsigned worker_count() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("NEMATOFLOW_THREADS");
  if (!env || !*env) return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return hw;
  return static_cast<unsigned>(std::min<long>(v, hw));
}

std::string audit_block(const std::vector<diagnostics::DiagnosticsRecord>& series) {
  std::ostringstream o;
  o << "records " << series.size() << '\n';
  if (series.size() < 2) {
    o << "verdict single record, nothing to audit\n";
    return o.str();
  }
  const auto d = diagnostics::energy_identity_defect(series);
  double mass_defect = 0.0;
  double min_inc = d.entropy_increments.front();
  std::vector<std::size_t> beyond;
  std::vector<std::size_t> ea_increases;
  for (std::size_t k = 1; k < series.size(); ++k) {
    mass_defect = std::max(mass_defect, std::abs(series[k].mass - series[0].mass));
    const double inc = d.entropy_increments[k - 1];
    min_inc = std::min(min_inc, inc);
    // A discrete entropy decrease is tolerated up to the energy change of the
    // same interval measured in entropy units.
    const double allowance =
        std::abs(series[k].energy - series[k - 1].energy) / series[k].theta_min;
    if (inc < -allowance) beyond.push_back(k);
    if (series[k].available_energy > series[k - 1].available_energy) ea_increases.push_back(k);
  }
  auto rows = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size() && k < 20; ++k) s += " " + std::to_string(v[k]);
    if (v.size() > 20) s += " ...";
    return s;
  };
  o << "mass_defect " << g17(mass_defect) << '\n'
    << "max_relative_energy_defect " << g17(d.max_relative_energy_defect) << '\n'
    << "largest_energy_jump " << g17(d.largest_jump) << " row " << d.largest_jump_index << '\n'
    << "min_entropy_increment " << g17(min_inc) << '\n'
    << "entropy_decreases " << d.entropy_decreases.size() << rows(d.entropy_decreases) << '\n'
    << "entropy_decreases_beyond_allowance " << beyond.size() << rows(beyond) << '\n'
    << "available_energy_increases " << ea_increases.size() << rows(ea_increases) << '\n';
  const bool zero = mass_defect == 0.0 && d.max_relative_energy_defect == 0.0 &&
                    d.entropy_decreases.empty() && min_inc == 0.0 && ea_increases.empty();
  if (zero) {
    o << "verdict all defects zero\n";
  } else if (beyond.empty()) {
    o << "verdict entropy non-decreasing within the discretization allowance\n";
  } else {
    o << "verdict entropy decreases beyond the discretization allowance\n";
  }
  return o.str();
}

int simulate(const std::string& config_path, const std::optional<std::string>& output_dir,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    config::RunConfig cfg = config::parse_file(config_path);
    cfg.require_simulation();
    solver::require_supported(cfg.material);
    try {
      solver::validate(cfg.step);
    } catch (const PreconditionError& e) {
      throw ConfigError("time", e.what());
    }
    const fs::path dir = output_dir ? *output_dir : cfg.output_directory;
    DirectoryLock lock(dir);
    const fs::path snaps = dir / "snapshots";
    fs::create_directories(snaps);
    write_text(dir / "config.ini", cfg.source);

    const auto initial = solver::initialize(*cfg.grid, *cfg.scenario, cfg.step.theta_floor);
    std::vector<diagnostics::DiagnosticsRecord> series;
    std::vector<std::pair<double, double>> distances;
    std::size_t outputs = 0;
    std::size_t snapshots = 0;
    solver::StateField last_seen = initial;
    auto observer = [&](const solver::StateField& s) {
      series.push_back(diagnostics::totals(s, cfg.material));
      distances.emplace_back(s.t, diagnostics::equilibrium_distance(s));
      const bool snap = outputs == 0 ||
                        (cfg.snapshot_every > 0 && outputs % cfg.snapshot_every == 0);
      if (snap) snapshot::write_file((snaps / snapshot_name(snapshots++)).string(), s);
      last_seen = s;
      ++outputs;
    };

    auto write_series = [&] {
      std::ofstream csv(dir / "diagnostics.csv");
      diagnostics::write_csv(csv, series);
    };

    solver::StateField last_good;
    solver::StateField final_state;
    try {
      final_state = solver::run(initial, cfg.material, cfg.step, observer, &last_good);
    } catch (const Error& e) {
      write_series();
      snapshot::write_file((snaps / snapshot_name(snapshots++)).string(), last_good);
      std::ostringstream rec;
      const double t = dynamic_cast<const SolverAbort*>(&e)
                           ? dynamic_cast<const SolverAbort&>(e).time()
                           : last_good.t;
      rec << "status aborted\n"
          << "t_abort " << g17(t) << '\n'
          << "last_good_t " << g17(last_good.t) << '\n'
          << "reason " << e.what() << '\n';
      write_text(dir / "abort.txt", rec.str());
      throw;
    }
    if (last_seen.t != final_state.t || outputs == 0) observer(final_state);
    if (cfg.snapshot_every == 0 || (outputs - 1) % cfg.snapshot_every != 0) {
      snapshot::write_file((snaps / snapshot_name(snapshots++)).string(), final_state);
    }
    write_series();

    // Re-read the CSV so the audit depends on exactly what was written.
    std::ifstream csv_in(dir / "diagnostics.csv");
    const auto written = diagnostics::read_csv(csv_in);

    std::ostringstream s;
    s << "status completed\n"
      << "t_final " << g17(final_state.t) << '\n'
      << "outputs " << outputs << '\n'
      << "snapshots " << snapshots << '\n'
      << "initial_equilibrium_distance " << g17(distances.front().second) << '\n'
      << "final_equilibrium_distance " << g17(distances.back().second) << '\n';
    if (distances.front().second == 0.0) s << "note already at equilibrium\n";
    try {
      const auto fit = diagnostics::fit_decay_rate(distances);
      s << "decay_rate " << g17(fit.rate) << " samples " << fit.samples << " residual "
        << g17(fit.residual) << '\n';
    } catch (const FitError& e) {
      s << "decay_rate none (" << e.what() << ")\n";
    }
    if (written.size() >= 2) {
      const auto d = diagnostics::energy_identity_defect(written);
      s << "max_energy_defect " << g17(d.max_relative_energy_defect) << '\n'
        << "min_entropy_increment "
        << g17(*std::min_element(d.entropy_increments.begin(), d.entropy_increments.end()))
        << '\n';
    } else {
      s << "max_energy_defect 0\nmin_entropy_increment 0\n";
    }
    s << "--- audit ---\n" << audit_block(written);
    write_text(dir / "summary.txt", s.str());
    out << s.str();
    return kOk;
  });
}

int check(const std::string& config_path, bool strict, const std::optional<std::string>& output_dir,
          std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const config::RunConfig cfg = config::parse_file(config_path);
    const auto rep = material::check_consistency(cfg.material.free_energy, cfg.material.params,
                                                 cfg.check_domain);
    const fs::path dir = output_dir ? *output_dir : cfg.output_directory;
    {
      DirectoryLock lock(dir);
      write_text(dir / "consistency.txt", rep.table());
      write_text(dir / "consistency.csv", rep.csv());
    }
    out << rep.table();
    const bool ok = strict ? rep.stable() : rep.consistent();
    if (!ok) {
      err << (strict ? "strict" : "non-strict") << " check failed:";
      for (const auto& id : rep.failures()) {
        const auto* r = rep.find(id);
        const bool relevant =
            strict ? r->set == material::InequalitySet::stable
                   : r->set != material::InequalitySet::stable;
        if (relevant) err << ' ' << id;
      }
      err << '\n';
      return kCheckFailure;
    }
    return kOk;
  });
}

int analyze_symbol(const std::string& config_path, std::optional<std::size_t> samples,
                   std::optional<int> dim, const std::optional<std::string>& output_dir,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    config::RunConfig cfg = config::parse_file(config_path);
    if (samples) {
      if (*samples < 1) throw ConfigError("--samples", "must be at least 1");
      cfg.sweep.samples = *samples;
    }
    if (dim) {
      if (*dim != 2 && *dim != 3) throw ConfigError("--dim", "must be 2 or 3");
      cfg.sweep.dim = *dim;
    }
    cfg.sweep.threads = worker_count();
    const auto rep = symbol::run_sweep(cfg.material, cfg.sweep);
    const fs::path dir = output_dir ? *output_dir : cfg.output_directory;
    {
      DirectoryLock lock(dir);
      write_text(dir / "symbol_sweep.csv", rep.csv());
    }

    const grid::Grid g = cfg.grid.value_or(grid::Grid{32, 32, std::numbers::pi, std::numbers::pi});
    const double theta_star = cfg.scenario ? cfg.scenario->theta_star : 1.0;
    out << "samples " << rep.rows.size() << " dim " << rep.dim << " failures " << rep.failures()
        << '\n';
    if (g.nx <= 64 && g.ny <= 64) {
      const auto sp = symbol::equilibrium_spectrum(cfg.material, theta_star, g.lx, g.ly, g.nx, g.ny);
      out << "equilibrium spectrum at theta*=" << theta_star << " on " << g.nx << "x" << g.ny
          << ":\n"
          << sp.table();
    } else {
      out << "equilibrium spectrum skipped (grid finer than 64 cells per axis)\n";
    }
    if (rep.failures() > 0) {
      std::size_t shown = 0;
      for (const auto& r : rep.rows) {
        if (r.verdict == "pass") continue;
        err << "sample " << r.sample_id << " " << r.verdict << ": " << r.detail << '\n';
        if (++shown == 10) break;
      }
      return kCheckFailure;
    }
    return kOk;
  });
}

int report(const std::string& run_dir, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const fs::path csv = fs::path(run_dir) / "diagnostics.csv";
    std::ifstream in(csv);
    if (!in) throw PreconditionError(csv.string() + ": cannot open");
    std::vector<diagnostics::DiagnosticsRecord> series;
    try {
      series = diagnostics::read_csv(in);
    } catch (const PreconditionError& e) {
      throw PreconditionError(csv.string() + ": " + e.what());
    }
    out << "--- audit ---\n" << audit_block(series);
    return kOk;
  });
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Non-isothermal nematic flow simulator and verification toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::string> output;

  auto* sim = app.add_subcommand("simulate", "run the time integrator");
  sim->add_option("config", config_path, "run configuration (INI)")->required();
  sim->add_option("--output", output, "output directory (overrides output.directory)");

  bool strict = false;
  auto* chk = app.add_subcommand("check", "certify the consistency inequalities");
  chk->add_option("config", config_path, "run configuration (INI)")->required();
  chk->add_flag("--strict", strict, "use the strict stability set");
  chk->add_option("--output", output, "output directory (overrides output.directory)");

  std::optional<std::size_t> samples;
  std::optional<int> dim;
  auto* sym = app.add_subcommand("analyze-symbol", "symbol sweeps and equilibrium spectrum");
  sym->add_option("config", config_path, "run configuration (INI)")->required();
  sym->add_option("--samples", samples, "number of sweep samples");
  sym->add_option("--dim", dim, "spatial dimension of the sweep (2 or 3)");
  sym->add_option("--output", output, "output directory (overrides output.directory)");

  std::string run_dir;
  auto* rep = app.add_subcommand("report", "audit a run directory from its diagnostics CSV");
  rep->add_option("dir", run_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationError;
  }

  if (*sim) return simulate(config_path, output, std::cout, std::cerr);
  if (*chk) return check(config_path, strict, output, std::cout, std::cerr);
  if (*sym) return analyze_symbol(config_path, samples, dim, output, std::cout, std::cerr);
  return report(run_dir, std::cout, std::cerr);
}

}  // namespace nematoflow::cli
