#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "nematoflow/config.hpp"
#include "nematoflow/error.hpp"
#include "nematoflow/snapshot.hpp"

using namespace nematoflow;

namespace {

std::string key_path_of(const std::string& text) {
  try {
    config::parse_string(text);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<no error>";
}

const char* kFull = R"(
[free_energy]
name = quadratic
k2 = 0.2

[material]
rho = 1.5
mu_s = linear 0.2 0.05 0
gamma = power 0.5 1

[grid]
nx = 24
ny = 16
lx = 2
ly = 1

[time]
dt = 0.001
t_end = 0.5
output_every = 5

[scenario]
name = random_smooth
amplitude = 0.1
seed = 9

[mode]
type = isothermal

[toggles]
renormalize_director = false

[output]
directory = out_here
snapshot_every = 3

[check]
rho_min = 0.5
rho_max = 2

[symbol]
samples = 50
dim = 3
)";

}  // namespace

TEST_CASE("a full configuration parses into the run description") {
  const auto c = config::parse_string(kFull);
  CHECK(c.material.free_energy.name() == "quadratic");
  CHECK(material::dtau_lambda(c.material.free_energy, {1.0, 0.0, 1.0}) == doctest::Approx(0.2));
  CHECK(c.material.params.rho == 1.5);
  CHECK(c.material.params.mu_s(2.0, 0.0) == doctest::Approx(0.3));
  CHECK(c.material.params.gamma(4.0, 0.0) == doctest::Approx(2.0));
  REQUIRE(c.grid);
  CHECK(c.grid->nx == 24);
  CHECK(c.grid->ly == 1.0);
  CHECK(c.step.dt == 0.001);
  CHECK(c.step.output_every == 5);
  CHECK(c.step.isothermal);
  CHECK_FALSE(c.step.renormalize_director);
  REQUIRE(c.scenario);
  CHECK(c.scenario->seed == 9);
  CHECK(c.output_directory == "out_here");
  CHECK(c.snapshot_every == 3);
  REQUIRE(c.check_domain.rho_range);
  CHECK(c.check_domain.rho_range->second == 2.0);
  CHECK(c.sweep.samples == 50);
  CHECK(c.sweep.dim == 3);
  CHECK_NOTHROW(c.require_simulation());
}

TEST_CASE("configuration errors name the offending key") {
  CHECK(key_path_of("[nope]\na = 1\n") == "nope");
  CHECK(key_path_of("[grid]\nnx = 4\nny = 4\nlx = 1\nly = 1\nnz = 3\n") == "grid.nz");
  CHECK(key_path_of("[grid]\nnx = 4.5\nny = 4\nlx = 1\nly = 1\n") == "grid.nx");
  CHECK(key_path_of("[grid]\nnx = 4\nny = 4\nlx = -1\nly = 1\n") == "grid.lx");
  CHECK(key_path_of("[grid]\nnx = 4\nlx = 1\nly = 1\n") == "grid.ny");
  CHECK(key_path_of("[time]\ndt = 0\nt_end = 1\n") == "time.dt");
  CHECK(key_path_of("[time]\ndt = 1e-3\nt_end = abc\n") == "time.t_end");
  CHECK(key_path_of("[material]\nmu_s = cubic 1\n") == "material.mu_s");
  CHECK(key_path_of("[material]\nrho = 0\n") == "material.rho");
  CHECK(key_path_of("[free_energy]\nname = ideal_linear\nk2 = 1\n") == "free_energy.k2");
  CHECK(key_path_of("[free_energy]\nname = vdw\n") == "free_energy.name");
  CHECK(key_path_of("[scenario]\nname = vortex\n") == "scenario.name");
  CHECK(key_path_of("[mode]\ntype = adiabatic\n") == "mode.type");
  CHECK(key_path_of("[toggles]\nfreeze_velocity = maybe\n") == "toggles.freeze_velocity");
  CHECK(key_path_of("[check]\nrho_min = 1\n") == "check.rho_max");
  CHECK(key_path_of("[symbol]\ndim = 4\n") == "symbol.dim");
  CHECK(key_path_of("not an ini [\n") != "<no error>");

  const auto partial = config::parse_string("[grid]\nnx = 4\nny = 4\nlx = 1\nly = 1\n");
  try {
    partial.require_simulation();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key_path() == "time.dt");
  }
  CHECK_THROWS_AS(config::parse_file("/definitely/not/here.ini"), ConfigError);
}

TEST_CASE("snapshot round trip is bit exact") {
  solver::Scenario sc;
  sc.name = "random_smooth";
  sc.amplitude = 0.3;
  auto s = solver::initialize({9, 7, 1.1, 0.7}, sc);
  s.t = 0.123456789012345678;
  s.d_drift = 3.3e-17;
  for (std::size_t k = 0; k < s.pi.size(); ++k) s.pi[k] = 1.0 / (k + 3.0);
  std::stringstream io;
  snapshot::write(io, s);
  const auto back = snapshot::read(io);
  CHECK(back.t == s.t);
  CHECK(back.d_drift == s.d_drift);
  CHECK(back.grid.nx == 9);
  CHECK(back.grid.ly == 0.7);
  CHECK(back.theta.values() == s.theta.values());
  CHECK(back.d1.values() == s.d1.values());
  CHECK(back.d2.values() == s.d2.values());
  CHECK(back.pi.values() == s.pi.values());
  CHECK(back.u.ux.values() == s.u.ux.values());
  CHECK(back.u.uy.values() == s.u.uy.values());

  const auto path = (std::filesystem::temp_directory_path() / "nematoflow_snapshot_test.txt").string();
  snapshot::write_file(path, s);
  CHECK(snapshot::read_file(path).theta.values() == s.theta.values());
  std::remove(path.c_str());
}

TEST_CASE("malformed snapshots are rejected") {
  solver::Scenario sc;
  const auto s = solver::initialize({4, 4, 1.0, 1.0}, sc);
  std::stringstream io;
  snapshot::write(io, s);
  const std::string good = io.str();

  std::istringstream wrong_magic("NOT-A-SNAPSHOT\n");
  CHECK_THROWS_AS(snapshot::read(wrong_magic), PreconditionError);
  std::istringstream truncated(good.substr(0, good.size() / 2));
  CHECK_THROWS_AS(snapshot::read(truncated), PreconditionError);
  std::string bad_shape = good;
  bad_shape.replace(bad_shape.find("field ux 5 4"), 12, "field ux 4 4");
  std::istringstream shape(bad_shape);
  CHECK_THROWS_AS(snapshot::read(shape), PreconditionError);
  CHECK_THROWS_AS(snapshot::read_file("/definitely/not/here.txt"), PreconditionError);
}
