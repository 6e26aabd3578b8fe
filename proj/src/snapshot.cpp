#include "nematoflow/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include "nematoflow/error.hpp"

namespace nematoflow::snapshot {

namespace {

constexpr const char* kMagic = "NEMATOFLOW-SNAPSHOT 1";

template <class State, class F = std::conditional_t<std::is_const_v<State>, const grid::Field,
                                                    grid::Field>>
std::vector<std::pair<std::string, F*>> fields(State& s) {
  return {{"theta", &s.theta}, {"d1", &s.d1}, {"d2", &s.d2},
          {"pi", &s.pi},       {"ux", &s.u.ux}, {"uy", &s.u.uy}};
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write(std::ostream& out, const solver::StateField& s) {
  out << kMagic << '\n'
      << "t " << g17(s.t) << '\n'
      << "nx " << s.grid.nx << " ny " << s.grid.ny << '\n'
      << "lx " << g17(s.grid.lx) << " ly " << g17(s.grid.ly) << '\n'
      << "d_drift " << g17(s.d_drift) << '\n';
  for (const auto& [name, f] : fields(s)) {
    out << "field " << name << ' ' << f->width() << ' ' << f->height() << '\n';
  }
  out << "end_header\n";
  for (const auto& [name, f] : fields(s)) {
    for (double v : f->values()) out << g17(v) << '\n';
  }
}

void write_file(const std::string& path, const solver::StateField& s) {
  std::ofstream out(path);
  if (!out) throw PreconditionError(path + ": cannot open for writing");
  write(out, s);
  if (!out) throw PreconditionError(path + ": write failed");
}

solver::StateField read(std::istream& in) {
  auto fail = [](const std::string& what) { throw PreconditionError("snapshot: " + what); };
  std::string line;
  if (!std::getline(in, line) || line != kMagic) fail("missing header '" + std::string(kMagic) + "'");

  solver::StateField s;
  std::string key;
  auto expect = [&](const char* name) {
    if (!(in >> key) || key != name) fail(std::string("expected '") + name + "'");
  };
  expect("t");
  in >> s.t;
  expect("nx");
  in >> s.grid.nx;
  expect("ny");
  in >> s.grid.ny;
  expect("lx");
  in >> s.grid.lx;
  expect("ly");
  in >> s.grid.ly;
  expect("d_drift");
  in >> s.d_drift;
  if (!in) fail("bad header value");
  s.grid.validate();
  s.theta = s.d1 = s.d2 = s.pi = grid::cell_field(s.grid);
  s.u = grid::Velocity::zeros(s.grid);

  const auto expected = fields(s);
  for (const auto& [name, f] : expected) {
    std::string n;
    int w = 0, h = 0;
    expect("field");
    in >> n >> w >> h;
    if (n != name || w != f->width() || h != f->height()) {
      fail("field '" + n + "' does not match the expected layout of '" + name + "'");
    }
  }
  expect("end_header");
  for (const auto& [name, f] : expected) {
    for (double& v : f->values()) {
      if (!(in >> v)) fail("truncated data in field '" + name + "'");
    }
  }
  return s;
}

solver::StateField read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError(path + ": cannot open");
  try {
    return read(in);
  } catch (const PreconditionError& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

}  // namespace nematoflow::snapshot
