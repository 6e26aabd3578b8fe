#pragma once

#include <iosfwd>
#include <string>

#include "nematoflow/solver.hpp"

// Text snapshot of a solver state:
//
//   NEMATOFLOW-SNAPSHOT 1
//   t <time>
//   nx <cells> ny <cells>
//   lx <length> ly <length>
//   d_drift <value>
//   field <name> <width> <height>     (one line per field, in file order)
//   end_header
//   <values of each field, row-major, one per line, %.17g>
//
// Fields: theta, d1, d2, pi (cells), ux ((nx+1) x ny), uy (nx x (ny+1)).
namespace nematoflow::snapshot {

void write(std::ostream& out, const solver::StateField& s);
void write_file(const std::string& path, const solver::StateField& s);
/// Throws PreconditionError naming the problem on malformed input.
solver::StateField read(std::istream& in);
solver::StateField read_file(const std::string& path);

}  // namespace nematoflow::snapshot
