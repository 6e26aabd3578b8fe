#pragma once

#include <stdexcept>
#include <string>

namespace nematoflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constitutive rule produced a non-finite or inadmissible value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its declared domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration; the message always starts with the key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

/// A linear solve failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The time integrator refused to continue (CFL, temperature floor, ...).
class SolverAbort : public Error {
 public:
  SolverAbort(double t, const std::string& what) : Error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// A decay-rate fit had too few usable samples.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace nematoflow
