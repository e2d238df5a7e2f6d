#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnnlinz {

// Root of every error the library raises. The CLI maps the subclasses onto
// exit codes: ConfigError -> 2, NumericalError and its children -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string path, std::string field, const std::string& what)
      : Error(path + ": " + field + ": " + what), path_(std::move(path)), field_(std::move(field)) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string path_;
  std::string field_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite argument to a pointwise function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Argument outside the open range of g, e.g. |r| >= 1 for tanh.
class RangeError : public Error {
 public:
  RangeError(std::size_t index, const std::string& what) : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ZeroProbe : public Error {
 public:
  ZeroProbe() : Error("probe input u is the zero vector") {}
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(std::size_t step, const std::string& what) : NumericalError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class NonConvergence : public NumericalError {
 public:
  NonConvergence(double best_residual, int iterations);
  double best_residual() const noexcept { return best_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  int iterations_;
};

class SingularJacobian : public NumericalError {
 public:
  SingularJacobian(double condition_estimate, int iteration);
  double condition_estimate() const noexcept { return condition_; }

 private:
  double condition_;
};

class NearZeroGain : public NumericalError {
 public:
  NearZeroGain(std::size_t index, double gain);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace rnnlinz
