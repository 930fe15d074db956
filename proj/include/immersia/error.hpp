#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace immersia {

// Base for every error the library raises. The CLI maps the subclasses onto
// exit codes: input/config problems -> 2, generation/runtime faults -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Bad or inconsistent configuration, including schema problems and channels
// a submetric asks for but the trace does not carry.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IngestionError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class DegenerateGeometryError : public Error {
 public:
  DegenerateGeometryError(const std::string& what, std::size_t sample_index)
      : Error(what + " (sample " + std::to_string(sample_index) + ")"),
        sample_index_(sample_index) {}

  std::size_t sample_index() const noexcept { return sample_index_; }

 private:
  std::size_t sample_index_;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

class SimulationFault : public Error {
 public:
  SimulationFault(const std::string& what, std::size_t step_index)
      : Error(what + " (step " + std::to_string(step_index) + ")"),
        step_index_(step_index) {}

  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace immersia
