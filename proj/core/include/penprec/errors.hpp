#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace penprec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures: the CLI maps these to exit status 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& what, int sweeps, double last_change)
      : NumericalError(what), sweeps_(sweeps), last_change_(last_change) {}

  int sweeps() const noexcept { return sweeps_; }
  double last_change() const noexcept { return last_change_; }

 private:
  int sweeps_;
  double last_change_;
};

class DegenerateInput : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Input and configuration errors: the CLI maps these to exit status 1.
class InputError : public Error {
 public:
  using Error::Error;
};

class FoldTooSmall : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class TooFewRows : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace penprec
