#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or state that violates an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver or quadrature that failed to meet its tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history = {})
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cw
