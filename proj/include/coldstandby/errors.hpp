#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coldstandby {

/// Argument outside the mathematical domain of a function (quantile at 1 for
/// unbounded support, log utility at 0, copula argument outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation grid unsuitable for the requested computation.
class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a dimensional or structural precondition.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Conditional inversion failed for one draw of the copula sampler.
class SamplingError : public std::runtime_error {
 public:
  SamplingError(const std::string& what, std::size_t draw)
      : std::runtime_error(what + " (draw " + std::to_string(draw) + ")"), draw_(draw) {}

  std::size_t draw() const noexcept { return draw_; }

 private:
  std::size_t draw_;
};

/// Exhaustive enumeration would exceed its outcome budget.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration document; `path()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace coldstandby
