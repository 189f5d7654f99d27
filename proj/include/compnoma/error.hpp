#pragma once

#include <stdexcept>
#include <string>

namespace compnoma {

// Invalid scenario parameters or malformed input. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A value outside the mathematical domain of a model formula (e.g. a
// non-positive estimated channel variance). The CLI maps this to exit code 3.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace compnoma
