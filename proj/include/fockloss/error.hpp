// fockloss/error.hpp
//
// Exception types shared by every module. A ContractViolation means an input
// or intermediate result broke a numerical invariant (the CLI maps it to exit
// code 3). A ConfigError means user-supplied configuration was rejected before
// any computation started (exit code 2).

#pragma once

#include <stdexcept>
#include <string>

namespace fockloss {

class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace fockloss
