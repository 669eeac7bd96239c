#pragma once

#include <stdexcept>
#include <string>

namespace matchmarket {

/// Invalid configuration or arguments: bad population sizes, malformed
/// distribution parameters, unusable experiment configs. The CLI maps this
/// to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with external data files (real-world series, replay inputs).
/// The CLI maps this to exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency violation: plan/state mismatch, broken population
/// invariants, degenerate or under-determined moment systems.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace matchmarket
