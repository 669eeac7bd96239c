#pragma once

#include <limits>
#include <optional>
#include <vector>

namespace matchmarket {

enum class MarriageKind { None, FixedThreshold, HeterogeneousThreshold, AdaptiveProposal };

/// Marriage decision rule. FixedThreshold marries a couple once both
/// utilities strictly exceed lambda. HeterogeneousThreshold draws per-agent
/// thresholds Lambda_k ~ Gaussian(lambda, sigma_lambda) once at t = 0
/// (FixedThreshold is the sigma_lambda = 0 case). AdaptiveProposal uses each
/// agent's running mean + population standard deviation of its own utility
/// history; with fewer than 2 history points the rule never fires.
struct MarriagePolicy {
  MarriageKind kind = MarriageKind::None;
  double lambda = std::numeric_limits<double>::infinity();
  double sigma_lambda = 0.0;
  std::optional<std::vector<double>> per_agent_lambda;

  static MarriagePolicy none() { return {}; }
  static MarriagePolicy fixed(double lambda) {
    return {MarriageKind::FixedThreshold, lambda, 0.0, std::nullopt};
  }
  static MarriagePolicy heterogeneous(double lambda, double sigma_lambda) {
    return {MarriageKind::HeterogeneousThreshold, lambda, sigma_lambda, std::nullopt};
  }
  static MarriagePolicy adaptive() {
    return {MarriageKind::AdaptiveProposal, 0.0, 0.0, std::nullopt};
  }
};

}  // namespace matchmarket
