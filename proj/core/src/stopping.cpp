#include "evotest/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evotest/errors.hpp"

namespace evotest {

void StopConfig::validate() const {
  if (!(tau >= 0.0) || std::isnan(tau)) {
    throw Error(ErrorKind::kConfig, "stop.tau must be nonnegative, got " + std::to_string(tau));
  }
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorKind::kConfig,
                "stop.delta must be nonnegative, got " + std::to_string(delta));
  }
  if (window < 1) {
    throw Error(ErrorKind::kConfig, "stop.window must be >= 1, got " + std::to_string(window));
  }
  if (max_stages < 1) {
    throw Error(ErrorKind::kConfig,
                "stop.max_stages must be >= 1, got " + std::to_string(max_stages));
  }
}

const char* to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::kThreshold: return "threshold";
    case StopReason::kPlateau: return "plateau";
    case StopReason::kMaxStages: return "max_stages";
    case StopReason::kAborted: return "aborted";
  }
  return "aborted";
}

StopReason stop_reason_from_string(std::string_view text) {
  for (auto r : {StopReason::kThreshold, StopReason::kPlateau, StopReason::kMaxStages,
                 StopReason::kAborted}) {
    if (text == to_string(r)) return r;
  }
  throw Error(ErrorKind::kDomain, "unknown stop reason: " + std::string(text));
}

std::optional<StopReason> stop_condition(std::span<const double> rewards, int completed,
                                         const StopConfig& cfg) {
  if (completed < 0 || static_cast<std::size_t>(completed) > rewards.size()) {
    throw Error(ErrorKind::kPrecondition, "completed stage count exceeds reward history");
  }
  auto done = rewards.first(static_cast<std::size_t>(completed));
  const double total = std::accumulate(done.begin(), done.end(), 0.0);
  if (total >= cfg.tau) return StopReason::kThreshold;
  if (completed < cfg.window) return std::nullopt;
  auto recent = done.last(static_cast<std::size_t>(cfg.window));
  auto [lo, hi] = std::minmax_element(recent.begin(), recent.end());
  if (*hi - *lo <= cfg.delta) return StopReason::kPlateau;
  return std::nullopt;
}

bool should_stop(std::span<const double> rewards, int completed, const StopConfig& cfg) {
  return stop_condition(rewards, completed, cfg).has_value();
}

Json to_json(const StopConfig& cfg) {
  return {{"tau", cfg.tau}, {"delta", cfg.delta}, {"window", cfg.window},
          {"max_stages", cfg.max_stages}};
}

StopConfig stop_config_from_json(const Json& j) {
  StopConfig cfg;
  cfg.tau = j.value("tau", cfg.tau);
  cfg.delta = j.value("delta", cfg.delta);
  cfg.window = j.value("window", cfg.window);
  cfg.max_stages = j.value("max_stages", cfg.max_stages);
  return cfg;
}

}  // namespace evotest
