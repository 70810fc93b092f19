#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "evotest/edge_case.hpp"

namespace evotest {

struct StopConfig {
  double tau = 2.5;    // cumulative normalized reward threshold
  double delta = 0.05; // plateau tolerance
  int window = 3;      // plateau window p
  int max_stages = 12; // hard cap on stages

  void validate() const;
  friend bool operator==(const StopConfig&, const StopConfig&) = default;
};

enum class StopReason { kThreshold, kPlateau, kMaxStages, kAborted };

const char* to_string(StopReason reason) noexcept;
StopReason stop_reason_from_string(std::string_view text);

/// Which of the two stopping conditions fires for the first `completed`
/// rewards, threshold taking precedence. The plateau test is skipped while
/// fewer than `window` stages have completed.
std::optional<StopReason> stop_condition(std::span<const double> rewards, int completed,
                                         const StopConfig& cfg);

bool should_stop(std::span<const double> rewards, int completed, const StopConfig& cfg);

Json to_json(const StopConfig& cfg);
StopConfig stop_config_from_json(const Json& j);

}  // namespace evotest
