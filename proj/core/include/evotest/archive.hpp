#pragma once

#include <optional>
#include <span>
#include <vector>

#include "evotest/edge_case.hpp"
#include "evotest/executor.hpp"

namespace evotest {

/// An edge case with the reward of the stage that produced it.
struct ScoredCase {
  EdgeCase edge_case;
  double reward = 0.0;
  int stage = 0;
  /// Baseline behaviour observed when the case ran; forwarded to synthesis.
  std::optional<CaseOutcome> observed;

  friend bool operator==(const ScoredCase&, const ScoredCase&) = default;
};

/// Top-K elite archive. Entries are ordered by reward (descending), then by
/// stage of origin (older first), then by canonical serialization.
class EliteArchive {
 public:
  explicit EliteArchive(std::size_t capacity = 20);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<ScoredCase>& entries() const noexcept { return entries_; }
  /// Lowest retained reward; 0 for an empty archive.
  double floor() const noexcept;

  Json to_json() const;

  friend bool operator==(const EliteArchive&, const EliteArchive&) = default;

  friend EliteArchive update_archive(const EliteArchive& archive,
                                     std::span<const ScoredCase> batch);

 private:
  std::size_t capacity_;
  std::vector<ScoredCase> entries_;
};

/// Keeps the K best over archive ∪ batch. Identical cases (same function and
/// argument map) collapse to the higher-reward copy, older on ties.
EliteArchive update_archive(const EliteArchive& archive, std::span<const ScoredCase> batch);

/// Strict weak order used by the archive.
bool ranks_before(const ScoredCase& a, const ScoredCase& b);

Json to_json(const ScoredCase& scored);

}  // namespace evotest
