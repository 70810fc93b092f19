#include "evotest/archive.hpp"

#include <algorithm>
#include <map>

namespace evotest {

EliteArchive::EliteArchive(std::size_t capacity) : capacity_(capacity) {}

double EliteArchive::floor() const noexcept {
  return entries_.empty() ? 0.0 : entries_.back().reward;
}

Json EliteArchive::to_json() const {
  Json out = Json::array();
  for (const auto& e : entries_) out.push_back(evotest::to_json(e));
  return out;
}

bool ranks_before(const ScoredCase& a, const ScoredCase& b) {
  if (a.reward != b.reward) return a.reward > b.reward;
  if (a.stage != b.stage) return a.stage < b.stage;
  return a.edge_case.canonical() < b.edge_case.canonical();
}

EliteArchive update_archive(const EliteArchive& archive, std::span<const ScoredCase> batch) {
  // Best copy per canonical key; ranks_before decides between duplicates.
  std::map<std::string, ScoredCase> best;
  auto offer = [&](const ScoredCase& candidate) {
    auto key = candidate.edge_case.canonical();
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(std::move(key), candidate);
    } else if (ranks_before(candidate, it->second)) {
      it->second = candidate;
    }
  };
  for (const auto& e : archive.entries_) offer(e);
  for (const auto& e : batch) offer(e);

  EliteArchive out(archive.capacity_);
  out.entries_.reserve(best.size());
  for (auto& [_, v] : best) out.entries_.push_back(std::move(v));
  std::sort(out.entries_.begin(), out.entries_.end(), ranks_before);
  if (out.entries_.size() > out.capacity_) out.entries_.resize(out.capacity_);
  return out;
}

Json to_json(const ScoredCase& scored) {
  Json j = to_json(scored.edge_case);
  j["reward"] = scored.reward;
  j["stage"] = scored.stage;
  if (scored.observed) j["observed"] = to_json(*scored.observed);
  return j;
}

}  // namespace evotest
