#include "evotest/adversary.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "evotest/errors.hpp"

namespace evotest {

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::kKilled: return "killed";
    case Verdict::kSurvived: return "survived";
    case Verdict::kError: return "error";
    case Verdict::kTimeout: return "timeout";
  }
  return "error";
}

int MutationReport::killed() const noexcept {
  return static_cast<int>(std::count_if(executed.begin(), executed.end(), [](const auto& r) {
    return r.verdict == Verdict::kKilled;
  }));
}

int MutationReport::survived() const noexcept {
  return static_cast<int>(std::count_if(executed.begin(), executed.end(), [](const auto& r) {
    return r.verdict == Verdict::kSurvived;
  }));
}

void AdversaryConfig::validate() const {
  if (pool_target < 0) throw Error(ErrorKind::kConfig, "adversary.pool_target must be >= 0");
  if (sample_size < 0) throw Error(ErrorKind::kConfig, "adversary.sample_size must be >= 0");
}

Json to_json(const AdversaryConfig& cfg) {
  return {{"pool_target", cfg.pool_target}, {"sample_size", cfg.sample_size}, {"seed", cfg.seed}};
}

AdversaryConfig adversary_config_from_json(const Json& j) {
  AdversaryConfig cfg;
  cfg.pool_target = j.value("pool_target", cfg.pool_target);
  cfg.sample_size = j.value("sample_size", cfg.sample_size);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

Json to_json(const MutationReport& report) {
  Json executed = Json::array();
  for (const auto& r : report.executed) {
    Json e = {{"mutant", to_json(r.mutant)}, {"verdict", to_string(r.verdict)}};
    if (!r.detail.empty()) e["detail"] = r.detail;
    executed.push_back(std::move(e));
  }
  Json out = {{"generated_count", report.generated_count},
              {"executed", std::move(executed)},
              {"killed", report.killed()},
              {"survived", report.survived()},
              {"mu", report.mu},
              {"degenerate", report.degenerate},
              {"unavailable", report.unavailable}};
  if (!report.note.empty()) out["note"] = report.note;
  return out;
}

std::uint64_t stage_seed(std::uint64_t run_seed, int stage) noexcept {
  std::uint64_t z = run_seed + static_cast<std::uint64_t>(stage) + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

// Unbiased draw in [0, bound). Written out because the standard
// distributions are not reproducible across library implementations.
std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= limit) return x % bound;
  }
}

bool comparable(OutcomeStatus s) {
  return s == OutcomeStatus::kReturned || s == OutcomeStatus::kRaised;
}

}  // namespace

std::vector<MutantDescriptor> sample_mutants(std::span<const MutantDescriptor> pool, int m,
                                             std::uint64_t seed) {
  if (m <= 0 || pool.empty()) return {};
  const auto n = pool.size();
  const auto k = std::min(static_cast<std::size_t>(m), n);
  if (k == n) return {pool.begin(), pool.end()};

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + below(rng, n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<MutantDescriptor> out;
  out.reserve(k);
  for (auto i : idx) out.push_back(pool[i]);
  return out;
}

Verdict classify(std::span<const CaseOutcome> baseline, std::span<const CaseOutcome> mutant) {
  const auto n = std::min(baseline.size(), mutant.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = baseline[i];
    const auto& m = mutant[i];
    if (!comparable(b.status) || !comparable(m.status)) continue;
    if (b.status != m.status) return Verdict::kKilled;
    if (b.status == OutcomeStatus::kReturned && b.value_digest != m.value_digest) {
      return Verdict::kKilled;
    }
    if (b.status == OutcomeStatus::kRaised && b.exception_type != m.exception_type) {
      return Verdict::kKilled;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mutant[i].status == OutcomeStatus::kTimeout &&
        baseline[i].status != OutcomeStatus::kTimeout) {
      return Verdict::kTimeout;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mutant[i].status == OutcomeStatus::kCrashed &&
        baseline[i].status != OutcomeStatus::kCrashed) {
      return Verdict::kError;
    }
  }
  if (baseline.size() != mutant.size()) return Verdict::kError;
  return Verdict::kSurvived;
}

double mutation_score(int killed, int survived, bool* degenerate) noexcept {
  const int denom = killed + survived;
  if (degenerate) *degenerate = denom <= 0;
  if (denom <= 0) return 0.0;
  return static_cast<double>(killed) / static_cast<double>(denom);
}

MutationReport evaluate_robustness(Executor& executor, const SourceArtifact& source,
                                   std::span<const EdgeCase> cases,
                                   std::span<const CaseOutcome> baseline,
                                   const AdversaryConfig& cfg, int stage) {
  MutationReport report;
  const auto seed = stage_seed(cfg.seed, stage);
  std::vector<MutantDescriptor> pool;
  try {
    pool = executor.generate_mutants(source, cfg.pool_target, seed);
  } catch (const ExecutorError& e) {
    if (e.is_transport()) throw;
    report.unavailable = true;
    report.degenerate = true;
    report.note = std::string("mutation unavailable: ") + e.what();
    return report;
  }
  report.generated_count = static_cast<int>(pool.size());

  for (auto& mutant : sample_mutants(pool, cfg.sample_size, seed)) {
    MutantResult result{std::move(mutant), Verdict::kSurvived, {}};
    try {
      auto outcomes = executor.run_mutant(source, result.mutant.id, cases);
      result.verdict = classify(baseline, outcomes);
    } catch (const ExecutorError& e) {
      if (e.is_transport()) throw;
      result.verdict = Verdict::kError;
      result.detail = e.what();
    }
    report.executed.push_back(std::move(result));
  }
  report.mu = mutation_score(report.killed(), report.survived(), &report.degenerate);
  if (report.generated_count == 0) report.note = "empty mutant pool";
  return report;
}

}  // namespace evotest
