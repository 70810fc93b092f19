#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/edge_case.hpp"
#include "evotest/executor.hpp"
#include "evotest/gateway.hpp"
#include "evotest/state.hpp"

namespace evotest {

struct ProposalBatch {
  int stage = 0;
  std::vector<EdgeCase> cases;
  ProposalOrigin origin = ProposalOrigin::kColdStart;
  /// Verbatim model text of the attempt that produced the cases.
  std::optional<std::string> raw_response;
  int attempts = 0;
};

struct ActorConfig {
  int target_count = 10;
  int retries = 2;
  bool cot = false;
  /// 0 selects default_cold_start_budget().
  int cold_start_budget = 0;
  double temperature = 0.7;
  int max_output_tokens = 4096;
  int feedback_limit = 4000;

  void validate() const;
  friend bool operator==(const ActorConfig&, const ActorConfig&) = default;
};

Json to_json(const ActorConfig& cfg);
ActorConfig actor_config_from_json(const Json& j);

// --- cold start -----------------------------------------------------------------

enum class SeedCategory { kNumeric, kString, kList, kDict, kSpecial, kExceptionTrigger };

const char* to_string(SeedCategory category) noexcept;

struct SeedValue {
  SeedCategory category;
  Json value;
};

/// Rule catalog in emission order: the categories interleaved
/// N N S L N D P X until every list is drained, duplicates removed.
/// Non-finite floats are encoded as the strings "NaN", "Infinity" and
/// "-Infinity"; integers beyond 64 bits as decimal strings.
const std::vector<SeedValue>& seed_catalog();

/// min(5 * n, 60), raised to n when there are more than 60 functions.
int default_cold_start_budget(std::size_t function_count);

/// Deterministic stage-1 batch. Each function gets a stream that starts with
/// every parameter at the first catalog value, then varies one parameter at a
/// time through the catalog; streams are drained round-robin until `budget`
/// cases exist or every stream is empty. budget 0 selects the default.
/// Throws kNoTargets for an empty signature list and kPrecondition when
/// budget is below the number of functions.
ProposalBatch cold_start(std::span<const FunctionSignature> signatures, int budget = 0);

// --- LLM proposals ----------------------------------------------------------------

/// The region from the first '{' to its matching '}', skipping braces inside
/// JSON strings. nullopt when there is no balanced region.
std::optional<std::string_view> extract_json_object(std::string_view text);

struct ParsedProposals {
  std::vector<EdgeCase> cases;
  std::vector<std::string> rejected;  // one reason per dropped entry
  std::vector<EdgeCase> duplicates;   // well-formed but already seen
};

/// Strict parse of a model response in the `{"fn": [{...}, ...]}` shape.
/// Entries for unknown functions, with the wrong key set, or already in
/// `seen` (canonical forms) are dropped. Duplicates inside the response
/// collapse to the first.
ParsedProposals parse_proposals(std::string_view text,
                                std::span<const FunctionSignature> signatures,
                                const std::set<std::string>& seen);

/// Bounded text rendering of the most recent stages: coverage, uncovered
/// lines, mutation score, exception types and the reward trend. Oldest
/// stages are dropped first; the result never exceeds `limit` characters.
std::string summarize_feedback(const SearchState& state, std::size_t limit = 4000);

/// Where a stage's cases come from. The engine calls cold_start for stage 1
/// and propose afterwards.
class ProposalSource {
 public:
  virtual ~ProposalSource() = default;
  virtual ProposalBatch cold_start(std::span<const FunctionSignature> signatures) = 0;
  virtual ProposalBatch propose(const SourceArtifact& source,
                                std::span<const FunctionSignature> signatures,
                                const SearchState& state) = 0;
};

class LlmActor final : public ProposalSource {
 public:
  LlmActor(Gateway& gateway, ActorConfig cfg);

  ProposalBatch cold_start(std::span<const FunctionSignature> signatures) override;

  /// Throws ActorExhausted (kActorExhausted) when no attempt yields a new
  /// valid case; gateway errors pass through.
  ProposalBatch propose(const SourceArtifact& source,
                        std::span<const FunctionSignature> signatures,
                        const SearchState& state) override;

  /// User prompt for the given state; exposed for inspection.
  std::string render_user_prompt(const SourceArtifact& source,
                                 std::span<const FunctionSignature> signatures,
                                 const SearchState& state) const;

 private:
  Gateway& gateway_;
  ActorConfig cfg_;
};

}  // namespace evotest
