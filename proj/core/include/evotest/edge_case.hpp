#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace evotest {

using Json = nlohmann::json;

/// A top-level function of the program under test, as reported by the
/// worker's analyze tool.
struct FunctionSignature {
  std::string name;
  std::vector<std::string> parameters;
  int first_line = 0;
  int last_line = 0;

  friend bool operator==(const FunctionSignature&, const FunctionSignature&) = default;
};

/// One candidate input: a target function plus a JSON object mapping each
/// parameter name to a JSON literal.
struct EdgeCase {
  std::string function;
  Json arguments = Json::object();

  /// Canonical serialization used for equality, dedup and tie-breaking.
  /// Keys are sorted, numbers keep their JSON type (1 and 1.0 differ).
  std::string canonical() const;

  friend bool operator==(const EdgeCase& a, const EdgeCase& b) {
    return a.canonical() == b.canonical();
  }
};

Json to_json(const EdgeCase& edge_case);
EdgeCase edge_case_from_json(const Json& j);

Json to_json(const FunctionSignature& signature);
FunctionSignature signature_from_json(const Json& j);

const FunctionSignature* find_signature(std::span<const FunctionSignature> signatures,
                                        std::string_view name);

/// True when the argument keys are exactly the signature's parameter set.
bool matches_signature(const EdgeCase& edge_case, const FunctionSignature& signature);

/// Renders cases in the model-facing shape `{"fn": [{...}, ...], ...}`.
Json group_by_function(std::span<const EdgeCase> cases);

/// `  - name(a, b)` lines, one per signature.
std::string format_functions_list(std::span<const FunctionSignature> signatures);

bool is_identifier(std::string_view text);

}  // namespace evotest
