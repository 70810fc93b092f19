#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace evotest::prompts {

/// Raw text of a shipped prompt asset, e.g. "actor_system". Throws
/// kPrecondition for an unknown name.
std::string_view asset(std::string_view name);
std::vector<std::string_view> asset_names();

/// Version tag recorded in traces next to rendered prompts.
inline constexpr std::string_view kTemplateVersion = "1";

using Vars = std::map<std::string, std::string, std::less<>>;

/// Formats a template written with Python f-string conventions: `{name}` is
/// substituted, `{{` and `}}` become literal braces. A placeholder without a
/// value, or an unmatched brace, throws kPrecondition.
std::string render(std::string_view tmpl, const Vars& vars);

struct Pair {
  std::string system;
  std::string user;
};

std::string actor_system(bool cot);
std::string actor_user(std::string_view source_code, std::string_view functions_list,
                       std::string_view feedback_summary, int target_count);

/// Prompts for turning archived cases into a test file. `baseline` selects
/// the system prompt used by the stateless pipelines.
Pair synthesis(std::string_view source_code, std::string_view edge_cases_repr,
               bool baseline = false);

/// In-context text for 0, 1 or 3 shots. Throws kPrecondition otherwise.
std::string_view shot_text(int shots);

Pair baseline_cases(std::string_view source_code, std::string_view functions_list, int shots,
                    bool cot);

}  // namespace evotest::prompts
