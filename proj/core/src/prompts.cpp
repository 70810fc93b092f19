#include "evotest/prompts.hpp"

#include <utility>

#include "evotest/errors.hpp"

namespace evotest::prompts {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kAssets[];
extern const std::size_t kAssetCount;
}  // namespace detail

std::string_view asset(std::string_view name) {
  for (std::size_t i = 0; i < detail::kAssetCount; ++i) {
    if (detail::kAssets[i].first == name) return detail::kAssets[i].second;
  }
  throw Error(ErrorKind::kPrecondition, "unknown prompt asset: " + std::string(name));
}

std::vector<std::string_view> asset_names() {
  std::vector<std::string_view> out;
  for (std::size_t i = 0; i < detail::kAssetCount; ++i) out.push_back(detail::kAssets[i].first);
  return out;
}

std::string render(std::string_view tmpl, const Vars& vars) {
  std::string out;
  out.reserve(tmpl.size());
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    const char ch = tmpl[i];
    if (ch == '{') {
      if (i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
        out += '{';
        ++i;
        continue;
      }
      const auto close = tmpl.find('}', i + 1);
      if (close == std::string_view::npos) {
        throw Error(ErrorKind::kPrecondition, "unterminated placeholder in template");
      }
      const auto name = tmpl.substr(i + 1, close - i - 1);
      const auto it = vars.find(name);
      if (it == vars.end()) {
        throw Error(ErrorKind::kPrecondition,
                    "template variable has no value: " + std::string(name));
      }
      out += it->second;
      i = close;
    } else if (ch == '}') {
      if (i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
        out += '}';
        ++i;
        continue;
      }
      throw Error(ErrorKind::kPrecondition, "single '}' in template");
    } else {
      out += ch;
    }
  }
  return out;
}

std::string actor_system(bool cot) {
  std::string out(asset("actor_system"));
  if (cot) out += asset("actor_system_cot_addition");
  return out;
}

std::string actor_user(std::string_view source_code, std::string_view functions_list,
                       std::string_view feedback_summary, int target_count) {
  return render(asset("actor_user"), {{"source_code", std::string(source_code)},
                                      {"functions_list", std::string(functions_list)},
                                      {"feedback_summary", std::string(feedback_summary)},
                                      {"target_count", std::to_string(target_count)}});
}

Pair synthesis(std::string_view source_code, std::string_view edge_cases_repr, bool baseline) {
  return {std::string(asset(baseline ? "baseline_synthesis_system" : "synthesis_system")),
          render(asset("synthesis_user"), {{"source_code", std::string(source_code)},
                                           {"edge_cases_repr", std::string(edge_cases_repr)}})};
}

std::string_view shot_text(int shots) {
  switch (shots) {
    case 0: return asset("baseline_zero_shot");
    case 1: return asset("baseline_one_shot");
    case 3: return asset("baseline_three_shot");
    default:
      throw Error(ErrorKind::kPrecondition,
                  "shots must be 0, 1 or 3, got " + std::to_string(shots));
  }
}

Pair baseline_cases(std::string_view source_code, std::string_view functions_list, int shots,
                    bool cot) {
  std::string user = render(asset("baseline_user"),
                            {{"extra_text", std::string(shot_text(shots))},
                             {"source_code", std::string(source_code)},
                             {"functions_list", std::string(functions_list)}});
  if (cot) {
    user += "\n";
    user += asset("baseline_cot");
  }
  return {std::string(asset("baseline_system")), std::move(user)};
}

}  // namespace evotest::prompts
