#include "evotest/edge_case.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "evotest/errors.hpp"

namespace evotest {

std::string EdgeCase::canonical() const {
  Json j = {{"args", arguments}, {"function", function}};
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Json to_json(const EdgeCase& edge_case) {
  return {{"function", edge_case.function}, {"args", edge_case.arguments}};
}

EdgeCase edge_case_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("function") || !j.at("function").is_string()) {
    throw Error(ErrorKind::kDomain, "edge case record needs a string 'function'");
  }
  EdgeCase out;
  out.function = j.at("function").get<std::string>();
  out.arguments = j.value("args", Json::object());
  if (!out.arguments.is_object()) {
    throw Error(ErrorKind::kDomain, "edge case 'args' must be an object");
  }
  return out;
}

Json to_json(const FunctionSignature& signature) {
  return {{"name", signature.name},
          {"params", signature.parameters},
          {"span", {signature.first_line, signature.last_line}}};
}

FunctionSignature signature_from_json(const Json& j) {
  FunctionSignature out;
  out.name = j.at("name").get<std::string>();
  out.parameters = j.value("params", std::vector<std::string>{});
  if (j.contains("span") && j.at("span").is_array() && j.at("span").size() == 2) {
    out.first_line = j.at("span")[0].get<int>();
    out.last_line = j.at("span")[1].get<int>();
  }
  return out;
}

const FunctionSignature* find_signature(std::span<const FunctionSignature> signatures,
                                        std::string_view name) {
  auto it = std::find_if(signatures.begin(), signatures.end(),
                         [&](const FunctionSignature& s) { return s.name == name; });
  return it == signatures.end() ? nullptr : &*it;
}

bool matches_signature(const EdgeCase& edge_case, const FunctionSignature& signature) {
  if (edge_case.function != signature.name || !edge_case.arguments.is_object()) {
    return false;
  }
  if (edge_case.arguments.size() != signature.parameters.size()) return false;
  std::set<std::string> params(signature.parameters.begin(), signature.parameters.end());
  for (const auto& [key, _] : edge_case.arguments.items()) {
    if (!params.contains(key)) return false;
  }
  return true;
}

Json group_by_function(std::span<const EdgeCase> cases) {
  // ordered_json would keep first-seen order; the canonical form sorts.
  Json out = Json::object();
  for (const auto& c : cases) {
    out[c.function].push_back(c.arguments);
  }
  return out;
}

std::string format_functions_list(std::span<const FunctionSignature> signatures) {
  std::string out;
  for (const auto& sig : signatures) {
    if (!out.empty()) out += '\n';
    out += "  - " + sig.name + "(";
    for (std::size_t i = 0; i < sig.parameters.size(); ++i) {
      if (i) out += ", ";
      out += sig.parameters[i];
    }
    out += ")";
  }
  return out;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  return std::all_of(text.begin(), text.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_';
  });
}

}  // namespace evotest
