#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <set>

#include "evotest/actor.hpp"
#include "evotest/errors.hpp"

namespace evotest {

const char* to_string(SeedCategory category) noexcept {
  switch (category) {
    case SeedCategory::kNumeric: return "numeric";
    case SeedCategory::kString: return "string";
    case SeedCategory::kList: return "list";
    case SeedCategory::kDict: return "dict";
    case SeedCategory::kSpecial: return "special";
    case SeedCategory::kExceptionTrigger: return "exception_trigger";
  }
  return "special";
}

namespace {

std::string repeat(std::string_view unit, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += unit;
  return out;
}

std::vector<Json> numeric_seeds() {
  return {
      0,
      std::numeric_limits<std::int32_t>::max(),
      -1,
      1,
      std::numeric_limits<std::int32_t>::min(),
      std::numeric_limits<std::int64_t>::max(),
      std::numeric_limits<std::int64_t>::min(),
      1e10,
      -1e10,
      1e-10,
      -1e-10,
      "Infinity",
      "-Infinity",
      "NaN",
      std::numeric_limits<std::uint64_t>::max(),
      "123456789012345678901234567890",
  };
}

std::vector<Json> string_seeds() {
  return {
      "",
      " ",
      "\t\n",
      "true",
      "null",
      "0",
      "3.14",
      "../../../etc/passwd",
      "'; DROP TABLE users; --",
      "<script>alert(1)</script>",
      repeat("\xF0\x9F\x98\x80", 64) + "\xC3\xBC\xC3\xB1\xC3\xAF\xC3\xA7\xC3\xB6" "d" "\xC3\xA9",
      std::string("\x00\x07\x1b", 3),
      repeat("a", 1000),
  };
}

std::vector<Json> list_seeds() {
  Json nested = Json::array({1});
  for (int i = 0; i < 9; ++i) nested = Json::array({nested});
  return {
      Json::array({3, 2, 1}),
      Json::array(),
      Json::array({0}),
      Json(std::vector<int>(100, 7)),
      Json::array({"NaN", "Infinity", 1}),
      nested,
      Json::array({1, "a", nullptr, true}),
  };
}

std::vector<Json> dict_seeds() {
  return {
      Json::object(),
      {{"key", ""}},
      {{"a", nullptr}, {"b", nullptr}},
      {{"__proto__", 0}, {"constructor", 0}},
      {{"", 1}},
      {{"__class__", "x"}, {"None", nullptr}},
  };
}

std::vector<Json> special_seeds() {
  return {nullptr, true, false, 0.5, -0.0};
}

std::vector<Json> trigger_seeds() {
  return {"not a number", Json::array({nullptr}), "-", "1/0"};
}

std::vector<SeedValue> build_catalog() {
  std::array<std::deque<Json>, 6> queues;
  auto fill = [&](SeedCategory c, std::vector<Json> v) {
    queues[static_cast<std::size_t>(c)] = std::deque<Json>(v.begin(), v.end());
  };
  fill(SeedCategory::kNumeric, numeric_seeds());
  fill(SeedCategory::kString, string_seeds());
  fill(SeedCategory::kList, list_seeds());
  fill(SeedCategory::kDict, dict_seeds());
  fill(SeedCategory::kSpecial, special_seeds());
  fill(SeedCategory::kExceptionTrigger, trigger_seeds());

  constexpr std::array pattern = {
      SeedCategory::kNumeric, SeedCategory::kNumeric, SeedCategory::kString,
      SeedCategory::kList,    SeedCategory::kNumeric, SeedCategory::kDict,
      SeedCategory::kSpecial, SeedCategory::kExceptionTrigger,
  };

  std::vector<SeedValue> out;
  std::set<std::string> seen;
  auto pending = [&] {
    return std::any_of(queues.begin(), queues.end(), [](const auto& q) { return !q.empty(); });
  };
  while (pending()) {
    for (auto category : pattern) {
      auto& q = queues[static_cast<std::size_t>(category)];
      if (q.empty()) continue;
      Json v = std::move(q.front());
      q.pop_front();
      if (seen.insert(v.dump()).second) out.push_back({category, std::move(v)});
    }
  }
  return out;
}

}  // namespace

const std::vector<SeedValue>& seed_catalog() {
  static const std::vector<SeedValue> catalog = build_catalog();
  return catalog;
}

int default_cold_start_budget(std::size_t function_count) {
  const auto n = static_cast<int>(function_count);
  return std::max(n, std::min(5 * n, 60));
}

ProposalBatch cold_start(std::span<const FunctionSignature> signatures, int budget) {
  if (signatures.empty()) throw Error(ErrorKind::kNoTargets, "no target functions to seed");
  if (budget == 0) budget = default_cold_start_budget(signatures.size());
  if (budget < static_cast<int>(signatures.size())) {
    throw Error(ErrorKind::kPrecondition,
                "cold-start budget " + std::to_string(budget) + " is below the " +
                    std::to_string(signatures.size()) + " target functions");
  }

  const auto& catalog = seed_catalog();
  // Position k of a function's stream: 0 is the all-base case, then
  // (value v, parameter j) pairs with v = 1 + (k-1) / arity, j = (k-1) % arity.
  auto stream_size = [&](const FunctionSignature& sig) -> std::size_t {
    return 1 + (catalog.size() - 1) * sig.parameters.size();
  };
  auto stream_case = [&](const FunctionSignature& sig, std::size_t k) {
    EdgeCase c{sig.name, Json::object()};
    for (const auto& p : sig.parameters) c.arguments[p] = catalog[0].value;
    if (k > 0) {
      const auto arity = sig.parameters.size();
      const auto v = 1 + (k - 1) / arity;
      const auto j = (k - 1) % arity;
      c.arguments[sig.parameters[j]] = catalog[v].value;
    }
    return c;
  };

  ProposalBatch batch;
  batch.stage = 1;
  batch.origin = ProposalOrigin::kColdStart;
  std::vector<std::size_t> cursor(signatures.size(), 0);
  bool progressed = true;
  while (static_cast<int>(batch.cases.size()) < budget && progressed) {
    progressed = false;
    for (std::size_t f = 0; f < signatures.size(); ++f) {
      if (static_cast<int>(batch.cases.size()) >= budget) break;
      if (cursor[f] >= stream_size(signatures[f])) continue;
      batch.cases.push_back(stream_case(signatures[f], cursor[f]++));
      progressed = true;
    }
  }
  return batch;
}

}  // namespace evotest
