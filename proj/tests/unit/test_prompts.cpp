#include <gtest/gtest.h>

#include "evotest/errors.hpp"
#include "evotest/prompts.hpp"

namespace evotest {
namespace {

namespace p = prompts;

TEST(Render, SubstitutesAndUnescapes) {
  EXPECT_EQ(p::render("a {x} b {{y}} {x}", {{"x", "1"}}), "a 1 b {y} 1");
  EXPECT_EQ(p::render("", {}), "");
}

TEST(Render, ValuesAreNotReinterpreted) {
  EXPECT_EQ(p::render("{src}", {{"src", "d = {'k': {x}}"}}), "d = {'k': {x}}");
}

TEST(Render, RejectsMissingOrUnbalanced) {
  EXPECT_THROW(p::render("{missing}", {}), Error);
  EXPECT_THROW(p::render("open { brace", {}), Error);
  EXPECT_THROW(p::render("close } brace", {}), Error);
}

TEST(Assets, AllShippedAndNonEmpty) {
  EXPECT_EQ(p::asset_names().size(), 12u);
  for (auto name : p::asset_names()) EXPECT_FALSE(p::asset(name).empty()) << name;
  EXPECT_THROW(p::asset("nope"), Error);
}

TEST(ActorPrompts, CotAppendsReasoningBlock) {
  const auto plain = p::actor_system(false);
  const auto cot = p::actor_system(true);
  EXPECT_EQ(cot.substr(0, plain.size()), plain);
  EXPECT_NE(cot.find("REASONING INSTRUCTIONS"), std::string::npos);
  EXPECT_EQ(plain.find("REASONING INSTRUCTIONS"), std::string::npos);
}

TEST(ActorPrompts, UserPromptCarriesInputs) {
  const auto u = p::actor_user("def f(x): return {x}", "f(x)", "coverage 40%", 10);
  EXPECT_NE(u.find("def f(x): return {x}"), std::string::npos);
  EXPECT_NE(u.find("coverage 40%"), std::string::npos);
  EXPECT_NE(u.find("Generate 10 NEW"), std::string::npos);
}

TEST(BaselinePrompts, ShotsAndCot) {
  const auto three_cot = p::baseline_cases("SRC", "FNS", 3, true);
  for (auto marker : {"EXAMPLE 1:", "EXAMPLE 2:", "EXAMPLE 3:", "Think step-by-step"}) {
    EXPECT_NE(three_cot.user.find(marker), std::string::npos) << marker;
  }
  const auto one = p::baseline_cases("SRC", "FNS", 1, false);
  EXPECT_NE(one.user.find("Here is an example"), std::string::npos);
  EXPECT_EQ(one.user.find("EXAMPLE 1:"), std::string::npos);
  EXPECT_EQ(one.user.find("Think step-by-step"), std::string::npos);
  const auto zero = p::baseline_cases("SRC", "FNS", 0, false);
  EXPECT_EQ(zero.user.find("example"), std::string::npos);
  // Escaped braces in the output-format block survive as single braces.
  EXPECT_NE(zero.user.find("\"function_name\": ["), std::string::npos);
  EXPECT_EQ(zero.user.find("{{"), std::string::npos);
  EXPECT_THROW(p::shot_text(2), Error);
}

TEST(SynthesisPrompts, SystemSelection) {
  const auto a = p::synthesis("SRC", "[]", false);
  const auto b = p::synthesis("SRC", "[]", true);
  EXPECT_EQ(a.user, b.user);
  EXPECT_EQ(a.system, std::string(p::asset("synthesis_system")));
  EXPECT_EQ(b.system, std::string(p::asset("baseline_synthesis_system")));
  EXPECT_NE(a.user.find("SRC"), std::string::npos);
}

}  // namespace
}  // namespace evotest
