#include <gtest/gtest.h>

#include "evotest/actor.hpp"
#include "evotest/errors.hpp"

namespace evotest {
namespace {

std::vector<FunctionSignature> sigs() { return {{"f", {"x"}, 1, 2}, {"g", {"a", "b"}, 4, 6}}; }

SearchState one_stage(std::vector<EdgeCase> cases, double line = 0.8) {
  StageBatch b;
  b.cases = std::move(cases);
  b.outcomes.resize(b.cases.size());
  CoverageTotals t{10, static_cast<int>(line * 10), 4, 2, 2, 1};
  return update_state({}, b, 0.75, make_coverage(t, {7, 9}), {0.5, {"ValueError"}}, 0.4);
}

TEST(ExtractJson, FirstBraceToMatch) {
  EXPECT_EQ(extract_json_object("Here you go:\n```json\n{\"f\": [{\"x\": 1}]}\n```\nDone."),
            std::optional<std::string_view>("{\"f\": [{\"x\": 1}]}"));
  EXPECT_EQ(extract_json_object("{\"a\": \"}\"} trailing }"),
            std::optional<std::string_view>("{\"a\": \"}\"}"));
  EXPECT_EQ(extract_json_object("{\"a\": \"\\\"}\"}"),
            std::optional<std::string_view>("{\"a\": \"\\\"}\"}"));
  EXPECT_FALSE(extract_json_object("no json").has_value());
  EXPECT_FALSE(extract_json_object("{ unbalanced").has_value());
}

TEST(ParseProposals, DirectParse) {
  auto p = parse_proposals(R"({"f": [{"x": 1}]})", sigs(), {});
  ASSERT_EQ(p.cases.size(), 1u);
  EXPECT_EQ(p.cases[0].function, "f");
  EXPECT_EQ(p.cases[0].arguments["x"], 1);
}

TEST(ParseProposals, DropsMalformedEntries) {
  auto p = parse_proposals(
      R"({"f": [{"x": 1}, {"y": 2}, {"x": 1, "z": 0}, 5], "nope": [{"x": 1}], "g": {"a": 1}})", sigs(),
      {});
  EXPECT_EQ(p.cases.size(), 1u);
  EXPECT_EQ(p.rejected.size(), 5u);
}

TEST(ParseProposals, DropsSeenAndInBatchDuplicates) {
  std::set<std::string> seen{EdgeCase{"f", {{"x", 1}}}.canonical()};
  auto p = parse_proposals(R"({"f": [{"x": 1}, {"x": 2}, {"x": 2}, {"x": 2.0}]})", sigs(), seen);
  ASSERT_EQ(p.cases.size(), 2u);
  EXPECT_EQ(p.duplicates.size(), 1u);
  EXPECT_EQ(p.cases[1].arguments["x"].dump(), "2.0");
}

TEST(ParseProposals, NotJson) {
  auto p = parse_proposals("I cannot help with that.", sigs(), {});
  EXPECT_TRUE(p.cases.empty());
  EXPECT_EQ(p.rejected.size(), 1u);
  p = parse_proposals("{\"f\": [1,]}", sigs(), {});
  EXPECT_TRUE(p.cases.empty());
}

TEST(Feedback, EmptyState) { EXPECT_EQ(summarize_feedback({}), "no prior feedback"); }

TEST(Feedback, ContainsCoverageFigures) {
  auto s = one_stage({{"f", {{"x", 1}}}});
  auto text = summarize_feedback(s);
  EXPECT_NE(text.find("80"), std::string::npos);
  EXPECT_NE(text.find("uncovered lines: 7, 9"), std::string::npos);
  EXPECT_NE(text.find("ValueError"), std::string::npos);
  EXPECT_NE(text.find("0.750"), std::string::npos);
}

TEST(Feedback, BoundedByLimit) {
  auto s = one_stage({{"f", {{"x", 1}}}});
  for (std::size_t limit : {1u, 10u, 40u, 4000u}) {
    EXPECT_LE(summarize_feedback(s, limit).size(), limit);
  }
}

TEST(Feedback, DropsOldestStagesFirst) {
  SearchState s;
  for (int i = 0; i < 6; ++i) {
    StageBatch b;
    b.cases = {{"f", {{"x", i}}}};
    b.outcomes.resize(1);
    s = update_state(s, b, 0.5, make_coverage({10, i, 0, 0, 1, 1}, {}), {}, 0.1 * i);
  }
  const auto full = summarize_feedback(s, 100000);
  EXPECT_NE(full.find("stage 1:"), std::string::npos);
  const auto cut = summarize_feedback(s, full.size() - 10);
  EXPECT_EQ(cut.find("stage 1:"), std::string::npos);
  EXPECT_NE(cut.find("stage 6:"), std::string::npos);
  EXPECT_NE(cut.find("reward trend"), std::string::npos);
}

struct Fixture {
  std::shared_ptr<ScriptedProvider> provider;
  Gateway gateway;
  explicit Fixture(std::vector<std::string> texts)
      : provider(ScriptedProvider::with_texts(std::move(texts))),
        gateway(provider, GatewayOptions{0, {}, {}, 0, 1, "m"}) {}
};

TEST(LlmActor, ProposeParsesResponse) {
  Fixture fx({R"({"f": [{"x": 5}]})"});
  LlmActor actor(fx.gateway, {});
  SourceArtifact src{"m.py", "def f(x): pass\n"};
  auto b = actor.propose(src, sigs(), one_stage({{"f", {{"x", 1}}}}));
  ASSERT_EQ(b.cases.size(), 1u);
  EXPECT_EQ(b.stage, 2);
  EXPECT_EQ(b.origin, ProposalOrigin::kLlm);
  EXPECT_EQ(b.attempts, 1);
  EXPECT_EQ(b.raw_response, std::optional<std::string>(R"({"f": [{"x": 5}]})"));
  auto req = fx.provider->received().at(0);
  EXPECT_EQ(req.purpose, "actor");
  EXPECT_NE(req.user_text.find("PREVIOUSLY GENERATED EDGE CASES"), std::string::npos);
  EXPECT_NE(req.user_text.find("def f(x): pass"), std::string::npos);
}

TEST(LlmActor, RepeatOnlyResponseTriggersRetry) {
  Fixture fx({R"({"f": [{"x": 1}]})", R"({"f": [{"x": 9}]})"});
  LlmActor actor(fx.gateway, {});
  SourceArtifact src{"m.py", "def f(x): pass\n"};
  auto b = actor.propose(src, sigs(), one_stage({{"f", {{"x", 1}}}}));
  EXPECT_EQ(b.attempts, 2);
  EXPECT_EQ(fx.provider->dispatch_count(), 2u);
  ASSERT_EQ(b.cases.size(), 1u);
  EXPECT_EQ(b.cases[0].arguments["x"], 9);
}

TEST(LlmActor, ExhaustedAfterRetries) {
  Fixture fx({"nothing", "still nothing", "{}"});
  ActorConfig cfg;
  cfg.retries = 2;
  LlmActor actor(fx.gateway, cfg);
  SourceArtifact src{"m.py", "x"};
  try {
    actor.propose(src, sigs(), one_stage({{"f", {{"x", 1}}}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kActorExhausted);
  }
  EXPECT_EQ(fx.provider->dispatch_count(), 3u);
}

TEST(LlmActor, CotSwitchesSystemPrompt) {
  Fixture fx({R"({"f": [{"x": 5}]})", R"({"f": [{"x": 6}]})"});
  ActorConfig plain, cot;
  cot.cot = true;
  SourceArtifact src{"m.py", "x"};
  LlmActor(fx.gateway, plain).propose(src, sigs(), one_stage({{"f", {{"x", 1}}}}));
  LlmActor(fx.gateway, cot).propose(src, sigs(), one_stage({{"f", {{"x", 1}}}}));
  auto reqs = fx.provider->received();
  EXPECT_LT(reqs[0].system_text.size(), reqs[1].system_text.size());
  EXPECT_EQ(reqs[1].system_text.rfind(reqs[0].system_text, 0), 0u);
}

TEST(LlmActor, ProposeNeedsState) {
  Fixture fx({});
  LlmActor actor(fx.gateway, {});
  EXPECT_THROW(actor.propose({"m.py", "x"}, sigs(), {}), Error);
}

TEST(LlmActor, GatewayErrorPassesThrough) {
  auto provider = ScriptedProvider::from_json(Json::parse(R"([{"error": "fatal"}])"));
  Gateway gw(provider, GatewayOptions{0, {}, {}, 0, 1, "m"});
  LlmActor actor(gw, {});
  EXPECT_THROW(actor.propose({"m.py", "x"}, sigs(), one_stage({{"f", {{"x", 1}}}})), GatewayError);
}

TEST(ActorConfig, JsonRoundTripAndValidation) {
  ActorConfig c;
  c.cot = true;
  c.retries = 4;
  EXPECT_EQ(actor_config_from_json(to_json(c)), c);
  c.target_count = 0;
  EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace evotest
