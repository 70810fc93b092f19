#include <gtest/gtest.h>

#include "evotest/errors.hpp"
#include "evotest/prompts.hpp"
#include "evotest/synthesis.hpp"
#include "testkit.hpp"

namespace evotest {
namespace {

using namespace std::chrono_literals;

const SourceArtifact kSource{"arith5.py", "def add(a, b):\n    return a + b\n"};
constexpr const char* kGoodFile =
    "from arith5 import add\n\ndef test_add():\n    assert add(1, 2) == 3\n";
constexpr const char* kBadFile = "def test_add(:\n    assert add(1, 2) == 3\n";

Gateway gateway_for(std::shared_ptr<ScriptedProvider> p) {
  return Gateway(std::move(p), {0, 1ms, 1ms, 0, 1, "m"}, nullptr, testkit::counter_clock(),
                 [](auto) {});
}

EliteArchive small_archive() {
  CaseOutcome ok;
  ok.status = OutcomeStatus::kReturned;
  ok.value_digest = "3";
  CaseOutcome raised;
  raised.status = OutcomeStatus::kRaised;
  raised.exception_type = "TypeError";
  std::vector<ScoredCase> batch = {
      {{"add", {{"a", 1}, {"b", 2}}}, 0.9, 1, ok},
      {{"add", {{"a", "x"}, {"b", 2}}}, 0.5, 1, raised},
      {{"add", {{"a", 0}, {"b", 0}}}, 0.1, 1, std::nullopt}};
  return update_archive(EliteArchive(20), batch);
}

TEST(StripCodeFences, Variants) {
  EXPECT_EQ(strip_code_fences("```python\nx = 1\n```\n"), "x = 1\n");
  EXPECT_EQ(strip_code_fences("```\nx = 1\n```"), "x = 1\n");
  EXPECT_EQ(strip_code_fences("x = 1\n"), "x = 1\n");
  EXPECT_EQ(strip_code_fences("note\n```py\na\nb\n"), "a\nb\n");
}

TEST(CountTests, DefsAndAsync) {
  EXPECT_EQ(count_tests("def test_a():\n  pass\n    def test_b(x):\nasync def test_c():\n"
                        "def helper():\n# def test_no\n"),
            3);
  EXPECT_EQ(count_tests(""), 0);
}

TEST(SynthesisCases, ArchiveRecordsCarryObservations) {
  const auto j = synthesis_cases(small_archive());
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["expected"], 3);
  EXPECT_EQ(j[1]["raises"], "TypeError");
  EXPECT_FALSE(j[2].contains("expected"));
  EXPECT_FALSE(j[2].contains("raises"));
  EXPECT_EQ(synthesis_cases(small_archive(), 2).size(), 2u);
}

TEST(Synthesize, SingleCallWhenFirstOutputCompiles) {
  auto provider = ScriptedProvider::with_texts({std::string("```python\n") + kGoodFile + "```"});
  auto gw = gateway_for(provider);
  testkit::MockExecutor exec(testkit::arith5());
  SearchState state;
  auto a = synthesize_tests(kSource, state, small_archive(), gw, exec, {}, "rid");
  EXPECT_TRUE(a.syntax_ok);
  EXPECT_EQ(a.attempts, 1);
  EXPECT_EQ(a.test_count, 1);
  EXPECT_EQ(a.text, kGoodFile);
  EXPECT_EQ(a.run_id, "rid");
  EXPECT_EQ(provider->dispatch_count(), 1u);
  EXPECT_EQ(provider->received()[0].purpose, "synthesis");
  EXPECT_NE(provider->received()[0].user_text.find("\"raises\": \"TypeError\""), std::string::npos);
}

TEST(Synthesize, RepairsOnceWithDiagnostics) {
  auto provider = ScriptedProvider::with_texts({kBadFile, kGoodFile});
  auto gw = gateway_for(provider);
  testkit::MockExecutor exec(testkit::arith5());
  auto a = synthesize_tests(kSource, SearchState{}, small_archive(), gw, exec, {});
  EXPECT_TRUE(a.syntax_ok);
  EXPECT_EQ(a.attempts, 2);
  const auto req = provider->received();
  ASSERT_EQ(req.size(), 2u);
  EXPECT_EQ(req[1].purpose, "synthesis_repair");
  EXPECT_NE(req[1].user_text.find("FAILED THE SYNTAX CHECK"), std::string::npos);
  EXPECT_NE(req[1].user_text.find(kBadFile), std::string::npos);
  EXPECT_EQ(a.usage.call_count, 2);
}

TEST(Synthesize, FailsAfterRepair) {
  auto provider = ScriptedProvider::with_texts({kBadFile, kBadFile, kGoodFile});
  auto gw = gateway_for(provider);
  testkit::MockExecutor exec(testkit::arith5());
  try {
    synthesize_tests(kSource, SearchState{}, small_archive(), gw, exec, {}, "rid");
    FAIL();
  } catch (const SynthesisFailed& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSynthesisFailed);
    EXPECT_EQ(e.artifact().attempts, 2);
    EXPECT_EQ(e.artifact().run_id, "rid");
    EXPECT_FALSE(e.artifact().diagnostics.empty());
  }
  EXPECT_EQ(provider->dispatch_count(), 2u);
}

TEST(Synthesize, NoRepairWhenDisabled) {
  auto provider = ScriptedProvider::with_texts({kBadFile, kGoodFile});
  auto gw = gateway_for(provider);
  testkit::MockExecutor exec(testkit::arith5());
  SynthesisConfig cfg;
  cfg.repair = false;
  EXPECT_THROW(synthesize_tests(kSource, SearchState{}, small_archive(), gw, exec, cfg),
               SynthesisFailed);
  EXPECT_EQ(provider->dispatch_count(), 1u);
}

TEST(Synthesize, EmptyArchiveMakesNoCall) {
  auto provider = ScriptedProvider::with_texts({kGoodFile});
  auto gw = gateway_for(provider);
  testkit::MockExecutor exec(testkit::arith5());
  EXPECT_THROW(synthesize_tests(kSource, SearchState{}, EliteArchive(20), gw, exec, {}), Error);
  EXPECT_EQ(provider->dispatch_count(), 0u);
}

TEST(Baseline, SixModesTwoCallsEach) {
  const auto modes = all_baseline_modes();
  ASSERT_EQ(modes.size(), 6u);
  testkit::MockExecutor exec(testkit::arith5());
  const auto sigs = exec.program().signatures();
  for (const auto& mode : modes) {
    auto provider = ScriptedProvider::with_texts(
        {R"({"add": [{"a": 1, "b": 2}, {"a": "x", "b": 1}], "nope": [{"q": 1}]})", kGoodFile});
    auto gw = gateway_for(provider);
    auto r = run_baseline(kSource, sigs, mode, gw, exec, {});
    EXPECT_EQ(provider->dispatch_count(), 2u) << mode.name();
    EXPECT_EQ(r.cases.size(), 2u);
    EXPECT_TRUE(r.artifact.syntax_ok);
    EXPECT_EQ(r.usage.call_count, 2);
    const auto req = provider->received();
    EXPECT_EQ(req[0].purpose, "baseline_cases");
    EXPECT_EQ(req[1].purpose, "baseline_synthesis");
    EXPECT_EQ(req[1].system_text, std::string(prompts::asset("baseline_synthesis_system")));
  }
  EXPECT_EQ(modes[5].name(), "3shot_cot");
}

TEST(Baseline, NoRepairAndNoSynthesisWithoutCases) {
  testkit::MockExecutor exec(testkit::arith5());
  const auto sigs = exec.program().signatures();
  auto bad = ScriptedProvider::with_texts({R"({"add": [{"a": 1, "b": 2}]})", kBadFile, kGoodFile});
  auto gw = gateway_for(bad);
  EXPECT_THROW(run_baseline(kSource, sigs, {0, false}, gw, exec, {}), SynthesisFailed);
  EXPECT_EQ(bad->dispatch_count(), 2u);

  auto empty = ScriptedProvider::with_texts({"no json here", kGoodFile});
  auto gw2 = gateway_for(empty);
  try {
    run_baseline(kSource, sigs, {1, true}, gw2, exec, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kActorExhausted);
  }
  EXPECT_EQ(empty->dispatch_count(), 1u);
  EXPECT_THROW(run_baseline(kSource, sigs, {2, false}, gw2, exec, {}), Error);
}

TEST(EvaluateArtifact, EmptyFileIsDegenerate) {
  testkit::MockExecutor exec(testkit::arith5());
  TestFileArtifact a;
  a.text = " \n\t";
  auto cov = evaluate_artifact(a, kSource, exec);
  EXPECT_TRUE(cov.degenerate);
  EXPECT_EQ(cov.line, 0.0);
  EXPECT_EQ(exec.calls("run_tests"), 0);
}

TEST(WriteArtifact, WritesFileAndMetadata) {
  testkit::TempDir dir;
  TestFileArtifact a;
  a.text = kGoodFile;
  a.syntax_ok = true;
  a.test_count = 1;
  a.run_id = "r1";
  auto paths = write_artifact(a, dir.path() / "out", "arith5", {{"stop_reason", "plateau"}});
  EXPECT_EQ(paths.test_file.filename(), "test_arith5.py");
  EXPECT_EQ(testkit::read_file(paths.test_file), kGoodFile);
  auto meta = Json::parse(testkit::read_file(paths.metadata));
  EXPECT_EQ(meta["run_id"], "r1");
  EXPECT_EQ(meta["stop_reason"], "plateau");
  EXPECT_EQ(meta["test_count"], 1);
}

}  // namespace
}  // namespace evotest
