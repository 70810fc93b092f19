#include <gtest/gtest.h>

#include <thread>

#include "evotest/engine.hpp"
#include "evotest/errors.hpp"
#include "evotest/trace.hpp"
#include "testkit.hpp"

namespace evotest {
namespace {

class Repeat final : public ProposalSource {
 public:
  ProposalBatch cold_start(std::span<const FunctionSignature> sigs) override {
    return evotest::cold_start(sigs, 10);
  }
  ProposalBatch propose(const SourceArtifact&, std::span<const FunctionSignature> sigs,
                        const SearchState&) override {
    auto b = evotest::cold_start(sigs, 10);
    b.origin = ProposalOrigin::kLlm;
    return b;
  }
};

TEST(TraceWriter, SequenceAndSchemaAreStamped) {
  testkit::TempDir dir;
  const auto path = dir.path() / "t.jsonl";
  {
    TraceWriter w(path);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&w, t] {
        for (int i = 0; i < 25; ++i) w.emit({{"type", "x"}, {"t", t}});
      });
    }
    for (auto& t : threads) t.join();
  }
  const auto records = read_trace(path);
  ASSERT_EQ(records.size(), 100u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i]["seq"], static_cast<std::int64_t>(i));
    EXPECT_EQ(records[i]["schema"], kTraceSchemaVersion);
  }
}

TEST(ReadTrace, MalformedLineIsATraceError) {
  testkit::TempDir dir;
  const auto path = dir.path() / "bad.jsonl";
  testkit::write_file(path, "{\"type\":\"a\"}\n{broken\n");
  try {
    read_trace(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTrace);
  }
}

TEST(ReplayRewards, EngineTraceReplaysBitForBit) {
  testkit::TempDir dir;
  const auto path = dir.path() / "run.jsonl";
  {
    TraceWriter w(path);
    testkit::MockExecutor exec(testkit::arith5());
    Repeat actor;
    SearchConfig cfg;
    cfg.stop.tau = 100;
    cfg.stop.max_stages = 4;
    run_search({"arith5.py", "x"}, exec, actor, cfg, &w);
  }
  auto records = read_trace(path);
  auto report = replay_rewards(records);
  EXPECT_GE(report.stage_records, 3);
  EXPECT_EQ(report.reward_records, report.stage_records);
  EXPECT_TRUE(report.exact());

  for (auto& r : records) {
    if (r["type"] == "stage") {
      r["reward"]["normalized"] = r["reward"]["normalized"].get<double>() + 1e-15;
      break;
    }
  }
  report = replay_rewards(records);
  EXPECT_EQ(report.mismatches.size(), 1u);
}

TEST(TracedExecutor, OneRecordPerCall) {
  testkit::MockExecutor inner(testkit::arith5());
  MemorySink sink;
  TracedExecutor exec(inner, sink, testkit::counter_clock(3));
  const SourceArtifact src{"arith5.py", "x"};
  exec.analyze(src);
  std::vector<EdgeCase> cases{{"add", {{"a", 1}, {"b", 2}}}};
  exec.run_cases(src, cases);
  inner.fail_next("generate_mutants", ErrorKind::kToolError);
  EXPECT_THROW(exec.generate_mutants(src, 5, 1), ExecutorError);
  const auto recs = sink.records();
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(sink.count("executor_request"), 3u);
  EXPECT_EQ(recs[0]["tool"], "analyze");
  EXPECT_EQ(recs[1]["args"]["cases"], 1);
  EXPECT_EQ(recs[1]["elapsed_ms"], 3);
  EXPECT_EQ(recs[2]["ok"], false);
  EXPECT_EQ(recs[2]["error"], to_string(ErrorKind::kToolError));
}

}  // namespace
}  // namespace evotest
