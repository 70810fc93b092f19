#pragma once

// In-process stand-in for a Python module: each function body is C++ that
// mimics the Python semantics closely enough for boundary inputs, reports
// the lines and branch arcs it executes, and consults the active mutant.

#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evotest/executor.hpp"

namespace evotest::testkit {

/// Thrown by a body to model `raise <type>`.
struct Raise {
  std::string type;
};
struct Hang {};
struct Crash {};

class SimContext {
 public:
  explicit SimContext(std::string mutant) : mutant_(std::move(mutant)) {}

  void line(int n) { lines_.insert(n); }
  /// Records the arc taken at decision line `n` and returns `taken`.
  bool branch(int n, bool taken) {
    arcs_.insert({n, taken});
    return taken;
  }
  bool mutated(std::string_view id) const { return mutant_ == id; }

  const std::set<int>& lines() const { return lines_; }
  const std::set<std::pair<int, bool>>& arcs() const { return arcs_; }

 private:
  std::string mutant_;
  std::set<int> lines_;
  std::set<std::pair<int, bool>> arcs_;
};

/// Python-flavoured operations on JSON values. Type errors raise TypeError.
namespace py {
bool is_number(const Json& v);
Json add(const Json& a, const Json& b);
Json sub(const Json& a, const Json& b);
Json mul(const Json& a, const Json& b);
Json truediv(const Json& a, const Json& b);
bool lt(const Json& a, const Json& b);
bool le(const Json& a, const Json& b);
bool gt(const Json& a, const Json& b);
bool ge(const Json& a, const Json& b);
bool eq(const Json& a, const Json& b);
Json len(const Json& v);
std::vector<Json> iterate(const Json& v);
}  // namespace py

struct SimFunction {
  FunctionSignature signature;
  std::function<Json(const Json& args, SimContext& ctx)> body;
};

struct SimProgram {
  std::string path;
  std::string text;
  std::vector<SimFunction> functions;
  std::vector<MutantDescriptor> mutants;
  std::set<int> executable_lines;
  /// Lines run at import time (the def lines).
  std::set<int> import_lines;
  std::set<int> decision_lines;

  struct Run {
    std::vector<CaseOutcome> outcomes;
    CoverageReport coverage;
  };

  /// Runs every case with `mutant` active ("" for the original).
  Run execute(std::span<const EdgeCase> cases, const std::string& mutant = {}) const;
  std::vector<FunctionSignature> signatures() const;
  bool has_mutant(const std::string& id) const;
};

/// Five small arithmetic functions (add, divide, clamp, sign, mean) with
/// guarded error paths and ten mutants.
SimProgram arith5();

/// Same shape as arith5 but a single function `add(a, b)`.
SimProgram single_add();

/// Registry by source stem: "arith5", "single_add".
SimProgram program_by_stem(const std::string& stem);

}  // namespace evotest::testkit
