#ifndef DEFUNG_VERIFY_H
#define DEFUNG_VERIFY_H

#include "defung/exec.h"
#include "defung/interp.h"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace defung::verify {

/// Finite sampling plan: a per-parameter integer grid, extra seeded random
/// points from the same box, and the index range for d-quantified checks.
struct CheckPlan {
  std::vector<std::pair<std::int64_t, std::int64_t>> grid;  // inclusive ranges
  std::uint64_t random_samples = 200;
  std::uint64_t seed = 0;
  std::uint64_t depth_min = 0;
  std::uint64_t depth_max = 12;
  std::uint64_t domain_cap = 4096;
  std::uint64_t safety_cap = 10'000'000;
};

/// First parameter ranges over [-1,3], the rest over [-1,6].
CheckPlan default_plan(std::size_t nparams);

struct CheckFailure {
  std::string point;
  std::string detail;
};

struct CheckReport {
  std::string name;
  std::string function;
  std::uint64_t instances = 0;
  std::vector<CheckFailure> failures;

  bool passed() const { return failures.empty(); }
};

/// A recursive call site of the taken branch with its evaluated arguments
/// (inner recursive calls resolved through l_eval).
struct CallSite {
  const Expr* call = nullptr;
  std::vector<Value> args;
};

/// Runs the property checks for one function over one plan. Point-level
/// facts (domain verdicts, measures, values) are cached for the lifetime of
/// the checker; the evaluators themselves never cache.
class Checker {
 public:
  Checker(const Workspace& ws, const std::string& fname, CheckPlan plan, exec::ExecConfig cfg);

  CheckReport check_determinism();
  CheckReport check_stability();
  CheckReport check_canonical_measure();
  std::vector<CheckReport> check_defining_equations();
  CheckReport check_measure_decrease();
  CheckReport check_exec_equivalence();

  /// Dual-oracle agreement at full cap: plain linear-scan least witness =
  /// min-index = the measure recursion equation, on every grid point with a
  /// witness. Much more expensive than the other checks.
  CheckReport check_measure_oracle();

  /// The standard suite: determinism, stability, canonical measure, the four
  /// defining equations, measure decrease, exec equivalence.
  std::vector<CheckReport> run_core();

  const std::vector<std::vector<Value>>& points();
  std::vector<std::vector<Value>> grid_points() const;

  /// Short-circuit-aware walk of the branch taken at `point`.
  std::vector<CallSite> taken_branch_calls(std::span<const Value> point);

  interp::DomainVerdict verdict(std::span<const Value> args);
  std::optional<std::uint64_t> measure_of(std::span<const Value> args);
  Value l_eval_of(std::span<const Value> args);

  const Workspace& workspace() const { return ws_; }
  const CheckPlan& plan() const { return plan_; }

 private:
  struct Outcome {
    bool capped = false;  // RecursionSafetyCap
    Value value;

    friend bool operator==(const Outcome& a, const Outcome& b) {
      return a.capped == b.capped && (a.capped || a.value == b.value);
    }
    std::string to_string() const { return capped ? "<safety-cap>" : value.to_string(); }
  };

  const Workspace& ws_;
  const FnArtifacts& art_;
  CheckPlan plan_;
  exec::ExecConfig cfg_;
  interp::EvalContext ctx_;

  std::vector<std::vector<Value>> points_;
  bool points_ready_ = false;

  std::map<std::string, interp::DomainVerdict> verdict_cache_;
  std::map<std::string, Value> l_eval_cache_;
  std::map<std::string, Outcome> run_cache_;

  // d-indexed tables over the point list, filled on demand
  bool tables_ready_ = false;
  std::vector<std::vector<bool>> dom_table_;    // [point][d - depth_min]
  std::vector<std::vector<Value>> val_table_;   // [point][d - depth_min]
  void fill_tables();

  Outcome run_of(std::span<const Value> args);
  Outcome eval_outcome(const std::function<Value()>& f);

  Value hooked_eval(const Expr& e, const std::map<std::string, Value>& env);
  std::string point_string(std::span<const Value> args, const char* extra = nullptr) const;
};

/// Renders one report row as a stable machine-readable line.
std::string machine_line(const CheckReport& report);

}  // namespace defung::verify

#endif
