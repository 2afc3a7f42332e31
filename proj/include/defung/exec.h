#ifndef DEFUNG_EXEC_H
#define DEFUNG_EXEC_H

#include "defung/workspace.h"

namespace defung::exec {

/// Execution bounds. `big` is the fuel handed to the deferred-check
/// executable; the safety cap turns off-domain nontermination of the
/// unchecked paths into a reportable error.
struct ExecConfig {
  std::int64_t big = (std::int64_t{1} << 61) - 1;
  std::uint64_t safety_cap = 10'000'000;
  std::uint64_t domain_cap = 4096;

  vm::Limits limits() const { return {safety_cap, domain_cap}; }
};

/// Generated-definition builders for the executable layer.
Definition build_fast_def(const FunctionDef& def, const transform::Names& names);
Definition build_exec_dom_def(const FunctionDef& def, const transform::Names& names);
/// Display form (domain check spelled as <f>-domain) and the body actually
/// compiled (deferred bounded witness search).
Definition build_comp_def(const FunctionDef& def, const transform::TransformResult& tr);
ExprPtr build_comp_compiled_body(const FunctionDef& def, const transform::TransformResult& tr,
                                 const std::string& domcheck_marker);

/// The guarded fast path: plain recursion, no index, no domain checks.
/// The caller is responsible for the domain; off domain this hits the
/// safety cap.
Value fast_eval(const Workspace& ws, const std::string& fname, std::span<const Value> args,
                const ExecConfig& cfg, vm::EvalStats* stats = nullptr);

/// Executable domain; terminates on-domain, safety-capped off it.
bool exec_dom(const Workspace& ws, const std::string& fname, std::span<const Value> args,
              const ExecConfig& cfg, vm::EvalStats* stats = nullptr);

/// comp-<f>: indexed execution that defers the domain check to index
/// exhaustion (bounded witness search; fast path when it succeeds).
Value comp_eval(const Workspace& ws, const std::string& fname, const Value& d,
                std::span<const Value> args, const ExecConfig& cfg,
                vm::EvalStats* stats = nullptr);

/// The exported function: comp at the BIG bound.
Value run(const Workspace& ws, const std::string& fname, std::span<const Value> args,
          const ExecConfig& cfg, vm::EvalStats* stats = nullptr);

/// Total wrapper: domain check first (safety-cap overflow counts as off
/// domain), default value off domain.
Value run_wrapper(const Workspace& ws, const std::string& fname, std::span<const Value> args,
                  const ExecConfig& cfg, vm::EvalStats* stats = nullptr);

enum class StepMode { Indexed, Fast, Domain, Wrapper };

const char* step_mode_name(StepMode mode);

/// Cost counters for one evaluation in the given mode.
vm::EvalStats count_steps(const Workspace& ws, StepMode mode, const std::string& fname,
                          std::span<const Value> args, const ExecConfig& cfg);

}  // namespace defung::exec

#endif
