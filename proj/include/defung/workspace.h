#ifndef DEFUNG_WORKSPACE_H
#define DEFUNG_WORKSPACE_H

#include "defung/machine.h"
#include "defung/transform.h"

#include <functional>

namespace defung {

/// Everything generated for one source definition, plus the compiled chunk
/// indices for each executable artifact.
struct FnArtifacts {
  const FunctionDef* def = nullptr;
  transform::TransformResult tr;
  Definition fast_fn;      // m<f>: the unindexed, unchecked recursion
  Definition exec_dom_fn;  // <f>-domain: executable domain, values via m<f>
  Definition comp_fn;      // comp-<f>: index-first deferred-check executable

  std::uint32_t ck_fast = 0;
  std::uint32_t ck_exec_dom = 0;
  std::uint32_t ck_comp = 0;
  std::uint32_t ck_indexed_fn = 0;
  std::uint32_t ck_indexed_dom = 0;
  std::uint32_t ck_min_index = 0;
  std::uint32_t ck_default = 0;
};

/// A parsed program with every definition transformed and compiled.
/// Immutable once constructed; evaluations may run concurrently.
class Workspace {
 public:
  /// Testing hook: edits a TransformResult before compilation, so checks can
  /// be pointed at deliberately corrupted artifacts.
  using TransformMutator =
      std::function<void(const std::string& fname, transform::TransformResult&)>;

  explicit Workspace(Program prog, TransformMutator mutator = {});

  // The machine's deferred-check handler captures this object's address.
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const Program& program() const { return prog_; }
  const vm::Machine& machine() const { return machine_; }

  bool has(const std::string& fname) const;
  const FnArtifacts& artifacts(const std::string& fname) const;

  /// Call-target map covering source functions (resolved to their fast
  /// bodies) and every generated definition.
  const std::map<std::string, std::uint32_t>& call_targets() const { return call_targets_; }

 private:
  Program prog_;
  vm::Machine machine_;
  std::vector<FnArtifacts> artifacts_;
  std::map<std::string, std::size_t> by_name_;
  std::map<std::string, std::uint32_t> call_targets_;
  std::vector<std::string> domcheck_fnames_;  // meta index -> source fname

  void build(const FunctionDef& def, TransformMutator& mutator);
};

}  // namespace defung

#endif
