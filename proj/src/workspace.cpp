#include "defung/workspace.h"

#include "defung/exec.h"
#include "defung/interp.h"
#include "defung/parser.h"

namespace defung {

namespace {
constexpr const char* kDomCheckMarker = "%domcheck";
}

Workspace::Workspace(Program prog, TransformMutator mutator) : prog_(std::move(prog)) {
  for (const FunctionDef& def : prog_.definitions) build(def, mutator);

  machine_.set_domcheck_handler([this](std::uint32_t meta, std::span<const Value> args,
                                       const vm::Limits& limits, vm::EvalStats& stats) {
    const std::string& fname = domcheck_fnames_.at(meta);
    interp::EvalContext ctx{limits, &stats};
    return interp::find_witness_depth(*this, fname, args, limits.domain_cap, ctx).in_domain;
  });
}

void Workspace::build(const FunctionDef& def, TransformMutator& mutator) {
  validate_transformability(def);

  FnArtifacts art;
  art.def = &def;
  art.tr = transform::transform_definition(def);
  if (mutator) mutator(def.name, art.tr);
  const transform::Names& names = art.tr.names;

  art.fast_fn = exec::build_fast_def(def, names);
  art.exec_dom_fn = exec::build_exec_dom_def(def, names);
  art.comp_fn = exec::build_comp_def(def, art.tr);

  auto meta = static_cast<std::uint32_t>(domcheck_fnames_.size());
  domcheck_fnames_.push_back(def.name);

  // Reserve the chunk indices up front so self- and mutual references
  // compile against the final table.
  auto base_idx = static_cast<std::uint32_t>(machine_.chunk_count());
  art.ck_fast = base_idx + 0;
  art.ck_indexed_fn = base_idx + 1;
  art.ck_indexed_dom = base_idx + 2;
  art.ck_min_index = base_idx + 3;
  art.ck_exec_dom = base_idx + 4;
  art.ck_comp = base_idx + 5;
  art.ck_default = base_idx + 6;

  vm::CompileEnv env;
  env.domcheck_marker = kDomCheckMarker;
  env.domcheck_meta = meta;
  env.fn_indices = call_targets_;
  env.fn_indices[def.name] = art.ck_fast;  // self-calls left unrewritten run fast
  env.fn_indices[names.fast] = art.ck_fast;
  env.fn_indices[names.indexed_fn] = art.ck_indexed_fn;
  env.fn_indices[names.indexed_dom] = art.ck_indexed_dom;
  env.fn_indices[names.min_index] = art.ck_min_index;
  env.fn_indices[names.exec_dom] = art.ck_exec_dom;
  env.fn_indices[names.comp] = art.ck_comp;

  ExprPtr comp_body = exec::build_comp_compiled_body(def, art.tr, kDomCheckMarker);

  machine_.add_chunk(
      vm::compile_chunk(names.fast, art.fast_fn.params, *art.fast_fn.body, env));
  machine_.add_chunk(vm::compile_chunk(names.indexed_fn, art.tr.indexed_fn.params,
                                       *art.tr.indexed_fn.body, env));
  machine_.add_chunk(vm::compile_chunk(names.indexed_dom, art.tr.indexed_dom.params,
                                       *art.tr.indexed_dom.body, env));
  machine_.add_chunk(vm::compile_chunk(names.min_index, art.tr.min_index_fn.params,
                                       *art.tr.min_index_fn.body, env));
  machine_.add_chunk(
      vm::compile_chunk(names.exec_dom, art.exec_dom_fn.params, *art.exec_dom_fn.body, env));
  machine_.add_chunk(vm::compile_chunk(names.comp, art.comp_fn.params, *comp_body, env));
  machine_.add_chunk(
      vm::compile_chunk(def.name + "%default", def.params, *art.tr.default_expr, env));

  // Expose the same resolution to later definitions and ad-hoc evaluation.
  call_targets_ = env.fn_indices;

  by_name_[def.name] = artifacts_.size();
  artifacts_.push_back(std::move(art));
}

bool Workspace::has(const std::string& fname) const { return by_name_.count(fname) != 0; }

const FnArtifacts& Workspace::artifacts(const std::string& fname) const {
  auto it = by_name_.find(fname);
  if (it == by_name_.end()) throw Error("unknown function: " + fname);
  return artifacts_[it->second];
}

}  // namespace defung
