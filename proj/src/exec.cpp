#include "defung/exec.h"

#include "defung/interp.h"

namespace defung::exec {

namespace {

std::vector<ExprPtr> param_vars(const std::vector<std::string>& params) {
  std::vector<ExprPtr> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(Expr::var(p));
  return out;
}

/// (if (zp d) (if (CHECK params) (m<f> params) DEFAULT) body-at-d-1)
Definition comp_shape(const FunctionDef& def, const transform::TransformResult& tr,
                      ExprPtr check_call) {
  const transform::Names& names = tr.names;
  ExprPtr body = transform::rewrite_self_calls(
      def.body, def.name, [&](std::vector<ExprPtr> args) {
        args.insert(args.begin(), Expr::prim(PrimOp::Dec, {Expr::var(names.index_var)}));
        return Expr::call(names.comp, std::move(args));
      });
  ExprPtr exhausted = Expr::if_(std::move(check_call),
                                Expr::call(names.fast, param_vars(def.params)),
                                tr.default_expr);
  Definition out;
  out.name = names.comp;
  out.params = def.params;
  out.params.insert(out.params.begin(), names.index_var);
  out.body = Expr::if_(Expr::prim(PrimOp::Zp, {Expr::var(names.index_var)}),
                       std::move(exhausted), std::move(body));
  return out;
}

}  // namespace

Definition build_fast_def(const FunctionDef& def, const transform::Names& names) {
  Definition out;
  out.name = names.fast;
  out.params = def.params;
  out.body = transform::rewrite_self_calls(def.body, def.name, [&](std::vector<ExprPtr> args) {
    return Expr::call(names.fast, std::move(args));
  });
  return out;
}

Definition build_exec_dom_def(const FunctionDef& def, const transform::Names& names) {
  // Index-free domain recursion; nested values through the fast path.
  Definition out;
  out.name = names.exec_dom;
  out.params = def.params;
  out.body = transform::domain_body(def, names.exec_dom, names.fast, false, names.index_var);
  return out;
}

Definition build_comp_def(const FunctionDef& def, const transform::TransformResult& tr) {
  return comp_shape(def, tr, Expr::call(tr.names.exec_dom, param_vars(def.params)));
}

ExprPtr build_comp_compiled_body(const FunctionDef& def, const transform::TransformResult& tr,
                                 const std::string& domcheck_marker) {
  // The executed exhaustion check is the bounded witness search, not the
  // executable domain, so off-domain exhaustion stays terminating.
  return comp_shape(def, tr, Expr::call(domcheck_marker, param_vars(def.params))).body;
}

Value fast_eval(const Workspace& ws, const std::string& fname, std::span<const Value> args,
                const ExecConfig& cfg, vm::EvalStats* stats) {
  return ws.machine().call(ws.artifacts(fname).ck_fast, args, cfg.limits(), stats);
}

bool exec_dom(const Workspace& ws, const std::string& fname, std::span<const Value> args,
              const ExecConfig& cfg, vm::EvalStats* stats) {
  return ws.machine()
      .call(ws.artifacts(fname).ck_exec_dom, args, cfg.limits(), stats)
      .truthy();
}

Value comp_eval(const Workspace& ws, const std::string& fname, const Value& d,
                std::span<const Value> args, const ExecConfig& cfg, vm::EvalStats* stats) {
  std::vector<Value> full;
  full.reserve(args.size() + 1);
  full.push_back(d);
  full.insert(full.end(), args.begin(), args.end());
  return ws.machine().call(ws.artifacts(fname).ck_comp, full, cfg.limits(), stats);
}

Value run(const Workspace& ws, const std::string& fname, std::span<const Value> args,
          const ExecConfig& cfg, vm::EvalStats* stats) {
  return comp_eval(ws, fname, Value::integer(cfg.big), args, cfg, stats);
}

Value run_wrapper(const Workspace& ws, const std::string& fname, std::span<const Value> args,
                  const ExecConfig& cfg, vm::EvalStats* stats) {
  if (stats) stats->domain_checks++;
  bool in_domain = false;
  try {
    in_domain = exec_dom(ws, fname, args, cfg, stats);
  } catch (const RecursionSafetyCapError&) {
    in_domain = false;  // a blown safety cap counts as off-domain
  }
  if (in_domain) return fast_eval(ws, fname, args, cfg, stats);
  return ws.machine().call(ws.artifacts(fname).ck_default, args, cfg.limits(), stats);
}

const char* step_mode_name(StepMode mode) {
  switch (mode) {
    case StepMode::Indexed:
      return "indexed";
    case StepMode::Fast:
      return "fast";
    case StepMode::Domain:
      return "domain";
    case StepMode::Wrapper:
      return "wrapper";
  }
  return "?";
}

vm::EvalStats count_steps(const Workspace& ws, StepMode mode, const std::string& fname,
                          std::span<const Value> args, const ExecConfig& cfg) {
  vm::EvalStats stats;
  switch (mode) {
    case StepMode::Indexed:
      run(ws, fname, args, cfg, &stats);
      break;
    case StepMode::Fast:
      fast_eval(ws, fname, args, cfg, &stats);
      break;
    case StepMode::Domain:
      exec_dom(ws, fname, args, cfg, &stats);
      break;
    case StepMode::Wrapper:
      run_wrapper(ws, fname, args, cfg, &stats);
      break;
  }
  return stats;
}

}  // namespace defung::exec
