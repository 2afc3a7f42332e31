#include "defung/transform.h"

#include "defung/parser.h"

#include <algorithm>

namespace defung::transform {

namespace {

void collect_leaves(const ExprPtr& e, const std::string& self, std::vector<PathStep>& path,
                    std::vector<Leaf>& out) {
  if (e->kind == Expr::Kind::If) {
    path.push_back({e->test(), true});
    collect_leaves(e->then_branch(), self, path, out);
    path.back().polarity = false;
    collect_leaves(e->else_branch(), self, path, out);
    path.pop_back();
    return;
  }
  out.push_back({path, e, !contains_call(*e, self)});
}

ExprPtr conjoin(std::vector<ExprPtr> parts) {
  if (parts.empty()) return Expr::bool_lit(true);
  if (parts.size() == 1) return parts[0];
  return Expr::and_(std::move(parts));
}

ExprPtr disjoin(std::vector<ExprPtr> parts) {
  if (parts.empty()) return Expr::bool_lit(true);
  if (parts.size() == 1) return parts[0];
  return Expr::or_(std::move(parts));
}

std::vector<ExprPtr> param_vars(const std::vector<std::string>& params) {
  std::vector<ExprPtr> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(Expr::var(p));
  return out;
}

/// (1- d)
ExprPtr dec_index(const std::string& index_var) {
  return Expr::prim(PrimOp::Dec, {Expr::var(index_var)});
}

/// Collects Call-to-self nodes of a leaf in evaluation order: arguments
/// before the call itself, left to right (innermost first).
void collect_calls(const ExprPtr& e, const std::string& self, std::vector<ExprPtr>& out) {
  for (const auto& arg : e->args) collect_calls(arg, self, out);
  if (e->kind == Expr::Kind::Call && e->name == self) out.push_back(e);
}

/// One domain obligation per recursive call of a leaf, conjoined.
ExprPtr leaf_obligation(const ExprPtr& leaf, const FunctionDef& def, const std::string& dom_name,
                        const std::string& value_name, bool indexed,
                        const std::string& index_var) {
  std::vector<ExprPtr> calls;
  collect_calls(leaf, def.name, calls);
  if (calls.empty()) return Expr::bool_lit(true);

  auto lift_value = [&](const ExprPtr& arg) {
    return rewrite_self_calls(arg, def.name, [&](std::vector<ExprPtr> args) {
      if (indexed) args.insert(args.begin(), dec_index(index_var));
      return Expr::call(value_name, std::move(args));
    });
  };

  std::vector<ExprPtr> obligations;
  for (const auto& call : calls) {
    std::vector<ExprPtr> args;
    for (const auto& a : call->args) args.push_back(lift_value(a));
    if (indexed) args.insert(args.begin(), dec_index(index_var));
    obligations.push_back(Expr::call(dom_name, std::move(args)));
  }
  return conjoin(std::move(obligations));
}

/// Structural walk shared by the domain and measure constructions: If
/// branches recurse, and/or guard later positions behind earlier tests,
/// leaves go through `on_leaf`.
ExprPtr spine_map(const ExprPtr& e, const std::string& self, const ExprPtr& base_value,
                  const std::function<ExprPtr(const ExprPtr&)>& on_leaf) {
  switch (e->kind) {
    case Expr::Kind::If:
      return Expr::if_(e->test(), spine_map(e->then_branch(), self, base_value, on_leaf),
                       spine_map(e->else_branch(), self, base_value, on_leaf));
    case Expr::Kind::And:
    case Expr::Kind::Or: {
      if (e->args.empty() || !contains_call(*e, self)) return on_leaf(e);
      ExprPtr rest = spine_map(e->args.back(), self, base_value, on_leaf);
      for (std::size_t i = e->args.size() - 1; i-- > 0;) {
        if (e->kind == Expr::Kind::And)
          rest = Expr::if_(e->args[i], rest, base_value);
        else
          rest = Expr::if_(e->args[i], base_value, rest);
      }
      return rest;
    }
    default:
      return on_leaf(e);
  }
}

}  // namespace

ExprPtr rewrite_self_calls(const ExprPtr& e, const std::string& self,
                           const std::function<ExprPtr(std::vector<ExprPtr>)>& rewrite) {
  if (!contains_call(*e, self)) return e;
  std::vector<ExprPtr> args;
  args.reserve(e->args.size());
  for (const auto& a : e->args) args.push_back(rewrite_self_calls(a, self, rewrite));
  if (e->kind == Expr::Kind::Call && e->name == self) return rewrite(std::move(args));
  Expr copy = *e;
  copy.args = std::move(args);
  return std::make_shared<const Expr>(std::move(copy));
}

Names make_names(const FunctionDef& def) {
  Names n;
  // "i" + name can collide with a syntactic form or a primitive (f -> if).
  std::string base = "i" + def.name;
  bool reserved = base == "if" || base == "and" || base == "or" || base == "t" ||
                  base == "nil" || prim_by_name(base) != nullptr;
  if (reserved) base = "i-" + def.name;
  n.indexed_fn = base;
  n.indexed_dom = base + "-dom";
  n.min_index = base + "-min-index";
  n.measure = def.name + "-measure";
  n.l_fn = "L" + def.name;
  n.l_dom = "L" + def.name + "-dom";
  n.fast = "m" + def.name;
  n.exec_dom = def.name + "-domain";
  n.comp = "comp-" + def.name;
  n.index_var = "d";
  for (int i = 0; std::find(def.params.begin(), def.params.end(), n.index_var) !=
                  def.params.end();
       ++i)
    n.index_var = "d" + std::to_string(i);
  return n;
}

BranchAnalysis analyze_branches(const FunctionDef& def) {
  BranchAnalysis analysis;
  std::vector<PathStep> path;
  collect_leaves(def.body, def.name, path, analysis.leaves);
  if (!analysis.has_base())
    throw NoBaseCaseError("definition of " + def.name + " has no base case", def.loc);
  return analysis;
}

ExprPtr infer_default(const FunctionDef& def) {
  if (def.default_value) return def.default_value;
  for (const auto& leaf : analyze_branches(def).leaves)
    if (leaf.is_base) return leaf.expr;
  throw NoBaseCaseError("definition of " + def.name + " has no base case", def.loc);
}

ExprPtr build_base_predicate(const BranchAnalysis& analysis) {
  std::vector<ExprPtr> disjuncts;
  for (const auto& leaf : analysis.leaves) {
    if (!leaf.is_base) continue;
    std::vector<ExprPtr> conjuncts;
    for (const auto& step : leaf.path)
      conjuncts.push_back(step.polarity ? step.test : Expr::prim(PrimOp::Not, {step.test}));
    disjuncts.push_back(conjoin(std::move(conjuncts)));
  }
  return disjoin(std::move(disjuncts));
}

Definition build_indexed_fn(const FunctionDef& def) {
  Names names = make_names(def);
  ExprPtr body = rewrite_self_calls(def.body, def.name, [&](std::vector<ExprPtr> args) {
    args.insert(args.begin(), dec_index(names.index_var));
    return Expr::call(names.indexed_fn, std::move(args));
  });
  Definition out;
  out.name = names.indexed_fn;
  out.params = def.params;
  out.params.insert(out.params.begin(), names.index_var);
  out.body = Expr::if_(Expr::prim(PrimOp::Zp, {Expr::var(names.index_var)}), infer_default(def),
                       std::move(body));
  return out;
}

ExprPtr domain_body(const FunctionDef& def, const std::string& dom_name,
                    const std::string& value_name, bool indexed, const std::string& index_var) {
  ExprPtr t = Expr::bool_lit(true);
  return spine_map(def.body, def.name, t, [&](const ExprPtr& leaf) {
    return leaf_obligation(leaf, def, dom_name, value_name, indexed, index_var);
  });
}

Definition build_indexed_dom(const FunctionDef& def) {
  Names names = make_names(def);
  BranchAnalysis analysis = analyze_branches(def);
  Definition out;
  out.name = names.indexed_dom;
  out.params = def.params;
  out.params.insert(out.params.begin(), names.index_var);
  out.body = Expr::if_(Expr::prim(PrimOp::Zp, {Expr::var(names.index_var)}),
                       build_base_predicate(analysis),
                       domain_body(def, names.indexed_dom, names.indexed_fn, true,
                                   names.index_var));
  return out;
}

Definition build_min_index(const FunctionDef& def) {
  Names names = make_names(def);
  const std::string& d = names.index_var;
  auto params = param_vars(def.params);

  auto dom_at = [&](ExprPtr index) {
    std::vector<ExprPtr> args = params;
    args.insert(args.begin(), std::move(index));
    return Expr::call(names.indexed_dom, std::move(args));
  };
  std::vector<ExprPtr> rec_args = params;
  rec_args.insert(rec_args.begin(), dec_index(d));

  Definition out;
  out.name = names.min_index;
  out.params = def.params;
  out.params.insert(out.params.begin(), d);
  out.body = Expr::if_(
      Expr::prim(PrimOp::Zp, {Expr::var(d)}), Expr::int_lit(0),
      Expr::if_(Expr::prim(PrimOp::Not, {dom_at(Expr::var(d))}), Expr::int_lit(0),
                Expr::if_(Expr::prim(PrimOp::Not, {dom_at(dec_index(d))}), Expr::var(d),
                          Expr::call(names.min_index, std::move(rec_args)))));
  return out;
}

ExprPtr measure_body(const FunctionDef& def, const std::string& measure_name,
                     const std::string& value_name) {
  ExprPtr zero = Expr::int_lit(0);
  return spine_map(def.body, def.name, zero, [&](const ExprPtr& leaf) -> ExprPtr {
    std::vector<ExprPtr> calls;
    collect_calls(leaf, def.name, calls);
    if (calls.empty()) return zero;
    auto lift_value = [&](const ExprPtr& arg) {
      return rewrite_self_calls(arg, def.name, [&](std::vector<ExprPtr> args) {
        return Expr::call(value_name, std::move(args));
      });
    };
    std::vector<ExprPtr> measures;
    for (const auto& call : calls) {
      std::vector<ExprPtr> args;
      for (const auto& a : call->args) args.push_back(lift_value(a));
      measures.push_back(Expr::call(measure_name, std::move(args)));
    }
    ExprPtr acc = measures.back();
    for (std::size_t i = measures.size() - 1; i-- > 0;)
      acc = Expr::prim(PrimOp::Max, {measures[i], acc});
    return Expr::prim(PrimOp::Inc, {acc});
  });
}

DerivedEquations derive_equations(const FunctionDef& def) {
  Names names = make_names(def);
  auto params = param_vars(def.params);
  auto call_with_params = [&](const std::string& fn) {
    return Expr::call(fn, std::vector<ExprPtr>(params));
  };
  ExprPtr not_in_dom = Expr::prim(PrimOp::Not, {call_with_params(names.l_dom)});

  DerivedEquations eq;

  eq.l_dom_equation.name = names.l_dom;
  eq.l_dom_equation.lhs = call_with_params(names.l_dom);
  eq.l_dom_equation.rhs = domain_body(def, names.l_dom, names.l_fn, false, names.index_var);

  eq.l_fn_equation.name = names.l_fn;
  eq.l_fn_equation.lhs = call_with_params(names.l_fn);
  eq.l_fn_equation.rhs =
      Expr::if_(not_in_dom, infer_default(def),
                rewrite_self_calls(def.body, def.name, [&](std::vector<ExprPtr> args) {
                  return Expr::call(names.l_fn, std::move(args));
                }));

  eq.measure_equation.name = names.measure;
  eq.measure_equation.lhs = call_with_params(names.measure);
  eq.measure_equation.rhs =
      Expr::if_(not_in_dom, Expr::int_lit(0), measure_body(def, names.measure, names.l_fn));

  // Off-domain behavior of the exported function is comp at the BIG bound,
  // not the bare default value.
  std::vector<ExprPtr> comp_args(params);
  comp_args.insert(comp_args.begin(), Expr::call("BIG", {}));
  eq.exported_equation.name = def.name;
  eq.exported_equation.lhs = call_with_params(def.name);
  eq.exported_equation.rhs =
      Expr::if_(Expr::prim(PrimOp::Not, {call_with_params(names.exec_dom)}),
                Expr::call(names.comp, std::move(comp_args)), def.body);

  return eq;
}

TransformResult transform_definition(const FunctionDef& def) {
  validate_transformability(def);
  TransformResult result;
  result.names = make_names(def);
  result.indexed_fn = build_indexed_fn(def);
  result.indexed_dom = build_indexed_dom(def);
  result.min_index_fn = build_min_index(def);
  result.base_predicate = build_base_predicate(analyze_branches(def));
  result.default_expr = infer_default(def);
  result.derived = derive_equations(def);
  return result;
}

}  // namespace defung::transform
