#include "defung/verify.h"

#include <random>
#include <sstream>

namespace defung::verify {

namespace {

std::string key_of(std::span<const Value> args) {
  std::string k;
  for (const auto& v : args) {
    k += v.to_string();
    k += ',';
  }
  return k;
}

Value nat_value(std::uint64_t n) { return Value::integer(BigInt(n)); }

}  // namespace

CheckPlan default_plan(std::size_t nparams) {
  CheckPlan plan;
  for (std::size_t i = 0; i < nparams; ++i)
    plan.grid.emplace_back(-1, i == 0 ? 3 : 6);
  return plan;
}

Checker::Checker(const Workspace& ws, const std::string& fname, CheckPlan plan,
                 exec::ExecConfig cfg)
    : ws_(ws), art_(ws.artifacts(fname)), plan_(std::move(plan)), cfg_(cfg) {
  ctx_.limits = {plan_.safety_cap, plan_.domain_cap};
  if (plan_.grid.size() != art_.def->params.size())
    throw Error("check plan has " + std::to_string(plan_.grid.size()) + " ranges for " +
                std::to_string(art_.def->params.size()) + " parameters");
}

const std::vector<std::vector<Value>>& Checker::points() {
  if (points_ready_) return points_;
  points_ = grid_points();
  std::mt19937_64 rng(plan_.seed);
  for (std::uint64_t s = 0; s < plan_.random_samples; ++s) {
    std::vector<Value> pt;
    pt.reserve(plan_.grid.size());
    for (auto [lo, hi] : plan_.grid) {
      auto span = static_cast<std::uint64_t>(hi - lo + 1);
      pt.push_back(Value::integer(lo + static_cast<std::int64_t>(rng() % span)));
    }
    points_.push_back(std::move(pt));
  }
  points_ready_ = true;
  return points_;
}

std::vector<std::vector<Value>> Checker::grid_points() const {
  std::vector<std::vector<Value>> pts;
  std::vector<std::int64_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == plan_.grid.size()) {
      std::vector<Value> pt;
      pt.reserve(cur.size());
      for (auto v : cur) pt.push_back(Value::integer(v));
      pts.push_back(std::move(pt));
      return;
    }
    for (std::int64_t v = plan_.grid[i].first; v <= plan_.grid[i].second; ++v) {
      cur.push_back(v);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return pts;
}

std::string Checker::point_string(std::span<const Value> args, const char* extra) const {
  std::string out = "(";
  const auto& params = art_.def->params;
  for (std::size_t i = 0; i < args.size() && i < params.size(); ++i) {
    if (i) out += ' ';
    out += params[i] + "=" + args[i].to_string();
  }
  if (extra) {
    out += ' ';
    out += extra;
  }
  out += ')';
  return out;
}

interp::DomainVerdict Checker::verdict(std::span<const Value> args) {
  std::string k = key_of(args);
  auto it = verdict_cache_.find(k);
  if (it != verdict_cache_.end()) return it->second;
  auto v = interp::find_witness_depth(ws_, art_.def->name, args, plan_.domain_cap, ctx_);
  verdict_cache_.emplace(std::move(k), v);
  return v;
}

std::optional<std::uint64_t> Checker::measure_of(std::span<const Value> args) {
  auto v = verdict(args);
  if (!v.in_domain) return std::nullopt;
  return v.depth;
}

Value Checker::l_eval_of(std::span<const Value> args) {
  std::string k = key_of(args);
  auto it = l_eval_cache_.find(k);
  if (it != l_eval_cache_.end()) return it->second;
  auto v = verdict(args);
  Value r = interp::eval_indexed_fn(ws_, art_.def->name,
                                    nat_value(v.in_domain ? v.depth : 0), args, ctx_);
  l_eval_cache_.emplace(std::move(k), r);
  return r;
}

Checker::Outcome Checker::eval_outcome(const std::function<Value()>& f) {
  try {
    return {false, f()};
  } catch (const RecursionSafetyCapError&) {
    return {true, Value::nil()};
  }
}

Checker::Outcome Checker::run_of(std::span<const Value> args) {
  std::string k = key_of(args);
  auto it = run_cache_.find(k);
  if (it != run_cache_.end()) return it->second;
  Outcome o = eval_outcome(
      [&] { return exec::run(ws_, art_.def->name, args, cfg_, ctx_.stats); });
  run_cache_.emplace(std::move(k), o);
  return o;
}

Value Checker::hooked_eval(const Expr& e, const std::map<std::string, Value>& env) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      return Value::integer(e.int_value);
    case Expr::Kind::BoolLit:
      return Value::boolean(e.bool_value);
    case Expr::Kind::SymLit:
      return Value::symbol(e.name);
    case Expr::Kind::NilLit:
      return Value::nil();
    case Expr::Kind::Var: {
      auto it = env.find(e.name);
      if (it == env.end()) throw Error("unbound variable in check: " + e.name);
      return it->second;
    }
    case Expr::Kind::Prim: {
      std::vector<Value> args;
      args.reserve(e.args.size());
      for (const auto& a : e.args) args.push_back(hooked_eval(*a, env));
      return apply_prim(e.op, args.data(), args.size());
    }
    case Expr::Kind::If:
      return hooked_eval(*e.test(), env).truthy() ? hooked_eval(*e.then_branch(), env)
                                                  : hooked_eval(*e.else_branch(), env);
    case Expr::Kind::And: {
      Value v = Value::truth();
      for (const auto& a : e.args) {
        v = hooked_eval(*a, env);
        if (!v.truthy()) return v;
      }
      return v;
    }
    case Expr::Kind::Or: {
      for (const auto& a : e.args) {
        Value v = hooked_eval(*a, env);
        if (v.truthy()) return v;
      }
      return Value::nil();
    }
    case Expr::Kind::Call:
      break;
  }

  std::vector<Value> args;
  args.reserve(e.args.size());
  for (const auto& a : e.args) args.push_back(hooked_eval(*a, env));

  const transform::Names& n = art_.tr.names;
  const std::string& f = e.name;
  if (f == n.l_fn) return l_eval_of(args);
  if (f == n.l_dom || f == n.exec_dom) return Value::boolean(verdict(args).in_domain);
  if (f == n.measure) {
    auto m = measure_of(args);
    return nat_value(m ? *m : 0);
  }
  if (f == "BIG") return Value::integer(cfg_.big);
  if (f == n.comp) {
    Value d = args.front();
    std::vector<Value> rest(args.begin() + 1, args.end());
    if (d.is_int() && d.as_int() == cfg_.big) {
      Outcome o = run_of(rest);
      if (o.capped) throw RecursionSafetyCapError(cfg_.safety_cap);
      return o.value;
    }
    return exec::comp_eval(ws_, art_.def->name, d, rest, cfg_, ctx_.stats);
  }
  if (f == art_.def->name) {
    Outcome o = run_of(args);
    if (o.capped) throw RecursionSafetyCapError(cfg_.safety_cap);
    return o.value;
  }
  if (f == n.fast) return exec::fast_eval(ws_, art_.def->name, args, cfg_, ctx_.stats);
  auto target = ws_.call_targets().find(f);
  if (target == ws_.call_targets().end()) throw Error("unknown function in check: " + f);
  return ws_.machine().call(target->second, args, ctx_.limits, ctx_.stats);
}

std::vector<CallSite> Checker::taken_branch_calls(std::span<const Value> point) {
  const FunctionDef& def = *art_.def;
  std::map<std::string, Value> env;
  for (std::size_t i = 0; i < def.params.size(); ++i) env[def.params[i]] = point[i];

  const Expr* e = def.body.get();
  while (e->kind == Expr::Kind::If)
    e = hooked_eval(*e->test(), env).truthy() ? e->then_branch().get() : e->else_branch().get();

  std::vector<CallSite> out;
  // Walks in evaluation order, honoring short-circuits; argument values of a
  // recursive call resolve inner recursive calls through l_eval.
  std::function<void(const Expr&)> walk = [&](const Expr& x) {
    switch (x.kind) {
      case Expr::Kind::If: {
        walk(*x.test());
        bool taken = hooked_eval(*x.test(), env).truthy();
        walk(taken ? *x.then_branch() : *x.else_branch());
        return;
      }
      case Expr::Kind::And:
      case Expr::Kind::Or: {
        for (std::size_t i = 0; i < x.args.size(); ++i) {
          walk(*x.args[i]);
          if (i + 1 == x.args.size()) break;
          bool truthy = hooked_eval(*x.args[i], env).truthy();
          if (x.kind == Expr::Kind::And ? !truthy : truthy) break;
        }
        return;
      }
      case Expr::Kind::Prim:
      case Expr::Kind::Call: {
        for (const auto& a : x.args) walk(*a);
        if (x.kind == Expr::Kind::Call && x.name == def.name) {
          CallSite site;
          site.call = &x;
          for (const auto& a : x.args) {
            ExprPtr lifted = transform::rewrite_self_calls(
                a, def.name, [&](std::vector<ExprPtr> args) {
                  return Expr::call(art_.tr.names.l_fn, std::move(args));
                });
            site.args.push_back(hooked_eval(*lifted, env));
          }
          out.push_back(std::move(site));
        }
        return;
      }
      default:
        return;
    }
  };
  walk(*e);
  return out;
}

void Checker::fill_tables() {
  if (tables_ready_) return;
  const auto& pts = points();
  auto depths = static_cast<std::size_t>(plan_.depth_max - plan_.depth_min + 1);
  dom_table_.assign(pts.size(), {});
  val_table_.assign(pts.size(), {});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    dom_table_[i].reserve(depths);
    val_table_[i].reserve(depths);
    for (std::uint64_t d = plan_.depth_min; d <= plan_.depth_max; ++d) {
      Value dv = nat_value(d);
      dom_table_[i].push_back(
          interp::eval_indexed_dom(ws_, art_.def->name, dv, pts[i], ctx_));
      val_table_[i].push_back(interp::eval_indexed_fn(ws_, art_.def->name, dv, pts[i], ctx_));
    }
  }
  tables_ready_ = true;
}

CheckReport Checker::check_determinism() {
  CheckReport report{"determinism", art_.def->name};
  fill_tables();
  const auto& pts = points();
  auto depths = dom_table_.empty() ? 0 : dom_table_[0].size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t d1 = 0; d1 < depths; ++d1) {
      for (std::size_t d2 = 0; d2 < depths; ++d2) {
        report.instances++;
        if (dom_table_[i][d1] && dom_table_[i][d2] &&
            val_table_[i][d1] != val_table_[i][d2]) {
          std::string extra = "d1=" + std::to_string(d1 + plan_.depth_min) +
                              " d2=" + std::to_string(d2 + plan_.depth_min);
          report.failures.push_back({point_string(pts[i], extra.c_str()),
                                     val_table_[i][d1].to_string() + " != " +
                                         val_table_[i][d2].to_string()});
        }
      }
    }
  }
  return report;
}

CheckReport Checker::check_stability() {
  CheckReport report{"stability", art_.def->name};
  fill_tables();
  const auto& pts = points();
  auto depths = dom_table_.empty() ? 0 : dom_table_[0].size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t d1 = 0; d1 < depths; ++d1) {
      for (std::size_t d2 = d1; d2 < depths; ++d2) {
        report.instances++;
        if (dom_table_[i][d1] && !dom_table_[i][d2]) {
          std::string extra = "d1=" + std::to_string(d1 + plan_.depth_min) +
                              " d2=" + std::to_string(d2 + plan_.depth_min);
          report.failures.push_back(
              {point_string(pts[i], extra.c_str()), "domain lost at the larger index"});
        }
      }
    }
  }
  return report;
}

CheckReport Checker::check_canonical_measure() {
  CheckReport report{"canonical-measure", art_.def->name};
  fill_tables();
  const auto& pts = points();
  auto depths = dom_table_.empty() ? 0 : dom_table_[0].size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::optional<std::uint64_t> table_witness;
    for (std::size_t d = 0; d < depths; ++d)
      if (dom_table_[i][d]) {
        table_witness = d + plan_.depth_min;
        break;
      }
    if (!table_witness) continue;  // nothing provable at these depths

    auto m = measure_of(pts[i]);
    report.instances++;
    if (!m || *m != *table_witness) {
      report.failures.push_back({point_string(pts[i]),
                                 "witness search disagrees with the depth table: search=" +
                                     (m ? std::to_string(*m) : std::string("none")) +
                                     " table=" + std::to_string(*table_witness)});
      continue;
    }
    // min-index at the witness must reproduce it
    BigInt mi = interp::min_index(ws_, art_.def->name, nat_value(*m), pts[i], ctx_);
    report.instances++;
    if (mi != *m)
      report.failures.push_back(
          {point_string(pts[i]), "min-index=" + mi.str() + " witness=" + std::to_string(*m)});

    Value canonical = interp::eval_indexed_fn(ws_, art_.def->name, nat_value(*m), pts[i], ctx_);
    for (std::size_t d = 0; d < depths; ++d) {
      if (!dom_table_[i][d]) continue;
      report.instances++;
      if (val_table_[i][d] != canonical) {
        std::string extra = "d=" + std::to_string(d + plan_.depth_min);
        report.failures.push_back({point_string(pts[i], extra.c_str()),
                                   val_table_[i][d].to_string() +
                                       " != " + canonical.to_string()});
      }
    }
  }
  return report;
}

std::vector<CheckReport> Checker::check_defining_equations() {
  const transform::DerivedEquations& eq = art_.tr.derived;
  CheckReport dom_report{"l-dom-equation", art_.def->name};
  CheckReport fn_report{"l-fn-equation", art_.def->name};
  CheckReport measure_report{"measure-equation", art_.def->name};
  CheckReport exported_report{"exported-equation", art_.def->name};

  const auto& params = art_.def->params;
  for (const auto& pt : points()) {
    std::map<std::string, Value> env;
    for (std::size_t i = 0; i < params.size(); ++i) env[params[i]] = pt[i];

    // Two sides agree when both produce the same value, or both blow the
    // safety cap (matching divergence at the bound).
    auto check_instance = [&](CheckReport& report, const std::function<Value()>& lhs,
                              const std::function<Value()>& rhs) {
      report.instances++;
      try {
        Outcome l = eval_outcome(lhs);
        Outcome r = eval_outcome(rhs);
        if (!(l == r))
          report.failures.push_back(
              {point_string(pt), "lhs=" + l.to_string() + " rhs=" + r.to_string()});
      } catch (const Error& e) {
        report.failures.push_back({point_string(pt), std::string("error: ") + e.what()});
      }
    };

    check_instance(
        dom_report, [&] { return Value::boolean(verdict(pt).in_domain); },
        [&] { return Value::boolean(hooked_eval(*eq.l_dom_equation.rhs, env).truthy()); });
    check_instance(
        fn_report, [&] { return l_eval_of(pt); },
        [&] { return hooked_eval(*eq.l_fn_equation.rhs, env); });
    check_instance(
        measure_report,
        [&] {
          auto m = measure_of(pt);
          return nat_value(m ? *m : 0);
        },
        [&] { return hooked_eval(*eq.measure_equation.rhs, env); });
    check_instance(
        exported_report,
        [&] {
          Outcome o = run_of(pt);
          if (o.capped) throw RecursionSafetyCapError(cfg_.safety_cap);
          return o.value;
        },
        [&] { return hooked_eval(*eq.exported_equation.rhs, env); });
  }
  return {dom_report, fn_report, measure_report, exported_report};
}

CheckReport Checker::check_measure_decrease() {
  CheckReport report{"measure-decrease", art_.def->name};
  for (const auto& pt : points()) {
    report.instances++;
    if (!verdict(pt).in_domain) continue;  // vacuous off-domain
    std::uint64_t mp = *measure_of(pt);
    try {
      for (const CallSite& site : taken_branch_calls(pt)) {
        auto mq = measure_of(site.args);
        if (!mq) {
          report.failures.push_back({point_string(pt),
                                     "recursive call at (" + key_of(site.args) +
                                         ") leaves the bounded domain"});
        } else if (!(*mq < mp)) {
          report.failures.push_back(
              {point_string(pt), "measure " + std::to_string(*mq) + " at call args (" +
                                     key_of(site.args) + ") not below " + std::to_string(mp)});
        }
      }
    } catch (const Error& e) {
      report.failures.push_back({point_string(pt), std::string("error: ") + e.what()});
    }
  }
  return report;
}

CheckReport Checker::check_exec_equivalence() {
  CheckReport report{"exec-equivalence", art_.def->name};
  for (const auto& pt : points()) {
    report.instances++;
    try {
      if (verdict(pt).in_domain) {
        Outcome r = run_of(pt);
        Value f = exec::fast_eval(ws_, art_.def->name, pt, cfg_, ctx_.stats);
        Value l = l_eval_of(pt);
        if (r.capped || r.value != f || f != l)
          report.failures.push_back({point_string(pt), "run=" + r.to_string() + " fast=" +
                                                           f.to_string() + " logic=" +
                                                           l.to_string()});
      } else {
        Value w = exec::run_wrapper(ws_, art_.def->name, pt, cfg_, ctx_.stats);
        Value dflt = ws_.machine().call(art_.ck_default, pt, ctx_.limits, ctx_.stats);
        if (w != dflt)
          report.failures.push_back({point_string(pt), "wrapper=" + w.to_string() +
                                                           " default=" + dflt.to_string()});
      }
    } catch (const Error& e) {
      report.failures.push_back({point_string(pt), std::string("error: ") + e.what()});
    }
  }
  return report;
}

CheckReport Checker::check_measure_oracle() {
  CheckReport report{"measure-oracle", art_.def->name};
  const auto& params = art_.def->params;
  for (const auto& pt : grid_points()) {
    report.instances++;
    try {
      // Independent route: plain ascending scan, one index at a time.
      std::optional<std::uint64_t> linear;
      for (std::uint64_t w = 0; w <= plan_.domain_cap; ++w) {
        if (interp::eval_indexed_dom(ws_, art_.def->name, nat_value(w), pt, ctx_)) {
          linear = w;
          break;
        }
      }
      auto v = verdict(pt);
      if (!linear) {
        if (v.in_domain)
          report.failures.push_back(
              {point_string(pt), "search found a witness the linear scan did not"});
        continue;
      }
      if (!v.in_domain || v.depth != *linear) {
        report.failures.push_back({point_string(pt),
                                   "linear=" + std::to_string(*linear) + " search=" +
                                       (v.in_domain ? std::to_string(v.depth) : "none")});
        continue;
      }
      BigInt mi = interp::min_index(ws_, art_.def->name, nat_value(*linear), pt, ctx_);
      if (mi != *linear) {
        report.failures.push_back(
            {point_string(pt), "min-index=" + mi.str() + " linear=" + std::to_string(*linear)});
        continue;
      }
      std::map<std::string, Value> env;
      for (std::size_t i = 0; i < params.size(); ++i) env[params[i]] = pt[i];
      Value eq = hooked_eval(*art_.tr.derived.measure_equation.rhs, env);
      if (!eq.is_int() || eq.as_int() != *linear)
        report.failures.push_back({point_string(pt), "equation=" + eq.to_string() +
                                                         " linear=" +
                                                         std::to_string(*linear)});
    } catch (const Error& e) {
      report.failures.push_back({point_string(pt), std::string("error: ") + e.what()});
    }
  }
  return report;
}

std::vector<CheckReport> Checker::run_core() {
  std::vector<CheckReport> reports;
  reports.push_back(check_determinism());
  reports.push_back(check_stability());
  reports.push_back(check_canonical_measure());
  for (auto& r : check_defining_equations()) reports.push_back(std::move(r));
  reports.push_back(check_measure_decrease());
  reports.push_back(check_exec_equivalence());
  return reports;
}

std::string machine_line(const CheckReport& report) {
  std::ostringstream out;
  out << "check name=" << report.name << " function=" << report.function
      << " instances=" << report.instances << " failures=" << report.failures.size()
      << " status=" << (report.passed() ? "pass" : "fail");
  return out.str();
}

}  // namespace defung::verify
