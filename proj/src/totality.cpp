#include "defung/totality.h"

namespace defung::totality {

namespace {

BigInt nfix(const Value& v) { return v.is_natural() ? v.as_int() : BigInt(0); }

}  // namespace

bool lex_less(std::span<const Value> a, std::span<const Value> b) {
  if (a.size() != b.size()) throw Error("lexicographic tuples differ in arity");
  for (std::size_t i = 0; i < a.size(); ++i) {
    BigInt x = nfix(a[i]);
    BigInt y = nfix(b[i]);
    if (x < y) return true;
    if (x > y) return false;
  }
  return false;
}

bool measure_less(WfRelation relation, std::span<const Value> a, std::span<const Value> b) {
  if (relation == WfRelation::NaturalLess) {
    if (a.size() != 1 || b.size() != 1) throw Error("scalar relation expects scalar measures");
    return nfix(a[0]) < nfix(b[0]);
  }
  return lex_less(a, b);
}

verify::CheckReport check_total(const Workspace& ws, const TotalitySpec& spec,
                                const verify::CheckPlan& plan, const exec::ExecConfig& cfg) {
  verify::Checker checker(ws, spec.fname, plan, cfg);
  const FunctionDef& def = *ws.artifacts(spec.fname).def;

  verify::CheckReport report{spec.theorem_name, spec.fname};

  interp::EvalContext ctx;
  ctx.limits = {plan.safety_cap, plan.domain_cap};
  auto eval_at = [&](const ExprPtr& e, std::span<const Value> pt) {
    std::map<std::string, Value> env;
    for (std::size_t i = 0; i < def.params.size(); ++i) env[def.params[i]] = pt[i];
    return interp::eval_expr(ws, env, *e, ctx);
  };
  auto measure_at = [&](std::span<const Value> pt) {
    std::vector<Value> components;
    components.reserve(spec.measure.size());
    for (const auto& m : spec.measure) components.push_back(eval_at(m, pt));
    return components;
  };
  auto point_str = [&](std::span<const Value> pt) {
    std::string out = "(";
    for (std::size_t i = 0; i < pt.size(); ++i) {
      if (i) out += ' ';
      out += def.params[i] + "=" + pt[i].to_string();
    }
    return out + ")";
  };

  for (const auto& pt : checker.points()) {
    report.instances++;
    try {
      if (!eval_at(spec.predicate, pt).truthy()) continue;  // vacuous

      if (!checker.verdict(pt).in_domain) {
        report.failures.push_back(
            {point_str(pt), "predicate holds but the bounded domain check fails"});
        continue;
      }
      auto mp = measure_at(pt);
      for (const verify::CallSite& site : checker.taken_branch_calls(pt)) {
        if (!eval_at(spec.predicate, site.args).truthy()) {
          report.failures.push_back(
              {point_str(pt), "recursive call " + point_str(site.args) +
                                  " escapes the totality predicate"});
          continue;
        }
        auto mq = measure_at(site.args);
        if (!measure_less(spec.relation, mq, mp))
          report.failures.push_back({point_str(pt), "measure does not decrease into " +
                                                        point_str(site.args)});
      }
    } catch (const Error& e) {
      report.failures.push_back({point_str(pt), std::string("error: ") + e.what()});
    }
  }
  return report;
}

}  // namespace defung::totality
