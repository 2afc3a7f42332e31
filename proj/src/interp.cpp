#include "defung/interp.h"

#include <algorithm>

namespace defung::interp {

namespace {

std::vector<Value> with_index(const Value& d, std::span<const Value> args) {
  std::vector<Value> full;
  full.reserve(args.size() + 1);
  full.push_back(d);
  full.insert(full.end(), args.begin(), args.end());
  return full;
}

bool dom_at(const Workspace& ws, const FnArtifacts& art, std::uint64_t w,
            std::span<const Value> args, const EvalContext& ctx) {
  auto full = with_index(Value::integer(static_cast<long long>(w)), args);
  return ws.machine().call(art.ck_indexed_dom, full, ctx.limits, ctx.stats).truthy();
}

}  // namespace

Value eval_expr(const Workspace& ws, const std::map<std::string, Value>& env, const Expr& expr,
                const EvalContext& ctx) {
  std::vector<std::string> params;
  std::vector<Value> args;
  for (const auto& [name, value] : env) {
    params.push_back(name);
    args.push_back(value);
  }
  vm::CompileEnv cenv;
  cenv.fn_indices = ws.call_targets();
  vm::Chunk chunk = vm::compile_chunk("%expr", params, expr, cenv);
  return ws.machine().call_chunk(chunk, args, ctx.limits, ctx.stats);
}

Value eval_indexed_fn(const Workspace& ws, const std::string& fname, const Value& d,
                      std::span<const Value> args, const EvalContext& ctx) {
  auto full = with_index(d, args);
  return ws.machine().call(ws.artifacts(fname).ck_indexed_fn, full, ctx.limits, ctx.stats);
}

bool eval_indexed_dom(const Workspace& ws, const std::string& fname, const Value& d,
                      std::span<const Value> args, const EvalContext& ctx) {
  auto full = with_index(d, args);
  return ws.machine().call(ws.artifacts(fname).ck_indexed_dom, full, ctx.limits, ctx.stats)
      .truthy();
}

DomainVerdict find_witness_depth(const Workspace& ws, const std::string& fname,
                                 std::span<const Value> args, std::uint64_t cap,
                                 const EvalContext& ctx) {
  const FnArtifacts& art = ws.artifacts(fname);
  if (dom_at(ws, art, 0, args, ctx)) return {true, 0};
  if (cap == 0) return {false, 0};

  // Ascending search, stepping geometrically and then refining to the least
  // witness by bisection; stability of iDom in the index justifies both the
  // early stop and the refinement.
  std::uint64_t lo = 1;  // smallest depth not yet ruled out
  std::uint64_t probe = 1;
  std::uint64_t hit = 0;
  bool found = false;
  while (true) {
    if (dom_at(ws, art, probe, args, ctx)) {
      hit = probe;
      found = true;
      break;
    }
    lo = probe + 1;
    if (probe >= cap) break;
    probe = probe > cap / 2 ? cap : probe * 2;
  }
  if (!found) return {false, cap};
  while (lo < hit) {
    std::uint64_t mid = lo + (hit - lo) / 2;
    if (dom_at(ws, art, mid, args, ctx))
      hit = mid;
    else
      lo = mid + 1;
  }
  return {true, hit};
}

BigInt min_index(const Workspace& ws, const std::string& fname, const Value& d,
                 std::span<const Value> args, const EvalContext& ctx) {
  auto full = with_index(d, args);
  Value r = ws.machine().call(ws.artifacts(fname).ck_min_index, full, ctx.limits, ctx.stats);
  return r.as_int();
}

std::optional<std::uint64_t> measure(const Workspace& ws, const std::string& fname,
                                     std::span<const Value> args, std::uint64_t cap,
                                     const EvalContext& ctx) {
  DomainVerdict v = find_witness_depth(ws, fname, args, cap, ctx);
  if (!v.in_domain) return std::nullopt;
  return v.depth;
}

Value l_eval(const Workspace& ws, const std::string& fname, std::span<const Value> args,
             std::uint64_t cap, const EvalContext& ctx) {
  DomainVerdict v = find_witness_depth(ws, fname, args, cap, ctx);
  std::uint64_t w = v.in_domain ? v.depth : 0;
  return eval_indexed_fn(ws, fname, Value::integer(static_cast<long long>(w)), args, ctx);
}

DomainVerdict l_dom(const Workspace& ws, const std::string& fname, std::span<const Value> args,
                    std::uint64_t cap, const EvalContext& ctx) {
  return find_witness_depth(ws, fname, args, cap, ctx);
}

}  // namespace defung::interp
