#ifndef DEFUNG_INTERP_H
#define DEFUNG_INTERP_H

#include "defung/workspace.h"

#include <map>
#include <optional>

namespace defung::interp {

/// Three-valued domain answer: membership is only semi-decidable, so the
/// negative verdict carries the exhausted search cap.
struct DomainVerdict {
  bool in_domain = false;
  std::uint64_t depth = 0;  // least witness when in_domain, else the cap

  friend bool operator==(const DomainVerdict& a, const DomainVerdict& b) {
    return a.in_domain == b.in_domain && a.depth == b.depth;
  }
};

struct EvalContext {
  vm::Limits limits;
  vm::EvalStats* stats = nullptr;
};

/// Applicative-order evaluation of an expression under an environment.
/// Calls to source functions run their plain recursion (depth-capped);
/// generated definitions are callable by name as well.
Value eval_expr(const Workspace& ws, const std::map<std::string, Value>& env, const Expr& expr,
                const EvalContext& ctx = {});

/// iF(d, args): total in d, the index strictly decreases.
Value eval_indexed_fn(const Workspace& ws, const std::string& fname, const Value& d,
                      std::span<const Value> args, const EvalContext& ctx = {});

/// iDom(d, args).
bool eval_indexed_dom(const Workspace& ws, const std::string& fname, const Value& d,
                      std::span<const Value> args, const EvalContext& ctx = {});

/// Least witness w <= cap with iDom(w, args), by ascending search; stability
/// of the indexed domain makes the first hit the least one.
DomainVerdict find_witness_depth(const Workspace& ws, const std::string& fname,
                                 std::span<const Value> args, std::uint64_t cap,
                                 const EvalContext& ctx = {});

/// The i<f>-min-index recursion, run as generated.
BigInt min_index(const Workspace& ws, const std::string& fname, const Value& d,
                 std::span<const Value> args, const EvalContext& ctx = {});

/// Least index at which the domain holds; empty when no witness <= cap.
std::optional<std::uint64_t> measure(const Workspace& ws, const std::string& fname,
                                     std::span<const Value> args, std::uint64_t cap,
                                     const EvalContext& ctx = {});

/// iF at the measure; off domain this is iF(0, args), the default.
Value l_eval(const Workspace& ws, const std::string& fname, std::span<const Value> args,
             std::uint64_t cap, const EvalContext& ctx = {});

/// Same verdict as find_witness_depth.
DomainVerdict l_dom(const Workspace& ws, const std::string& fname, std::span<const Value> args,
                    std::uint64_t cap, const EvalContext& ctx = {});

}  // namespace defung::interp

#endif
