#ifndef DEFUNG_AST_H
#define DEFUNG_AST_H

#include "defung/errors.h"
#include "defung/value.h"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace defung {

/// The fixed primitive table. and/or are expression forms, not primitives.
enum class PrimOp : std::uint8_t {
  Add,       // +
  Sub,       // -
  Mul,       // *
  Inc,       // 1+
  Dec,       // 1-
  NumEq,     // =
  Less,      // <
  LessEq,    // <=
  Zp,        // zp
  Nfix,      // nfix
  Max,       // max
  Not,       // not
  Consp,     // consp
  Car,       // car
  Cdr,       // cdr
  Cons,      // cons
  Equal,     // equal
  Natp,      // natp
  Integerp,  // integerp
};

struct PrimInfo {
  PrimOp op;
  const char* name;
  int arity;
};

/// Table lookup by surface name; nullptr when unknown.
const PrimInfo* prim_by_name(const std::string& name);
const PrimInfo& prim_info(PrimOp op);

/// Applies a primitive to already-evaluated arguments. Shared by every
/// evaluator in the project so the semantics cannot drift apart.
Value apply_prim(PrimOp op, const Value* args, std::size_t n);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression AST of the surface language. One node type with a kind tag;
/// If uses args[0..2] as test/then/else.
struct Expr {
  enum class Kind : std::uint8_t { IntLit, BoolLit, SymLit, NilLit, Var, Prim, If, And, Or, Call };

  Kind kind;
  BigInt int_value;            // IntLit
  bool bool_value = false;     // BoolLit
  std::string name;            // SymLit, Var, Call
  PrimOp op = PrimOp::Add;     // Prim
  std::vector<ExprPtr> args;   // Prim, If, And, Or, Call
  SourceLoc loc;

  const ExprPtr& test() const { return args[0]; }
  const ExprPtr& then_branch() const { return args[1]; }
  const ExprPtr& else_branch() const { return args[2]; }

  static ExprPtr int_lit(BigInt v, SourceLoc loc = {});
  static ExprPtr int_lit(long long v, SourceLoc loc = {});
  static ExprPtr bool_lit(bool v, SourceLoc loc = {});
  static ExprPtr sym_lit(std::string name, SourceLoc loc = {});
  static ExprPtr nil_lit(SourceLoc loc = {});
  static ExprPtr var(std::string name, SourceLoc loc = {});
  static ExprPtr prim(PrimOp op, std::vector<ExprPtr> args, SourceLoc loc = {});
  static ExprPtr if_(ExprPtr test, ExprPtr then_e, ExprPtr else_e, SourceLoc loc = {});
  static ExprPtr and_(std::vector<ExprPtr> args, SourceLoc loc = {});
  static ExprPtr or_(std::vector<ExprPtr> args, SourceLoc loc = {});
  static ExprPtr call(std::string fn, std::vector<ExprPtr> args, SourceLoc loc = {});
};

bool expr_equal(const Expr& a, const Expr& b);
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) { return expr_equal(*a, *b); }

/// True iff some Call to `fname` occurs anywhere in `e`.
bool contains_call(const Expr& e, const std::string& fname);

/// Number of Calls to `fname` in `e`.
int count_calls(const Expr& e, const std::string& fname);

/// Visits every node, parents before children.
void walk_expr(const Expr& e, const std::function<void(const Expr&)>& fn);

/// Per-parameter/result predicate names from an xargs :signature.
struct Signature {
  std::vector<std::string> param_preds;
  std::string result_pred;
};

/// A surface definition introduced by def::ung plus its option set.
struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
  ExprPtr default_value;  // null when the transform picks one
  bool indexed_execution = true;
  bool non_executable = false;
  std::string wrapper_name;  // empty when absent
  std::optional<Signature> signature;
  SourceLoc loc;
};

/// A generated (or printable) plain definition: name, params, body.
struct Definition {
  std::string name;
  std::vector<std::string> params;
  ExprPtr body;
};

/// Well-founded relations available to def::total.
enum class WfRelation : std::uint8_t { NaturalLess, LexicographicLess };

/// A def::total form: measure, relation and totality predicate for a
/// previously defined function.
struct TotalitySpec {
  std::string fname;
  std::vector<std::string> params;
  std::vector<ExprPtr> measure;  // one entry per lexicographic component
  WfRelation relation = WfRelation::NaturalLess;
  ExprPtr predicate;
  std::string theorem_name;
  SourceLoc loc;
};

struct Program {
  std::vector<FunctionDef> definitions;
  std::vector<TotalitySpec> totality_specs;

  const FunctionDef* find(const std::string& name) const;
};

}  // namespace defung

#endif
