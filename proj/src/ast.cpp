#include "defung/ast.h"

#include <array>

namespace defung {

namespace {

constexpr std::array<PrimInfo, 19> kPrims = {{
    {PrimOp::Add, "+", 2},
    {PrimOp::Sub, "-", 2},
    {PrimOp::Mul, "*", 2},
    {PrimOp::Inc, "1+", 1},
    {PrimOp::Dec, "1-", 1},
    {PrimOp::NumEq, "=", 2},
    {PrimOp::Less, "<", 2},
    {PrimOp::LessEq, "<=", 2},
    {PrimOp::Zp, "zp", 1},
    {PrimOp::Nfix, "nfix", 1},
    {PrimOp::Max, "max", 2},
    {PrimOp::Not, "not", 1},
    {PrimOp::Consp, "consp", 1},
    {PrimOp::Car, "car", 1},
    {PrimOp::Cdr, "cdr", 1},
    {PrimOp::Cons, "cons", 2},
    {PrimOp::Equal, "equal", 2},
    {PrimOp::Natp, "natp", 1},
    {PrimOp::Integerp, "integerp", 1},
}};

// The source logic's completion convention: non-integers count as 0 in
// arithmetic and comparisons.
const BigInt& ifix(const Value& v) {
  static const BigInt zero = 0;
  return v.is_int() ? v.as_int() : zero;
}

}  // namespace

const PrimInfo* prim_by_name(const std::string& name) {
  for (const auto& p : kPrims)
    if (name == p.name) return &p;
  return nullptr;
}

const PrimInfo& prim_info(PrimOp op) { return kPrims[static_cast<std::size_t>(op)]; }

Value apply_prim(PrimOp op, const Value* a, std::size_t n) {
  (void)n;
  switch (op) {
    case PrimOp::Add:
      return Value::integer(ifix(a[0]) + ifix(a[1]));
    case PrimOp::Sub:
      return Value::integer(ifix(a[0]) - ifix(a[1]));
    case PrimOp::Mul:
      return Value::integer(ifix(a[0]) * ifix(a[1]));
    case PrimOp::Inc:
      return Value::integer(ifix(a[0]) + 1);
    case PrimOp::Dec:
      return Value::integer(ifix(a[0]) - 1);
    case PrimOp::NumEq:
      // = is equal in the logic; its numeric guard has no runtime meaning here.
      return Value::boolean(a[0] == a[1]);
    case PrimOp::Less:
      return Value::boolean(ifix(a[0]) < ifix(a[1]));
    case PrimOp::LessEq:
      return Value::boolean(ifix(a[0]) <= ifix(a[1]));
    case PrimOp::Zp:
      // zp is true unless the argument is a positive integer.
      return Value::boolean(!(a[0].is_int() && a[0].as_int() > 0));
    case PrimOp::Nfix:
      return a[0].is_natural() ? a[0] : Value::integer(0);
    case PrimOp::Max:
      // (max x y) = (if (< y x) x y)
      return ifix(a[1]) < ifix(a[0]) ? a[0] : a[1];
    case PrimOp::Not:
      return Value::boolean(!a[0].truthy());
    case PrimOp::Consp:
      return Value::boolean(a[0].is_pair());
    case PrimOp::Car:
      if (!a[0].is_pair()) throw DynamicTypeError("car of non-pair: " + a[0].to_string());
      return a[0].car();
    case PrimOp::Cdr:
      if (!a[0].is_pair()) throw DynamicTypeError("cdr of non-pair: " + a[0].to_string());
      return a[0].cdr();
    case PrimOp::Cons:
      return Value::cons(a[0], a[1]);
    case PrimOp::Equal:
      return Value::boolean(a[0] == a[1]);
    case PrimOp::Natp:
      return Value::boolean(a[0].is_natural());
    case PrimOp::Integerp:
      return Value::boolean(a[0].is_int());
  }
  throw DynamicTypeError("unknown primitive");
}

namespace {
ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}  // namespace

ExprPtr Expr::int_lit(BigInt v, SourceLoc loc) {
  Expr e;
  e.kind = Kind::IntLit;
  e.int_value = std::move(v);
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::int_lit(long long v, SourceLoc loc) { return int_lit(BigInt(v), loc); }

ExprPtr Expr::bool_lit(bool v, SourceLoc loc) {
  Expr e;
  e.kind = Kind::BoolLit;
  e.bool_value = v;
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::sym_lit(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = Kind::SymLit;
  e.name = std::move(name);
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::nil_lit(SourceLoc loc) {
  Expr e;
  e.kind = Kind::NilLit;
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::var(std::string name, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(name);
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::prim(PrimOp op, std::vector<ExprPtr> args, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Prim;
  e.op = op;
  e.args = std::move(args);
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::if_(ExprPtr test, ExprPtr then_e, ExprPtr else_e, SourceLoc loc) {
  Expr e;
  e.kind = Kind::If;
  e.args = {std::move(test), std::move(then_e), std::move(else_e)};
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::and_(std::vector<ExprPtr> args, SourceLoc loc) {
  Expr e;
  e.kind = Kind::And;
  e.args = std::move(args);
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::or_(std::vector<ExprPtr> args, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Or;
  e.args = std::move(args);
  e.loc = loc;
  return make(std::move(e));
}

ExprPtr Expr::call(std::string fn, std::vector<ExprPtr> args, SourceLoc loc) {
  Expr e;
  e.kind = Kind::Call;
  e.name = std::move(fn);
  e.args = std::move(args);
  e.loc = loc;
  return make(std::move(e));
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::IntLit:
      return a.int_value == b.int_value;
    case Expr::Kind::BoolLit:
      return a.bool_value == b.bool_value;
    case Expr::Kind::SymLit:
    case Expr::Kind::Var:
      return a.name == b.name;
    case Expr::Kind::NilLit:
      return true;
    case Expr::Kind::Prim:
      if (a.op != b.op) return false;
      break;
    case Expr::Kind::Call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::If:
    case Expr::Kind::And:
    case Expr::Kind::Or:
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!expr_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

bool contains_call(const Expr& e, const std::string& fname) {
  if (e.kind == Expr::Kind::Call && e.name == fname) return true;
  for (const auto& arg : e.args)
    if (contains_call(*arg, fname)) return true;
  return false;
}

int count_calls(const Expr& e, const std::string& fname) {
  int n = (e.kind == Expr::Kind::Call && e.name == fname) ? 1 : 0;
  for (const auto& arg : e.args) n += count_calls(*arg, fname);
  return n;
}

void walk_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const auto& arg : e.args) walk_expr(*arg, fn);
}

const FunctionDef* Program::find(const std::string& name) const {
  for (const auto& d : definitions)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace defung
