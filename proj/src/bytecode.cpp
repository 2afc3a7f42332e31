#include "defung/bytecode.h"

#include <algorithm>
#include <limits>

namespace defung::vm {

namespace {

bool fits_i32(const BigInt& v) {
  return v >= std::numeric_limits<std::int32_t>::min() &&
         v <= std::numeric_limits<std::int32_t>::max();
}

class Compiler {
 public:
  Compiler(const std::vector<std::string>& params, const CompileEnv& env)
      : params_(params), env_(env) {}

  Chunk finish(const std::string& name, const Expr& body) {
    emit_expr(body);
    push_instr({Op::Ret}, nullptr);
    Chunk ch;
    ch.name = name;
    ch.arity = static_cast<std::uint32_t>(params_.size());
    ch.max_stack = max_depth_ + 1;
    ch.code = std::move(code_);
    ch.consts = std::move(consts_);
    ch.src = std::move(src_);
    return ch;
  }

 private:
  const std::vector<std::string>& params_;
  const CompileEnv& env_;
  std::vector<Instr> code_;
  std::vector<Value> consts_;
  std::vector<const Expr*> src_;
  std::uint32_t depth_ = 0;
  std::uint32_t max_depth_ = 0;

  void push_instr(Instr in, const Expr* src) {
    code_.push_back(in);
    src_.push_back(src);
  }

  std::int32_t here() const { return static_cast<std::int32_t>(code_.size()); }

  std::size_t emit_jump(Op op, const Expr* src = nullptr) {
    push_instr({op}, src);
    return code_.size() - 1;
  }

  void patch(std::size_t at) { code_[at].a = here(); }
  void patch_b(std::size_t at) { code_[at].b = here(); }

  void pushed() {
    if (++depth_ > max_depth_) max_depth_ = depth_;
  }
  void popped(std::uint32_t n) { depth_ -= n; }

  int slot_of(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (params_[i] == name) return static_cast<int>(i);
    throw Error("unbound variable in compiled body: " + name);
  }

  std::int32_t add_const(Value v) {
    consts_.push_back(std::move(v));
    return static_cast<std::int32_t>(consts_.size() - 1);
  }

  /// If `test` has one of the fusable shapes, emits a branch that falls
  /// through on true and jumps to a patchable target on false. Returns the
  /// patch index, or npos when not fusable.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t try_fused_branch(const Expr& test) {
    if (test.kind != Expr::Kind::Prim) return npos;
    if (test.op == PrimOp::Zp && test.args[0]->kind == Expr::Kind::Var) {
      Instr in{Op::BrNotZp};
      in.s = static_cast<std::uint8_t>(slot_of(test.args[0]->name));
      push_instr(in, &test);
      return code_.size() - 1;
    }
    if (test.op != PrimOp::NumEq && test.op != PrimOp::Less && test.op != PrimOp::LessEq)
      return npos;
    const Expr& lhs = *test.args[0];
    const Expr& rhs = *test.args[1];
    auto fused = [&](const Expr& var, const Expr& lit, bool var_left) -> std::size_t {
      if (!fits_i32(lit.int_value)) return npos;
      Instr in{Op::BrCmp};
      in.s = static_cast<std::uint8_t>(slot_of(var.name));
      in.a = static_cast<std::int32_t>(lit.int_value);
      switch (test.op) {
        case PrimOp::NumEq:
          in.cmp = Cmp::EqSI;
          break;
        case PrimOp::Less:
          in.cmp = var_left ? Cmp::LtSI : Cmp::LtIS;
          break;
        default:
          in.cmp = var_left ? Cmp::LeSI : Cmp::LeIS;
          break;
      }
      push_instr(in, &test);
      return code_.size() - 1;
    };
    if (lhs.kind == Expr::Kind::Var && rhs.kind == Expr::Kind::IntLit &&
        params_.size() <= 255 && slot_of(lhs.name) >= 0)
      return fused(lhs, rhs, true);
    if (lhs.kind == Expr::Kind::IntLit && rhs.kind == Expr::Kind::Var)
      return fused(rhs, lhs, false);
    return npos;
  }

  void emit_expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit: {
        Instr in{Op::LoadImm};
        if (fits_i32(e.int_value)) {
          in.a = static_cast<std::int32_t>(e.int_value);
        } else {
          in.op = Op::LoadConst;
          in.a = add_const(Value::integer(e.int_value));
        }
        push_instr(in, nullptr);
        pushed();
        return;
      }
      case Expr::Kind::BoolLit:
        push_instr({e.bool_value ? Op::LoadTrue : Op::LoadNil}, nullptr);
        pushed();
        return;
      case Expr::Kind::NilLit:
        push_instr({Op::LoadNil}, nullptr);
        pushed();
        return;
      case Expr::Kind::SymLit: {
        Instr in{Op::LoadConst};
        in.a = add_const(Value::symbol(e.name));
        push_instr(in, nullptr);
        pushed();
        return;
      }
      case Expr::Kind::Var: {
        Instr in{Op::LoadSlot};
        in.s = static_cast<std::uint8_t>(slot_of(e.name));
        push_instr(in, nullptr);
        pushed();
        return;
      }
      case Expr::Kind::Prim: {
        if (e.args.size() == 1 && e.args[0]->kind == Expr::Kind::Var &&
            (e.op == PrimOp::Inc || e.op == PrimOp::Dec)) {
          Instr in{e.op == PrimOp::Inc ? Op::IncSlot : Op::DecSlot};
          in.s = static_cast<std::uint8_t>(slot_of(e.args[0]->name));
          push_instr(in, &e);
          pushed();
          return;
        }
        for (const auto& a : e.args) emit_expr(*a);
        Instr in{Op::Prim};
        in.a = static_cast<std::int32_t>(e.op);
        push_instr(in, &e);
        popped(static_cast<std::uint32_t>(e.args.size()));
        pushed();
        return;
      }
      case Expr::Kind::If: {
        std::size_t brf = try_fused_branch(*e.test());
        if (brf == npos) {
          emit_expr(*e.test());
          popped(1);
          brf = emit_jump(Op::JumpIfNil, e.test().get());
        }
        std::uint32_t d0 = depth_;
        emit_expr(*e.then_branch());
        std::size_t jend = emit_jump(Op::Jump);
        depth_ = d0;
        if (code_[brf].op == Op::JumpIfNil || code_[brf].op == Op::Jump)
          patch(brf);
        else
          patch_b(brf);
        emit_expr(*e.else_branch());
        patch(jend);
        return;
      }
      case Expr::Kind::And:
      case Expr::Kind::Or: {
        if (e.args.empty()) {
          push_instr({e.kind == Expr::Kind::And ? Op::LoadTrue : Op::LoadNil}, nullptr);
          pushed();
          return;
        }
        Op keep = e.kind == Expr::Kind::And ? Op::JNilKeep : Op::JTrueKeep;
        std::vector<std::size_t> exits;
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          emit_expr(*e.args[i]);
          if (i + 1 < e.args.size()) {
            exits.push_back(emit_jump(keep));
            popped(1);
          }
        }
        for (std::size_t at : exits) patch(at);
        return;
      }
      case Expr::Kind::Call: {
        if (e.name == env_.domcheck_marker && !env_.domcheck_marker.empty()) {
          Instr in{Op::DomCheck};
          in.a = static_cast<std::int32_t>(env_.domcheck_meta);
          push_instr(in, &e);
          pushed();
          return;
        }
        for (const auto& a : e.args) emit_expr(*a);
        auto it = env_.fn_indices.find(e.name);
        if (it == env_.fn_indices.end())
          throw Error("call to unknown function in compiled body: " + e.name);
        Instr in{Op::Call};
        in.a = static_cast<std::int32_t>(it->second);
        in.b = static_cast<std::int32_t>(e.args.size());
        push_instr(in, &e);
        popped(static_cast<std::uint32_t>(e.args.size()));
        pushed();
        return;
      }
    }
  }
};

}  // namespace

Chunk compile_chunk(const std::string& name, const std::vector<std::string>& params,
                    const Expr& body, const CompileEnv& env) {
  if (params.size() > 255) throw Error("too many parameters: " + name);
  Compiler c(params, env);
  return c.finish(name, body);
}

}  // namespace defung::vm
