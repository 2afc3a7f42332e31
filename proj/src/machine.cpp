#include "defung/machine.h"

#include "defung/printer.h"

#include <limits>

namespace defung::vm {

std::uint32_t Machine::add_chunk(Chunk ch) {
  auto idx = static_cast<std::uint32_t>(chunks_.size());
  if (index_.count(ch.name)) throw Error("duplicate chunk name: " + ch.name);
  index_[ch.name] = idx;
  chunks_.push_back(std::move(ch));
  return idx;
}

std::optional<std::uint32_t> Machine::find_chunk(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

enum SlotTag : std::uint8_t { kNil, kTrue, kInt, kHeap };

struct Slot {
  std::int64_t i;
  std::uint8_t tag;
};

struct Frame {
  std::uint32_t fn;
  std::uint32_t ip;
  std::uint32_t base;
};

constexpr std::uint32_t kEntryFn = 0xffffffffu;

class Execution {
 public:
  Execution(const Machine& m, const Limits& limits, EvalStats* stats)
      : m_(m), limits_(limits), stats_(stats ? *stats : scratch_) {}

  Value call(std::uint32_t fn, std::span<const Value> args);
  Value call_entry(const Chunk& entry, std::span<const Value> args);

 private:
  const Machine& m_;
  const Limits& limits_;
  const Chunk* entry_ = nullptr;
  EvalStats scratch_;
  EvalStats& stats_;

  const Chunk* chunk_at(std::uint32_t fn) const {
    return fn == kEntryFn ? entry_ : &m_.chunk(fn);
  }

  std::vector<Slot> stack_;
  std::vector<Frame> frames_;
  std::vector<Value> heap_;
  std::size_t sp_ = 0;

  Slot to_slot(const Value& v) {
    switch (v.kind()) {
      case Value::Kind::Nil:
        return {0, kNil};
      case Value::Kind::Bool:
        return {0, kTrue};
      case Value::Kind::Int: {
        const BigInt& n = v.as_int();
        if (n >= std::numeric_limits<std::int64_t>::min() &&
            n <= std::numeric_limits<std::int64_t>::max())
          return {static_cast<std::int64_t>(n), kInt};
        return box(v);
      }
      default:
        return box(v);
    }
  }

  Slot box(Value v) {
    heap_.push_back(std::move(v));
    return {static_cast<std::int64_t>(heap_.size() - 1), kHeap};
  }

  Slot box_int(BigInt n) {
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max())
      return {static_cast<std::int64_t>(n), kInt};
    return box(Value::integer(std::move(n)));
  }

  Value to_value(const Slot& s) const {
    switch (s.tag) {
      case kNil:
        return Value::nil();
      case kTrue:
        return Value::truth();
      case kInt:
        return Value::integer(BigInt(s.i));
      default:
        return heap_[static_cast<std::size_t>(s.i)];
    }
  }

  BigInt ifix(const Slot& s) const {
    if (s.tag == kInt) return BigInt(s.i);
    if (s.tag == kHeap) {
      const Value& v = heap_[static_cast<std::size_t>(s.i)];
      if (v.is_int()) return v.as_int();
    }
    return BigInt(0);
  }

  bool truthy(const Slot& s) const { return s.tag != kNil; }

  [[noreturn]] void eval_error(const Chunk& ch, std::uint32_t ip, const std::string& what) {
    std::string where = "in " + ch.name;
    if (ip < ch.src.size() && ch.src[ip]) where += " at " + print_expr(*ch.src[ip]);
    throw DynamicTypeError(where + ": " + what);
  }

  void run();
};

Value Execution::call(std::uint32_t fn, std::span<const Value> args) {
  const Chunk& ch = m_.chunk(fn);
  if (ch.arity != args.size())
    throw Error(ch.name + " takes " + std::to_string(ch.arity) + " argument(s), got " +
                std::to_string(args.size()));
  stack_.resize(1024 + ch.max_stack);
  frames_.reserve(256);
  for (const Value& v : args) stack_[sp_++] = to_slot(v);
  frames_.push_back({fn, 0, 0});
  stats_.call_count++;
  if (stats_.max_recursion_depth < 1) stats_.max_recursion_depth = 1;
  run();
  return to_value(stack_[0]);
}

Value Execution::call_entry(const Chunk& entry, std::span<const Value> args) {
  if (entry.arity != args.size())
    throw Error(entry.name + " takes " + std::to_string(entry.arity) + " argument(s), got " +
                std::to_string(args.size()));
  entry_ = &entry;
  stack_.resize(1024 + entry.max_stack);
  frames_.reserve(256);
  for (const Value& v : args) stack_[sp_++] = to_slot(v);
  frames_.push_back({kEntryFn, 0, 0});
  stats_.call_count++;
  if (stats_.max_recursion_depth < 1) stats_.max_recursion_depth = 1;
  run();
  return to_value(stack_[0]);
}

void Execution::run() {
  const Chunk* ch = chunk_at(frames_.back().fn);
  const Instr* code = ch->code.data();
  std::uint32_t ip = 0;
  std::size_t base = 0;
  Slot* S = stack_.data();

  std::uint64_t calls = 0, prims = 0;
  std::uint64_t depth = 1, max_depth = stats_.max_recursion_depth;
  const std::uint64_t cap = limits_.safety_cap;

  auto flush = [&] {
    stats_.call_count += calls;
    stats_.prim_count += prims;
    if (max_depth > stats_.max_recursion_depth) stats_.max_recursion_depth = max_depth;
  };

  try {
    for (;;) {
      const Instr& in = code[ip++];
      switch (in.op) {
        case Op::LoadImm:
          S[sp_++] = {in.a, kInt};
          break;
        case Op::LoadConst: {
          Slot s = to_slot(ch->consts[static_cast<std::size_t>(in.a)]);
          S = stack_.data();  // box may grow the heap only; stack is stable
          S[sp_++] = s;
          break;
        }
        case Op::LoadNil:
          S[sp_++] = {0, kNil};
          break;
        case Op::LoadTrue:
          S[sp_++] = {0, kTrue};
          break;
        case Op::LoadSlot:
          S[sp_++] = S[base + in.s];
          break;
        case Op::Jump:
          ip = static_cast<std::uint32_t>(in.a);
          break;
        case Op::JumpIfNil:
          if (S[--sp_].tag == kNil) ip = static_cast<std::uint32_t>(in.a);
          break;
        case Op::JNilKeep:
          if (S[sp_ - 1].tag == kNil)
            ip = static_cast<std::uint32_t>(in.a);
          else
            --sp_;
          break;
        case Op::JTrueKeep:
          if (S[sp_ - 1].tag != kNil)
            ip = static_cast<std::uint32_t>(in.a);
          else
            --sp_;
          break;
        case Op::BrCmp: {
          ++prims;
          const Slot& v = S[base + in.s];
          bool ok;
          if (v.tag == kInt) {
            switch (in.cmp) {
              case Cmp::EqSI:
                ok = v.i == in.a;
                break;
              case Cmp::LtSI:
                ok = v.i < in.a;
                break;
              case Cmp::LtIS:
                ok = in.a < v.i;
                break;
              case Cmp::LeSI:
                ok = v.i <= in.a;
                break;
              default:
                ok = in.a <= v.i;
                break;
            }
          } else if (in.cmp == Cmp::EqSI) {
            // = is equal; a non-integer never equals an integer literal
            ok = false;
          } else {
            BigInt x = ifix(v);
            switch (in.cmp) {
              case Cmp::LtSI:
                ok = x < in.a;
                break;
              case Cmp::LtIS:
                ok = in.a < x;
                break;
              case Cmp::LeSI:
                ok = x <= in.a;
                break;
              default:
                ok = in.a <= x;
                break;
            }
          }
          if (!ok) ip = static_cast<std::uint32_t>(in.b);
          break;
        }
        case Op::BrNotZp: {
          ++prims;
          const Slot& v = S[base + in.s];
          bool zp = true;
          if (v.tag == kInt) {
            zp = v.i <= 0;
          } else if (v.tag == kHeap) {
            const Value& hv = heap_[static_cast<std::size_t>(v.i)];
            zp = !(hv.is_int() && hv.as_int() > 0);
          }
          if (!zp) ip = static_cast<std::uint32_t>(in.b);
          break;
        }
        case Op::IncSlot: {
          ++prims;
          Slot v = S[base + in.s];
          std::int64_t r;
          if (v.tag == kInt && !__builtin_add_overflow(v.i, std::int64_t{1}, &r)) {
            S[sp_++] = {r, kInt};
          } else {
            Slot s = box_int(ifix(v) + 1);
            S[sp_++] = s;
          }
          break;
        }
        case Op::DecSlot: {
          ++prims;
          Slot v = S[base + in.s];
          std::int64_t r;
          if (v.tag == kInt && !__builtin_sub_overflow(v.i, std::int64_t{1}, &r)) {
            S[sp_++] = {r, kInt};
          } else {
            Slot s = box_int(ifix(v) - 1);
            S[sp_++] = s;
          }
          break;
        }
        case Op::Prim: {
          ++prims;
          auto op = static_cast<PrimOp>(in.a);
          int arity = prim_info(op).arity;
          Slot* a = &S[sp_ - arity];
          switch (op) {
            case PrimOp::Add:
              if (a[0].tag == kInt && a[1].tag == kInt) {
                std::int64_t r;
                if (!__builtin_add_overflow(a[0].i, a[1].i, &r)) {
                  a[0] = {r, kInt};
                  --sp_;
                  goto prim_done;
                }
              }
              a[0] = box_int(ifix(a[0]) + ifix(a[1]));
              --sp_;
              break;
            case PrimOp::Sub:
              if (a[0].tag == kInt && a[1].tag == kInt) {
                std::int64_t r;
                if (!__builtin_sub_overflow(a[0].i, a[1].i, &r)) {
                  a[0] = {r, kInt};
                  --sp_;
                  goto prim_done;
                }
              }
              a[0] = box_int(ifix(a[0]) - ifix(a[1]));
              --sp_;
              break;
            case PrimOp::Mul:
              if (a[0].tag == kInt && a[1].tag == kInt) {
                std::int64_t r;
                if (!__builtin_mul_overflow(a[0].i, a[1].i, &r)) {
                  a[0] = {r, kInt};
                  --sp_;
                  goto prim_done;
                }
              }
              a[0] = box_int(ifix(a[0]) * ifix(a[1]));
              --sp_;
              break;
            case PrimOp::Inc:
            case PrimOp::Dec: {
              std::int64_t delta = op == PrimOp::Inc ? 1 : -1;
              std::int64_t r;
              if (a[0].tag == kInt && !__builtin_add_overflow(a[0].i, delta, &r))
                a[0] = {r, kInt};
              else
                a[0] = box_int(ifix(a[0]) + delta);
              break;
            }
            case PrimOp::NumEq:
            case PrimOp::Equal: {
              bool eq;
              if (a[0].tag == kInt && a[1].tag == kInt)
                eq = a[0].i == a[1].i;
              else if (a[0].tag != kHeap && a[1].tag != kHeap)
                eq = a[0].tag == a[1].tag && (a[0].tag != kInt || a[0].i == a[1].i);
              else
                eq = to_value(a[0]) == to_value(a[1]);
              a[0] = {0, eq ? kTrue : kNil};
              --sp_;
              break;
            }
            case PrimOp::Less:
            case PrimOp::LessEq: {
              bool lt;
              if (a[0].tag == kInt && a[1].tag == kInt)
                lt = op == PrimOp::Less ? a[0].i < a[1].i : a[0].i <= a[1].i;
              else
                lt = op == PrimOp::Less ? ifix(a[0]) < ifix(a[1]) : ifix(a[0]) <= ifix(a[1]);
              a[0] = {0, lt ? kTrue : kNil};
              --sp_;
              break;
            }
            case PrimOp::Zp: {
              bool zp = true;
              if (a[0].tag == kInt)
                zp = a[0].i <= 0;
              else if (a[0].tag == kHeap) {
                const Value& hv = heap_[static_cast<std::size_t>(a[0].i)];
                zp = !(hv.is_int() && hv.as_int() > 0);
              }
              a[0] = {0, zp ? kTrue : kNil};
              break;
            }
            case PrimOp::Nfix:
              if (a[0].tag == kInt) {
                if (a[0].i < 0) a[0] = {0, kInt};
              } else if (a[0].tag == kHeap &&
                         heap_[static_cast<std::size_t>(a[0].i)].is_natural()) {
                // keep as is
              } else {
                a[0] = {0, kInt};
              }
              break;
            case PrimOp::Max: {
              // (max x y) = (if (< y x) x y)
              bool keep_left;
              if (a[0].tag == kInt && a[1].tag == kInt)
                keep_left = a[1].i < a[0].i;
              else
                keep_left = ifix(a[1]) < ifix(a[0]);
              if (!keep_left) a[0] = a[1];
              --sp_;
              break;
            }
            case PrimOp::Not:
              a[0] = {0, a[0].tag == kNil ? kTrue : kNil};
              break;
            default: {
              // structural primitives go through the shared table
              Value vals[2];
              for (int i = 0; i < arity; ++i) vals[i] = to_value(a[i]);
              Value r;
              try {
                r = apply_prim(op, vals, static_cast<std::size_t>(arity));
              } catch (const DynamicTypeError& e) {
                eval_error(*ch, ip - 1, e.what());
              }
              sp_ -= static_cast<std::size_t>(arity);
              Slot s = to_slot(r);
              S = stack_.data();
              S[sp_++] = s;
              break;
            }
          }
        prim_done:
          break;
        }
        case Op::DomCheck: {
          if (!m_.domcheck_handler()) eval_error(*ch, ip - 1, "no deferred domain check handler");
          stats_.domain_checks++;
          std::vector<Value> args;
          args.reserve(ch->arity - 1);
          for (std::uint32_t i = 1; i < ch->arity; ++i) args.push_back(to_value(S[base + i]));
          flush();
          calls = prims = 0;
          max_depth = stats_.max_recursion_depth;
          bool in_dom = m_.domcheck_handler()(static_cast<std::uint32_t>(in.a), args, limits_, stats_);
          S = stack_.data();
          S[sp_++] = {0, in_dom ? kTrue : kNil};
          break;
        }
        case Op::Call: {
          ++calls;
          ++depth;
          if (depth > cap) throw RecursionSafetyCapError(cap);
          if (depth > max_depth) max_depth = depth;
          auto argc = static_cast<std::uint32_t>(in.b);
          frames_.back().ip = ip;
          frames_.push_back({static_cast<std::uint32_t>(in.a), 0, static_cast<std::uint32_t>(base)});
          base = sp_ - argc;
          ch = &m_.chunk(static_cast<std::uint32_t>(in.a));
          code = ch->code.data();
          ip = 0;
          if (sp_ + ch->max_stack > stack_.size()) {
            stack_.resize(stack_.size() * 2 + ch->max_stack);
            S = stack_.data();
          }
          break;
        }
        case Op::Ret: {
          --depth;
          Slot r = S[sp_ - 1];
          sp_ = base;
          S[sp_++] = r;
          std::uint32_t caller_base = frames_.back().base;
          frames_.pop_back();
          if (frames_.empty()) {
            flush();
            return;
          }
          base = caller_base;
          const Frame& fr = frames_.back();
          ch = chunk_at(fr.fn);
          code = ch->code.data();
          ip = fr.ip;
          break;
        }
      }
    }
  } catch (...) {
    flush();
    throw;
  }
}

}  // namespace

Value Machine::call(std::uint32_t fn, std::span<const Value> args, const Limits& limits,
                    EvalStats* stats) const {
  Execution exec(*this, limits, stats);
  return exec.call(fn, args);
}

Value Machine::call_chunk(const Chunk& entry, std::span<const Value> args, const Limits& limits,
                          EvalStats* stats) const {
  Execution exec(*this, limits, stats);
  return exec.call_entry(entry, args);
}

}  // namespace defung::vm
