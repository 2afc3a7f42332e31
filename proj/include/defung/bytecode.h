#ifndef DEFUNG_BYTECODE_H
#define DEFUNG_BYTECODE_H

#include "defung/ast.h"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace defung::vm {

enum class Op : std::uint8_t {
  LoadImm,    // push int a
  LoadConst,  // push consts[a]
  LoadNil,
  LoadTrue,
  LoadSlot,  // push locals[s]
  Jump,      // ip = a
  JumpIfNil, // pop; if nil then ip = a
  JNilKeep,  // if top is nil jump to a keeping it, else pop
  JTrueKeep, // if top is truthy jump to a keeping it, else pop
  Call,      // a = chunk index, b = argc
  Ret,
  Prim,      // a = PrimOp; pops arity, pushes result
  // fused forms
  BrCmp,     // compare locals[s] with imm a per cmp; fall through on true,
             // jump to b on false; counts one primitive
  BrNotZp,   // fall through when (zp locals[s]); jump to b otherwise
  IncSlot,   // push locals[s] + 1
  DecSlot,   // push locals[s] - 1
  DomCheck,  // a = meta index; bounded domain check on this frame's params
};

/// Comparison kinds for BrCmp (S = slot value, I = immediate).
enum class Cmp : std::int16_t { EqSI, LtSI, LtIS, LeSI, LeIS };

struct Instr {
  Op op;
  std::uint8_t s = 0;
  Cmp cmp = Cmp::EqSI;
  std::int32_t a = 0;
  std::int32_t b = 0;
};

struct Chunk {
  std::string name;
  std::uint32_t arity = 0;
  std::uint32_t max_stack = 0;
  std::vector<Instr> code;
  std::vector<Value> consts;
  std::vector<const Expr*> src;  // per instruction; may hold nullptr
};

/// Resolves Call targets by name and recognizes the deferred-domain-check
/// marker call emitted for comp definitions.
struct CompileEnv {
  std::map<std::string, std::uint32_t> fn_indices;
  std::string domcheck_marker;       // call name compiled to DomCheck
  std::uint32_t domcheck_meta = 0;   // meta index carried by DomCheck
};

/// Compiles a definition body. Parameters occupy slots 0..arity-1.
Chunk compile_chunk(const std::string& name, const std::vector<std::string>& params,
                    const Expr& body, const CompileEnv& env);

}  // namespace defung::vm

#endif
