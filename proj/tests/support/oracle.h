#ifndef DEFUNG_TESTS_ORACLE_H
#define DEFUNG_TESTS_ORACLE_H

#include "defung/ast.h"

#include <map>
#include <optional>
#include <string>
#include <vector>

// A deliberately plain recursive interpreter, independent of the bytecode
// machine and of the production witness search. Test expectations marked as
// derived were computed with this and frozen.
namespace oracle {

struct DepthExceeded {};

class Interp {
 public:
  const defung::Program* prog = nullptr;            // source definitions
  std::map<std::string, defung::Definition> defs;   // generated definitions
  // Special call names (e.g. a deferred-check marker) resolved by hand.
  std::map<std::string,
           std::function<defung::Value(std::vector<defung::Value>&)>>
      special;
  int depth_cap = 1 << 20;

  defung::Value call(const std::string& fname, std::vector<defung::Value> args, int depth = 0);
  defung::Value eval(const defung::Expr& e,
                     const std::map<std::string, defung::Value>& env, int depth = 0);
};

/// Plain ascending scan for the least w <= cap with iDom(w, args) true,
/// evaluated by this tree-walking interpreter.
std::optional<std::uint64_t> find_witness_linear(Interp& interp, const std::string& idom_name,
                                                 const std::vector<defung::Value>& args,
                                                 std::uint64_t cap);

/// Builds an interpreter holding every generated definition of `ws_like`
/// program transforms, including a comp definition whose exhaustion check is
/// the linear witness search above.
struct CompPieces {
  std::string comp_name;
  std::string check_marker;
};

}  // namespace oracle

#endif
