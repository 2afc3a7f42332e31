#ifndef DEFUNG_MACHINE_H
#define DEFUNG_MACHINE_H

#include "defung/bytecode.h"

#include <functional>
#include <optional>
#include <span>

namespace defung::vm {

struct Limits {
  std::uint64_t safety_cap = 10'000'000;  // simultaneous call frames
  std::uint64_t domain_cap = 4096;        // witness-search bound for DomCheck
};

/// Machine-independent cost counters for one evaluation.
struct EvalStats {
  std::uint64_t call_count = 0;
  std::uint64_t prim_count = 0;
  std::uint64_t max_recursion_depth = 0;
  std::uint64_t domain_checks = 0;
};

/// Holds compiled chunks and runs evaluations. Immutable once loaded, so
/// any number of evaluations may run concurrently.
class Machine {
 public:
  /// Answers a deferred domain check for DomCheck instructions. Runs on the
  /// same machine through fresh executions; charges work to `stats`.
  using DomCheckHandler = std::function<bool(std::uint32_t meta, std::span<const Value> args,
                                             const Limits& limits, EvalStats& stats)>;

  std::uint32_t add_chunk(Chunk ch);
  const Chunk& chunk(std::uint32_t i) const { return chunks_[i]; }
  std::optional<std::uint32_t> find_chunk(const std::string& name) const;
  std::size_t chunk_count() const { return chunks_.size(); }

  void set_domcheck_handler(DomCheckHandler h) { domcheck_ = std::move(h); }
  const DomCheckHandler& domcheck_handler() const { return domcheck_; }

  /// Runs chunk `fn` on `args`. Throws DynamicTypeError or
  /// RecursionSafetyCapError; stats (optional) accumulate across the call,
  /// including nested deferred-check work.
  Value call(std::uint32_t fn, std::span<const Value> args, const Limits& limits,
             EvalStats* stats = nullptr) const;

  /// Runs an unregistered chunk whose Call instructions target registered
  /// chunks. Used for ad-hoc expression evaluation.
  Value call_chunk(const Chunk& entry, std::span<const Value> args, const Limits& limits,
                   EvalStats* stats = nullptr) const;

 private:
  std::vector<Chunk> chunks_;
  std::map<std::string, std::uint32_t> index_;
  DomCheckHandler domcheck_;
};

}  // namespace defung::vm

#endif
