#ifndef DEFUNG_TOTALITY_H
#define DEFUNG_TOTALITY_H

#include "defung/verify.h"

namespace defung::totality {

/// Strict lexicographic order on equal-arity natural tuples; components are
/// nfix-coerced.
bool lex_less(std::span<const Value> a, std::span<const Value> b);

/// Strict order under the spec's relation (scalar or lexicographic).
bool measure_less(WfRelation relation, std::span<const Value> a, std::span<const Value> b);

/// Desk-scale totality check: wherever the predicate holds on the plan,
/// the point is in the domain and every recursive call descends under the
/// relation with the predicate preserved.
verify::CheckReport check_total(const Workspace& ws, const TotalitySpec& spec,
                                const verify::CheckPlan& plan, const exec::ExecConfig& cfg);

}  // namespace defung::totality

#endif
