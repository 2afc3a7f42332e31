#ifndef DEFUNG_TRANSFORM_H
#define DEFUNG_TRANSFORM_H

#include "defung/ast.h"

#include <string>
#include <vector>

namespace defung::transform {

/// One decision-tree leaf: the If tests taken to reach it (with polarity)
/// and whether it is free of recursive calls.
struct PathStep {
  ExprPtr test;
  bool polarity;
};

struct Leaf {
  std::vector<PathStep> path;
  ExprPtr expr;
  bool is_base;
};

/// Leaves of the If-spine, in left-to-right order. Paths are mutually
/// exclusive and exhaustive.
struct BranchAnalysis {
  std::vector<Leaf> leaves;

  bool has_base() const {
    for (const auto& l : leaves)
      if (l.is_base) return true;
    return false;
  }
};

struct DerivedEquation {
  std::string name;
  ExprPtr lhs;
  ExprPtr rhs;
};

/// The four check-target equations over the logical-level functions.
struct DerivedEquations {
  DerivedEquation l_dom_equation;
  DerivedEquation l_fn_equation;
  DerivedEquation measure_equation;
  DerivedEquation exported_equation;
};

/// Names of the artifacts generated for one source definition.
struct Names {
  std::string indexed_fn;   // i<f>
  std::string indexed_dom;  // i<f>-dom
  std::string min_index;    // i<f>-min-index
  std::string measure;      // <f>-measure
  std::string l_fn;         // L<f>
  std::string l_dom;        // L<f>-dom
  std::string fast;         // m<f>
  std::string exec_dom;     // <f>-domain
  std::string comp;         // comp-<f>
  std::string index_var;    // fresh index variable, normally d
};

Names make_names(const FunctionDef& def);

struct TransformResult {
  Names names;
  Definition indexed_fn;
  Definition indexed_dom;
  Definition min_index_fn;
  ExprPtr base_predicate;
  ExprPtr default_expr;
  DerivedEquations derived;
};

BranchAnalysis analyze_branches(const FunctionDef& def);

/// The user default when given, otherwise the first base leaf in spine order.
ExprPtr infer_default(const FunctionDef& def);

/// Disjunction of the path conditions driving control into a base leaf.
ExprPtr build_base_predicate(const BranchAnalysis& analysis);

Definition build_indexed_fn(const FunctionDef& def);
Definition build_indexed_dom(const FunctionDef& def);
Definition build_min_index(const FunctionDef& def);
DerivedEquations derive_equations(const FunctionDef& def);

TransformResult transform_definition(const FunctionDef& def);

/// Rewrites every Call to `self`, innermost first, through `rewrite`;
/// `rewrite` receives the already-rewritten argument list.
ExprPtr rewrite_self_calls(
    const ExprPtr& e, const std::string& self,
    const std::function<ExprPtr(std::vector<ExprPtr>)>& rewrite);

/// The domain obligation transform D over a body: If nodes branch, and/or
/// chains guard later obligations behind earlier tests, and each recursive
/// call in a leaf contributes one obligation in evaluation order. With
/// `indexed` the obligations call `dom_name` at index d-1 and lifted inner
/// values use `value_name` at d-1; otherwise both are index-free.
ExprPtr domain_body(const FunctionDef& def, const std::string& dom_name,
                    const std::string& value_name, bool indexed,
                    const std::string& index_var);

/// The measure recursion body: 0 at base leaves, 1 + max of the recursive
/// calls' measures elsewhere, with lifted inner values through `value_name`.
ExprPtr measure_body(const FunctionDef& def, const std::string& measure_name,
                     const std::string& value_name);

}  // namespace defung::transform

#endif
