#include "defung/printer.h"

#include <sstream>

namespace defung {

namespace {

void print_into(const Expr& e, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      out += e.int_value.str();
      return;
    case Expr::Kind::BoolLit:
      out += e.bool_value ? "t" : "nil";
      return;
    case Expr::Kind::SymLit:
      out += e.name;
      return;
    case Expr::Kind::NilLit:
      out += "nil";
      return;
    case Expr::Kind::Var:
      out += e.name;
      return;
    default:
      break;
  }
  out += '(';
  switch (e.kind) {
    case Expr::Kind::Prim:
      out += prim_info(e.op).name;
      break;
    case Expr::Kind::If:
      out += "if";
      break;
    case Expr::Kind::And:
      out += "and";
      break;
    case Expr::Kind::Or:
      out += "or";
      break;
    case Expr::Kind::Call:
      out += e.name;
      break;
    default:
      break;
  }
  for (const auto& arg : e.args) {
    out += ' ';
    print_into(*arg, out);
  }
  out += ')';
}

void print_params(const std::vector<std::string>& params, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ' ';
    out += params[i];
  }
  out += ')';
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

std::string print_definition(const Definition& def) {
  std::string out = "(defun " + def.name + " ";
  print_params(def.params, out);
  out += ' ';
  print_into(*def.body, out);
  out += ')';
  return out;
}

std::string print_definition(const FunctionDef& def) {
  std::string out = "(def::ung " + def.name + " ";
  print_params(def.params, out);

  std::string xargs;
  if (def.signature) {
    xargs += " :signature ((";
    for (std::size_t i = 0; i < def.signature->param_preds.size(); ++i) {
      if (i) xargs += ' ';
      xargs += def.signature->param_preds[i];
    }
    xargs += ") " + def.signature->result_pred + ")";
  }
  if (def.default_value) xargs += " :default-value " + print_expr(def.default_value);
  if (!def.indexed_execution) xargs += " :indexed-execution nil";
  if (def.non_executable) xargs += " :non-executable t";
  if (!def.wrapper_name.empty()) xargs += " :wrapper-macro " + def.wrapper_name;
  if (!xargs.empty()) out += " (declare (xargs" + xargs + "))";

  out += ' ';
  print_into(*def.body, out);
  out += ')';
  return out;
}

std::string print_totality_spec(const TotalitySpec& spec) {
  std::string out = "(def::total " + spec.fname + " ";
  print_params(spec.params, out);
  out += " (declare (xargs :measure ";
  if (spec.measure.size() == 1) {
    out += print_expr(spec.measure[0]);
  } else {
    out += "(llist";
    for (const auto& m : spec.measure) out += ' ' + print_expr(m);
    out += ')';
  }
  out += " :well-founded-relation ";
  out += spec.relation == WfRelation::LexicographicLess ? "l<" : "o<";
  out += " :totality-theorem " + spec.theorem_name + ")) ";
  out += print_expr(spec.predicate);
  out += ')';
  return out;
}

}  // namespace defung
