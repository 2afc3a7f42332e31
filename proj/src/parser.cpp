#include "defung/parser.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace defung {

namespace {

bool is_integer_token(const std::string& s) {
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i >= s.size()) return false;
  return std::all_of(s.begin() + i, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Lowering {
 public:
  ExprPtr lower(const SExpr& form, const std::vector<std::string>& vars,
                const std::map<std::string, int>& callables) {
    vars_ = &vars;
    callables_ = &callables;
    return expr(form);
  }

 private:
  const std::vector<std::string>* vars_ = nullptr;
  const std::map<std::string, int>* callables_ = nullptr;

  bool in_scope(const std::string& name) const {
    return std::find(vars_->begin(), vars_->end(), name) != vars_->end();
  }

  ExprPtr expr(const SExpr& form) {
    if (form.is_atom()) return atom(form);
    if (form.items.empty()) return Expr::nil_lit(form.loc);
    const SExpr& head = form.items.front();
    if (!head.is_atom()) throw ParseError("expected operator name", head.loc);

    std::vector<ExprPtr> args;
    args.reserve(form.items.size() - 1);
    for (std::size_t i = 1; i < form.items.size(); ++i) args.push_back(expr(form.items[i]));

    const std::string& op = head.atom;
    if (op == "if") {
      if (args.size() != 3) throw ParseError("if takes 3 arguments", form.loc);
      return Expr::if_(args[0], args[1], args[2], form.loc);
    }
    if (op == "and") return Expr::and_(std::move(args), form.loc);
    if (op == "or") return Expr::or_(std::move(args), form.loc);
    if (const PrimInfo* p = prim_by_name(op)) {
      if (static_cast<int>(args.size()) != p->arity)
        throw ParseError(op + " takes " + std::to_string(p->arity) + " argument(s), got " +
                             std::to_string(args.size()),
                         form.loc);
      return Expr::prim(p->op, std::move(args), form.loc);
    }
    auto it = callables_->find(op);
    if (it == callables_->end()) throw ParseError("unknown function or primitive: " + op, head.loc);
    if (static_cast<int>(args.size()) != it->second)
      throw ParseError(op + " takes " + std::to_string(it->second) + " argument(s), got " +
                           std::to_string(args.size()),
                       form.loc);
    return Expr::call(op, std::move(args), form.loc);
  }

  ExprPtr atom(const SExpr& form) {
    const std::string& s = form.atom;
    if (is_integer_token(s)) return Expr::int_lit(BigInt(s), form.loc);
    if (s == "t") return Expr::bool_lit(true, form.loc);
    if (s == "nil") return Expr::nil_lit(form.loc);
    if (in_scope(s)) return Expr::var(s, form.loc);
    throw ParseError("unbound variable: " + s, form.loc);
  }
};

std::vector<std::string> parse_param_list(const SExpr& form) {
  if (!form.is_list()) throw ParseError("expected parameter list", form.loc);
  std::vector<std::string> params;
  std::set<std::string> seen;
  for (const SExpr& p : form.items) {
    if (!p.is_atom() || is_integer_token(p.atom))
      throw ParseError("expected parameter name", p.loc);
    if (!seen.insert(p.atom).second) throw ParseError("duplicate parameter: " + p.atom, p.loc);
    params.push_back(p.atom);
  }
  return params;
}

bool is_declare(const SExpr& form) {
  return form.is_list() && !form.items.empty() && form.items[0].is_atom("declare");
}

/// Extracts the flat KEY VAL ... pairs out of (declare (xargs ...)).
std::vector<const SExpr*> xargs_pairs(const SExpr& declare_form) {
  std::vector<const SExpr*> out;
  for (std::size_t i = 1; i < declare_form.items.size(); ++i) {
    const SExpr& d = declare_form.items[i];
    if (!d.is_list() || d.items.empty() || !d.items[0].is_atom("xargs"))
      throw ParseError("expected (xargs ...) inside declare", d.loc);
    if ((d.items.size() - 1) % 2 != 0)
      throw ParseError("xargs expects keyword/value pairs", d.loc);
    for (std::size_t j = 1; j < d.items.size(); ++j) out.push_back(&d.items[j]);
  }
  return out;
}

bool parse_bool_flag(const SExpr& v) {
  if (v.is_atom("t")) return true;
  if (v.is_atom("nil")) return false;
  throw ParseError("expected t or nil", v.loc);
}

class ProgramParser {
 public:
  Program parse(std::string_view text) {
    for (const SExpr& form : read_sexprs(text)) top_form(form);
    return std::move(prog_);
  }

 private:
  Program prog_;
  std::map<std::string, int> arities_;

  void top_form(const SExpr& form) {
    if (!form.is_list() || form.items.empty() || !form.items[0].is_atom())
      throw ParseError("expected (def::ung ...) or (def::total ...)", form.loc);
    const std::string& head = form.items[0].atom;
    if (head == "def::ung") {
      def_ung(form);
    } else if (head == "def::total") {
      def_total(form);
    } else {
      throw ParseError("unknown top-level form: " + head, form.loc);
    }
  }

  static const SExpr& named_item(const SExpr& form, std::size_t i, const char* what) {
    if (i >= form.items.size()) throw ParseError(std::string("missing ") + what, form.loc);
    return form.items[i];
  }

  void def_ung(const SExpr& form) {
    const SExpr& name_form = named_item(form, 1, "function name");
    if (!name_form.is_atom()) throw ParseError("expected function name", name_form.loc);
    FunctionDef def;
    def.name = name_form.atom;
    def.loc = form.loc;
    if (arities_.count(def.name))
      throw ParseError("duplicate definition: " + def.name, name_form.loc);
    def.params = parse_param_list(named_item(form, 2, "parameter list"));

    std::size_t body_index = 3;
    const SExpr* declare_form = nullptr;
    if (form.items.size() > 3 && is_declare(form.items[3])) {
      declare_form = &form.items[3];
      body_index = 4;
    }
    if (form.items.size() != body_index + 1)
      throw ParseError("expected exactly one body form", form.loc);

    std::map<std::string, int> callables = arities_;
    callables[def.name] = static_cast<int>(def.params.size());
    Lowering lowering;
    def.body = lowering.lower(form.items[body_index], def.params, callables);

    if (declare_form) {
      auto pairs = xargs_pairs(*declare_form);
      for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) {
        const SExpr& key = *pairs[i];
        const SExpr& val = *pairs[i + 1];
        if (!key.is_atom()) throw ParseError("expected xargs keyword", key.loc);
        const std::string& k = key.atom;
        if (k == ":default-value") {
          def.default_value = lowering.lower(val, def.params, callables);
          if (contains_call(*def.default_value, def.name))
            throw ParseError(":default-value may not call " + def.name, val.loc);
        } else if (k == ":indexed-execution") {
          def.indexed_execution = parse_bool_flag(val);
        } else if (k == ":non-executable") {
          def.non_executable = parse_bool_flag(val);
        } else if (k == ":wrapper-macro") {
          if (!val.is_atom()) throw ParseError("expected wrapper name", val.loc);
          def.wrapper_name = val.atom;
        } else if (k == ":signature") {
          def.signature = parse_signature(val, def.params.size());
        } else if (k == ":guard" || k == ":guard-hints" || k == ":signature-hints" ||
                   k == ":verify-guards" || k == ":hints") {
          // proof-control keywords; no runtime meaning here
        } else {
          throw ParseError("unknown xargs keyword: " + k, key.loc);
        }
      }
    }

    arities_[def.name] = static_cast<int>(def.params.size());
    prog_.definitions.push_back(std::move(def));
  }

  static Signature parse_signature(const SExpr& val, std::size_t nparams) {
    // :signature ((pred-per-param ...) result-pred)
    if (!val.is_list() || val.items.size() != 2 || !val.items[0].is_list() ||
        !val.items[1].is_atom())
      throw ParseError("expected ((PRED*) PRED) signature", val.loc);
    Signature sig;
    for (const SExpr& p : val.items[0].items) {
      if (!p.is_atom()) throw ParseError("expected predicate name", p.loc);
      sig.param_preds.push_back(p.atom);
    }
    if (sig.param_preds.size() != nparams)
      throw ParseError("signature arity does not match parameter count", val.loc);
    sig.result_pred = val.items[1].atom;
    return sig;
  }

  void def_total(const SExpr& form) {
    const SExpr& name_form = named_item(form, 1, "function name");
    if (!name_form.is_atom()) throw ParseError("expected function name", name_form.loc);
    TotalitySpec spec;
    spec.fname = name_form.atom;
    spec.loc = form.loc;
    const FunctionDef* target = prog_.find(spec.fname);
    if (!target) throw ParseError("def::total names undefined function: " + spec.fname,
                                  name_form.loc);
    auto params = parse_param_list(named_item(form, 2, "parameter list"));
    if (params != target->params)
      throw ParseError("def::total parameters must match the definition", form.loc);
    spec.params = params;

    std::size_t body_index = 3;
    const SExpr* declare_form = nullptr;
    if (form.items.size() > 3 && is_declare(form.items[3])) {
      declare_form = &form.items[3];
      body_index = 4;
    }
    if (form.items.size() != body_index + 1)
      throw ParseError("expected exactly one predicate form", form.loc);

    Lowering lowering;
    spec.predicate = lowering.lower(form.items[body_index], params, arities_);
    spec.theorem_name = spec.fname + "-terminates";

    if (!declare_form) throw ParseError("def::total requires an xargs :measure", form.loc);
    bool have_measure = false;
    auto pairs = xargs_pairs(*declare_form);
    for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) {
      const SExpr& key = *pairs[i];
      const SExpr& val = *pairs[i + 1];
      if (!key.is_atom()) throw ParseError("expected xargs keyword", key.loc);
      const std::string& k = key.atom;
      if (k == ":measure") {
        spec.measure = parse_measure(val, params, lowering);
        have_measure = true;
      } else if (k == ":well-founded-relation") {
        if (val.is_atom("l<")) {
          spec.relation = WfRelation::LexicographicLess;
        } else if (val.is_atom("o<") || val.is_atom("nat<") || val.is_atom("<")) {
          spec.relation = WfRelation::NaturalLess;
        } else {
          throw ParseError("unknown well-founded relation", val.loc);
        }
      } else if (k == ":totality-theorem") {
        if (!val.is_atom()) throw ParseError("expected theorem name", val.loc);
        spec.theorem_name = val.atom;
      } else if (k == ":hints") {
        // ignored
      } else {
        throw ParseError("unknown xargs keyword: " + k, key.loc);
      }
    }
    if (!have_measure) throw ParseError("def::total requires an xargs :measure", form.loc);
    if (spec.relation == WfRelation::LexicographicLess && spec.measure.size() < 2)
      throw ParseError("l< needs an llist measure with at least two components", form.loc);
    if (spec.relation == WfRelation::NaturalLess && spec.measure.size() != 1)
      throw ParseError("scalar relation needs a scalar measure", form.loc);
    prog_.totality_specs.push_back(std::move(spec));
  }

  std::vector<ExprPtr> parse_measure(const SExpr& val, const std::vector<std::string>& params,
                                     Lowering& lowering) {
    // (llist e1 e2 ...) builds a lexicographic tuple; anything else is scalar.
    std::vector<ExprPtr> out;
    if (val.is_list() && !val.items.empty() && val.items[0].is_atom("llist")) {
      if (val.items.size() < 2) throw ParseError("llist needs at least one component", val.loc);
      for (std::size_t i = 1; i < val.items.size(); ++i)
        out.push_back(lowering.lower(val.items[i], params, arities_));
    } else {
      out.push_back(lowering.lower(val, params, arities_));
    }
    return out;
  }
};

/// Decision-spine walk used by validate_transformability. The spine follows
/// If branches and the final argument of and/or chains; everything else is
/// leaf content.
void check_spine(const Expr& e, const std::string& self, const std::string& path) {
  switch (e.kind) {
    case Expr::Kind::If:
      if (contains_call(*e.test(), self))
        throw RecursiveCallInTestError(path + ".test", e.test()->loc);
      check_spine(*e.then_branch(), self, path + ".then");
      check_spine(*e.else_branch(), self, path + ".else");
      return;
    case Expr::Kind::And:
    case Expr::Kind::Or: {
      const char* tag = e.kind == Expr::Kind::And ? ".and[" : ".or[";
      if (e.args.empty()) return;
      for (std::size_t i = 0; i + 1 < e.args.size(); ++i)
        if (contains_call(*e.args[i], self))
          throw RecursiveCallInTestError(path + tag + std::to_string(i) + "]", e.args[i]->loc);
      check_spine(*e.args.back(), self, path + tag + std::to_string(e.args.size() - 1) + "]");
      return;
    }
    default:
      return;  // leaf
  }
}

}  // namespace

Program parse_program(std::string_view text) { return ProgramParser().parse(text); }

Program parse_program_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_program(buf.str());
}

ExprPtr parse_expression(std::string_view text, const std::vector<std::string>& vars,
                         const std::map<std::string, int>& callables) {
  return lower_expression(read_one_sexpr(text), vars, callables);
}

ExprPtr lower_expression(const SExpr& form, const std::vector<std::string>& vars,
                         const std::map<std::string, int>& callables) {
  Lowering lowering;
  return lowering.lower(form, vars, callables);
}

void validate_transformability(const FunctionDef& def) {
  check_spine(*def.body, def.name, "body");
}

}  // namespace defung
