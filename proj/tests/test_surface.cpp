#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defung/parser.h"
#include "defung/printer.h"

#include <fstream>
#include <random>
#include <sstream>

using namespace defung;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kAckText = R"((def::ung ack (x y)
  (declare (xargs :signature ((natp natp) natp) :default-value 0))
  (if (= x 0) (1+ y)
    (if (= y 0) (ack (1- x) 1)
      (ack (1- x) (ack x (1- y)))))))";

}  // namespace

TEST_CASE("ack form parses with its options") {
  Program prog = parse_program(kAckText);
  REQUIRE(prog.definitions.size() == 1);
  const FunctionDef& def = prog.definitions[0];
  CHECK(def.name == "ack");
  CHECK(def.params == std::vector<std::string>{"x", "y"});
  REQUIRE(def.default_value);
  CHECK(def.default_value->kind == Expr::Kind::IntLit);
  CHECK(def.default_value->int_value == 0);
  REQUIRE(def.signature.has_value());
  CHECK(def.signature->param_preds == std::vector<std::string>{"natp", "natp"});
  CHECK(def.signature->result_pred == "natp");
  CHECK(def.indexed_execution);
  CHECK(def.body->kind == Expr::Kind::If);
}

TEST_CASE("degenerate non-recursive definition is accepted") {
  Program prog = parse_program("(def::ung id (x) x)");
  REQUIRE(prog.definitions.size() == 1);
  CHECK(prog.definitions[0].body->kind == Expr::Kind::Var);
  CHECK_FALSE(contains_call(*prog.definitions[0].body, "id"));
}

TEST_CASE("scope and arity errors carry positions") {
  CHECK_THROWS_AS(parse_program("(def::ung f (x) (f x y))"), ParseError);
  CHECK_THROWS_AS(parse_program("(def::ung f (x) (frobnicate x))"), ParseError);
  CHECK_THROWS_AS(parse_program("(def::ung f (x) (1+ x x))"), ParseError);
  CHECK_THROWS_AS(parse_program("(def::ung f (x) x) (def::ung f (y) y)"), ParseError);
  CHECK_THROWS_AS(parse_program("(def::ung f (x x) x)"), ParseError);
  CHECK_THROWS_AS(parse_program("(def::ung f (x) (if (= x 0) 0 (f (1- x))"), ParseError);

  try {
    parse_program("(def::ung f (x)\n  (f x y))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 2);
    CHECK(std::string(e.what()).find("unbound variable: y") != std::string::npos);
  }
}

TEST_CASE("wrapper and execution flags parse") {
  Program prog = parse_program(
      "(def::ung ack2 (x y) (declare (xargs :indexed-execution nil :wrapper-macro ack2-exec)) "
      "(if (= x 0) (1+ y) (if (= y 0) (ack2 (1- x) 1) (ack2 (1- x) (ack2 x (1- y))))))");
  const FunctionDef& def = prog.definitions[0];
  CHECK_FALSE(def.indexed_execution);
  CHECK(def.wrapper_name == "ack2-exec");
}

TEST_CASE("proof-control keywords are accepted and ignored") {
  Program prog = parse_program(
      "(def::ung f (x) (declare (xargs :verify-guards nil :guard (natp x) :guard-hints nil)) "
      "(if (= x 0) 0 (f (1- x))))");
  CHECK(prog.definitions.size() == 1);
}

TEST_CASE("def::total parses measure, relation and theorem name") {
  Program prog = parse_program(slurp(std::string(DEFUNG_PROGRAMS_DIR) + "/ack.lisp"));
  REQUIRE(prog.totality_specs.size() == 1);
  const TotalitySpec& spec = prog.totality_specs[0];
  CHECK(spec.fname == "ack");
  CHECK(spec.relation == WfRelation::LexicographicLess);
  CHECK(spec.measure.size() == 2);
  CHECK(spec.theorem_name == "natp-ack-terminates");
  CHECK(spec.predicate->kind == Expr::Kind::And);
}

TEST_CASE("def::total must follow its definition") {
  CHECK_THROWS_AS(parse_program("(def::total g (x) (declare (xargs :measure x)) t)"),
                  ParseError);
}

TEST_CASE("transformability validation") {
  Program ack = parse_program(kAckText);
  CHECK_NOTHROW(validate_transformability(ack.definitions[0]));

  Program bad = parse_program("(def::ung g (x) (if (g x) 0 1))");
  CHECK_THROWS_AS(validate_transformability(bad.definitions[0]), RecursiveCallInTestError);

  Program mc91 = parse_program(slurp(std::string(DEFUNG_PROGRAMS_DIR) + "/mc91.lisp"));
  CHECK_NOTHROW(validate_transformability(mc91.definitions[0]));

  Program and_test = parse_program("(def::ung h (x) (if (= x 0) 0 (and (h (1- x)) 1)))");
  CHECK_THROWS_AS(validate_transformability(and_test.definitions[0]),
                  RecursiveCallInTestError);
  Program and_ok = parse_program("(def::ung h (x) (if (= x 0) 0 (and (natp x) (h (1- x)))))");
  CHECK_NOTHROW(validate_transformability(and_ok.definitions[0]));
}

TEST_CASE("printing round-trips the corpus") {
  for (const char* name : {"/ack.lisp", "/ack2.lisp", "/mc91.lisp", "/half.lisp"}) {
    Program p1 = parse_program(slurp(std::string(DEFUNG_PROGRAMS_DIR) + name));
    std::string printed;
    for (const auto& def : p1.definitions) printed += print_definition(def) + "\n";
    for (const auto& spec : p1.totality_specs) printed += print_totality_spec(spec) + "\n";
    Program p2 = parse_program(printed);
    REQUIRE(p2.definitions.size() == p1.definitions.size());
    for (std::size_t i = 0; i < p1.definitions.size(); ++i) {
      CAPTURE(name);
      CHECK(print_definition(p1.definitions[i]) == print_definition(p2.definitions[i]));
      CHECK(expr_equal(p1.definitions[i].body, p2.definitions[i].body));
    }
  }
}

TEST_CASE("nil prints canonically") {
  Program prog = parse_program("(def::ung f (x) (if (consp x) (f (cdr x)) ()))");
  const Expr& body = *prog.definitions[0].body;
  CHECK(print_expr(*body.else_branch()) == "nil");
}

TEST_CASE("random expressions always parse or reject cleanly") {
  // Validation is total: arbitrary token soup either parses or throws a
  // located ParseError, never crashes.
  std::mt19937_64 rng(7);
  const char* bits[] = {"(", ")", "if", "and", "1+", "x", "y", "0", "42", "-3",
                        "f", "zp", "nil", "t", "cons", "="};
  for (int round = 0; round < 500; ++round) {
    std::string text = "(def::ung f (x y) ";
    int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      text += bits[rng() % (sizeof(bits) / sizeof(bits[0]))];
      text += ' ';
    }
    text += ")";
    try {
      Program p = parse_program(text);
      // parsed: print must round-trip
      Program q = parse_program(print_definition(p.definitions[0]));
      CHECK(expr_equal(p.definitions[0].body, q.definitions[0].body));
    } catch (const ParseError&) {
      // fine
    }
  }
}
