#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defung/exec.h"
#include "defung/interp.h"
#include "defung/parser.h"
#include "defung/printer.h"

#include "support/oracle.h"

#include <random>

using namespace defung;

namespace {

Workspace& ack_ws() {
  static Workspace ws(parse_program(
      "(def::ung ack (x y) (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) "
      "(ack (1- x) (ack x (1- y))))))"));
  return ws;
}

Value eval_str(Workspace& ws, const std::string& text,
               const std::map<std::string, Value>& env) {
  std::vector<std::string> vars;
  for (const auto& [k, v] : env) vars.push_back(k);
  ExprPtr e = parse_expression(text, vars, {{"ack", 2}});
  return interp::eval_expr(ws, env, *e);
}

}  // namespace

TEST_CASE("primitive evaluation") {
  Workspace& ws = ack_ws();
  std::map<std::string, Value> env{{"x", Value::integer(0)}, {"y", Value::integer(5)}};

  CHECK(eval_str(ws, "(1+ y)", env) == Value::integer(6));
  CHECK(eval_str(ws, "(zp -3)", env).truthy());
  CHECK(eval_str(ws, "(zp 0)", env).truthy());
  CHECK_FALSE(eval_str(ws, "(zp 2)", env).truthy());
  CHECK(eval_str(ws, "(max 2 7)", env) == Value::integer(7));
  CHECK(eval_str(ws, "(max 7 2)", env) == Value::integer(7));
  CHECK(eval_str(ws, "(nfix -9)", env) == Value::integer(0));
  CHECK(eval_str(ws, "(nfix 9)", env) == Value::integer(9));
  CHECK(eval_str(ws, "(- 3 10)", env) == Value::integer(-7));
  CHECK(eval_str(ws, "(* -4 5)", env) == Value::integer(-20));
  CHECK(eval_str(ws, "(= x 0)", env).truthy());
  CHECK_FALSE(eval_str(ws, "(= y 0)", env).truthy());
  CHECK(eval_str(ws, "(= nil nil)", env).truthy());
  CHECK_FALSE(eval_str(ws, "(= nil 0)", env).truthy());
  CHECK(eval_str(ws, "(<= y 5)", env).truthy());
  CHECK(eval_str(ws, "(< 100 101)", env).truthy());
  CHECK(eval_str(ws, "(natp y)", env).truthy());
  CHECK_FALSE(eval_str(ws, "(natp -1)", env).truthy());
  CHECK(eval_str(ws, "(integerp -1)", env).truthy());
  CHECK(eval_str(ws, "(car (cons 1 2))", env) == Value::integer(1));
  CHECK(eval_str(ws, "(cdr (cons 1 2))", env) == Value::integer(2));
  CHECK(eval_str(ws, "(consp (cons 1 2))", env).truthy());
  CHECK_FALSE(eval_str(ws, "(consp 3)", env).truthy());
  CHECK(eval_str(ws, "(equal (cons 1 2) (cons 1 2))", env).truthy());
  CHECK(eval_str(ws, "(not nil)", env).truthy());
  CHECK_THROWS_AS(eval_str(ws, "(car 3)", env), DynamicTypeError);
  CHECK_THROWS_AS(eval_str(ws, "(cdr nil)", env), DynamicTypeError);
}

TEST_CASE("and/or are short-circuit value forms") {
  Workspace& ws = ack_ws();
  std::map<std::string, Value> env{{"x", Value::integer(1)}, {"y", Value::nil()}};

  CHECK(eval_str(ws, "(and)", env).truthy());
  CHECK_FALSE(eval_str(ws, "(or)", env).truthy());
  CHECK(eval_str(ws, "(and 1 2)", env) == Value::integer(2));
  CHECK(eval_str(ws, "(and y 2)", env) == Value::nil());
  CHECK(eval_str(ws, "(or y 3)", env) == Value::integer(3));
  CHECK(eval_str(ws, "(or x 3)", env) == Value::integer(1));
  // short circuit: the divergent call never runs
  CHECK(eval_str(ws, "(and nil (ack -1 0))", env) == Value::nil());
  CHECK(eval_str(ws, "(or 7 (ack -1 0))", env) == Value::integer(7));
}

TEST_CASE("exact integer arithmetic beyond machine words") {
  Workspace& ws = ack_ws();
  std::map<std::string, Value> env{{"x", Value::integer(BigInt("1208925819614629174706176"))}};
  // 2^80 squared
  CHECK(eval_str(ws, "(* x x)", env) ==
        Value::integer(BigInt("1461501637330902918203684832716283019655932542976")));
  CHECK(eval_str(ws, "(1+ x)", env) ==
        Value::integer(BigInt("1208925819614629174706177")));
  CHECK(eval_str(ws, "(< x (* x x))", env).truthy());
  CHECK(eval_str(ws, "(zp x)", env) == Value::nil());
  // int64 overflow boundary promotes exactly
  std::map<std::string, Value> env2{{"x", Value::integer(BigInt("9223372036854775807"))}};
  CHECK(eval_str(ws, "(1+ x)", env2) == Value::integer(BigInt("9223372036854775808")));
}

TEST_CASE("arithmetic coerces non-integers like the source logic") {
  Workspace& ws = ack_ws();
  std::map<std::string, Value> env{{"x", Value::nil()}};
  CHECK(eval_str(ws, "(+ x 3)", env) == Value::integer(3));
  CHECK(eval_str(ws, "(1- x)", env) == Value::integer(-1));
  CHECK(eval_str(ws, "(zp x)", env).truthy());
  CHECK(eval_str(ws, "(nfix x)", env) == Value::integer(0));
  CHECK_FALSE(eval_str(ws, "(< x 0)", env).truthy());
}

TEST_CASE("recursion depth is capped") {
  Program prog = parse_program("(def::ung spin (x) (if (= x 0) 0 (spin x)))");
  Workspace ws(std::move(prog));
  exec::ExecConfig cfg;
  cfg.safety_cap = 1000;
  CHECK_THROWS_AS(exec::fast_eval(ws, "spin", std::vector<Value>{Value::integer(1)}, cfg),
                  RecursionSafetyCapError);
  // stats survive the throw
  vm::EvalStats st;
  try {
    exec::fast_eval(ws, "spin", std::vector<Value>{Value::integer(1)}, cfg, &st);
  } catch (const RecursionSafetyCapError&) {
  }
  CHECK(st.max_recursion_depth == 1000);
}

TEST_CASE("step counters are exact on small evaluations") {
  Workspace& ws = ack_ws();
  exec::ExecConfig cfg;

  vm::EvalStats st;
  exec::fast_eval(ws, "ack", std::vector<Value>{Value::integer(0), Value::integer(5)}, cfg,
                  &st);
  CHECK(st.call_count == 1);
  CHECK(st.prim_count == 2);  // (= x 0) and (1+ y)
  CHECK(st.max_recursion_depth == 1);

  // ack(1,1) -> ack(0, ack(1,0)) -> ack(0, ack(0,1)): four calls in all
  st = {};
  exec::fast_eval(ws, "ack", std::vector<Value>{Value::integer(1), Value::integer(1)}, cfg,
                  &st);
  CHECK(st.call_count == 4);
  CHECK(st.max_recursion_depth == 3);
}

TEST_CASE("machine agrees with the oracle interpreter on random expressions") {
  oracle::Interp oi;
  Program prog = parse_program(
      "(def::ung dbl (x) (if (zp x) 0 (1+ (1+ (dbl (1- x))))))");
  oi.prog = &prog;
  Workspace ws(parse_program("(def::ung dbl (x) (if (zp x) 0 (1+ (1+ (dbl (1- x))))))"));

  std::mt19937_64 rng(3);
  auto gen_expr = [&](auto&& self, int depth) -> std::string {
    if (depth <= 0 || rng() % 3 == 0) {
      switch (rng() % 4) {
        case 0:
          return "x";
        case 1:
          return "y";
        case 2:
          return std::to_string(static_cast<long long>(rng() % 21) - 10);
        default:
          return rng() % 2 ? "t" : "nil";
      }
    }
    switch (rng() % 9) {
      case 0:
        return "(1+ " + self(self, depth - 1) + ")";
      case 1:
        return "(1- " + self(self, depth - 1) + ")";
      case 2:
        return "(+ " + self(self, depth - 1) + " " + self(self, depth - 1) + ")";
      case 3:
        return "(max " + self(self, depth - 1) + " " + self(self, depth - 1) + ")";
      case 4:
        return "(if " + self(self, depth - 1) + " " + self(self, depth - 1) + " " +
               self(self, depth - 1) + ")";
      case 5:
        return "(and " + self(self, depth - 1) + " " + self(self, depth - 1) + ")";
      case 6:
        return "(or " + self(self, depth - 1) + " " + self(self, depth - 1) + ")";
      case 7:
        return "(= " + self(self, depth - 1) + " " + self(self, depth - 1) + ")";
      default:
        return "(dbl (nfix " + self(self, depth - 1) + "))";
    }
  };

  for (int round = 0; round < 300; ++round) {
    std::string text = gen_expr(gen_expr, 4);
    ExprPtr e = parse_expression(text, {"x", "y"}, {{"dbl", 1}});
    std::map<std::string, Value> env{
        {"x", Value::integer(static_cast<long long>(rng() % 11) - 5)},
        {"y", Value::integer(static_cast<long long>(rng() % 11) - 5)}};
    CAPTURE(text);
    Value via_vm = interp::eval_expr(ws, env, *e);
    Value via_oracle = oi.eval(*e, env);
    CHECK(via_vm == via_oracle);
  }
}
