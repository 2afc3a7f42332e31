#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defung/parser.h"
#include "defung/totality.h"

using namespace defung;

namespace {

std::vector<Value> tup(std::initializer_list<long long> xs) {
  std::vector<Value> out;
  for (long long x : xs) out.push_back(Value::integer(x));
  return out;
}

verify::CheckPlan natural_plan(std::int64_t xmax, std::int64_t ymax) {
  verify::CheckPlan plan;
  plan.grid = {{0, xmax}, {0, ymax}};
  plan.random_samples = 20;
  plan.domain_cap = 512;
  plan.safety_cap = 200'000;
  return plan;
}

}  // namespace

TEST_CASE("lexicographic order on natural tuples") {
  CHECK(totality::lex_less(tup({2, 9}), tup({3, 0})));
  CHECK(totality::lex_less(tup({3, 1}), tup({3, 2})));
  CHECK_FALSE(totality::lex_less(tup({3, 2}), tup({3, 2})));
  CHECK_FALSE(totality::lex_less(tup({3, 2}), tup({3, 1})));
  CHECK_FALSE(totality::lex_less(tup({4, 0}), tup({3, 9})));
  // components are nfix-coerced
  CHECK(totality::lex_less(tup({-5, 1}), tup({0, 2})));
  CHECK_THROWS_AS(totality::lex_less(tup({1}), tup({1, 2})), Error);
}

TEST_CASE("ack terminates on the naturals under llist(x y)") {
  Program prog = parse_program_file(std::string(DEFUNG_PROGRAMS_DIR) + "/ack.lisp");
  REQUIRE(prog.totality_specs.size() == 1);
  TotalitySpec spec = prog.totality_specs[0];
  Workspace ws(std::move(prog));

  verify::CheckReport report = totality::check_total(ws, spec, natural_plan(2, 3), {});
  CHECK(report.name == "natp-ack-terminates");
  CHECK(report.passed());
  CHECK(report.instances > 0);
}

TEST_CASE("a nil predicate passes vacuously") {
  Program prog = parse_program(
      "(def::ung loop (x) (if (= x 0) 0 (loop x)))"
      "(def::total loop (x) (declare (xargs :measure (nfix x))) nil)");
  TotalitySpec spec = prog.totality_specs[0];
  Workspace ws(std::move(prog));
  verify::CheckPlan plan;
  plan.grid = {{-2, 4}};
  plan.random_samples = 10;
  plan.safety_cap = 10'000;
  verify::CheckReport report = totality::check_total(ws, spec, plan, {});
  CHECK(report.passed());
}

TEST_CASE("the swapped measure llist(y x) fails on a nested witness") {
  Program prog = parse_program_file(std::string(DEFUNG_PROGRAMS_DIR) + "/ack.lisp");
  TotalitySpec spec = prog.totality_specs[0];
  std::swap(spec.measure[0], spec.measure[1]);
  Workspace ws(std::move(prog));

  verify::CheckReport report = totality::check_total(ws, spec, natural_plan(2, 3), {});
  CHECK_FALSE(report.passed());
  REQUIRE(!report.failures.empty());
  CHECK(report.failures[0].detail.find("measure does not decrease") != std::string::npos);
}

TEST_CASE("scalar measures use the natural order") {
  Program prog = parse_program(
      "(def::ung count (x) (if (zp x) 0 (1+ (count (1- x)))))"
      "(def::total count (x) (declare (xargs :measure (nfix x) "
      ":totality-theorem count-total)) (natp x))");
  TotalitySpec spec = prog.totality_specs[0];
  Workspace ws(std::move(prog));
  verify::CheckPlan plan;
  plan.grid = {{0, 24}};
  plan.random_samples = 20;
  plan.domain_cap = 64;
  verify::CheckReport report = totality::check_total(ws, spec, plan, {});
  CHECK(report.name == "count-total");
  CHECK(report.passed());
}

TEST_CASE("a predicate that is not closed under the calls is reported") {
  // predicate x <= 3 is not preserved: f(4) is never claimed, but f(3)
  // recurses to f(4)
  Program prog = parse_program(
      "(def::ung up (x) (if (< 3 x) x (up (1+ x))))"
      "(def::total up (x) (declare (xargs :measure (nfix x))) (<= x 3))");
  TotalitySpec spec = prog.totality_specs[0];
  Workspace ws(std::move(prog));
  verify::CheckPlan plan;
  plan.grid = {{0, 6}};
  plan.random_samples = 0;
  plan.safety_cap = 10'000;
  verify::CheckReport report = totality::check_total(ws, spec, plan, {});
  CHECK_FALSE(report.passed());
  bool saw_escape = false;
  for (const auto& f : report.failures)
    saw_escape = saw_escape || f.detail.find("escapes") != std::string::npos;
  CHECK(saw_escape);
}
