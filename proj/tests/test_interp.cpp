#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "defung/interp.h"
#include "defung/parser.h"
#include "defung/transform.h"

#include "support/oracle.h"

#include <thread>

using namespace defung;
using interp::DomainVerdict;

namespace {

const char* kAckPlain =
    "(def::ung ack (x y) (if (= x 0) (1+ y) (if (= y 0) (ack (1- x) 1) "
    "(ack (1- x) (ack x (1- y))))))";

Workspace& ws() {
  static Workspace w{parse_program(kAckPlain)};
  return w;
}

std::vector<Value> pt(long long x, long long y) {
  return {Value::integer(x), Value::integer(y)};
}

Value iack(long long d, long long x, long long y) {
  return interp::eval_indexed_fn(ws(), "ack", Value::integer(d), pt(x, y));
}

bool idom(long long d, long long x, long long y) {
  return interp::eval_indexed_dom(ws(), "ack", Value::integer(d), pt(x, y));
}

}  // namespace

TEST_CASE("indexed function values") {
  // exhausted index yields the default leaf for any arguments
  for (long long x : {-3LL, 0LL, 2LL, 9LL})
    for (long long y : {-1LL, 0LL, 4LL}) CHECK(iack(0, x, y) == Value::integer(y + 1));

  for (long long d = 1; d <= 9; ++d) CHECK(iack(d, 0, 5) == Value::integer(6));

  // ack(1,1) = 3, reachable at index 4; cross-checked against the direct
  // recursion oracle
  CHECK(iack(4, 1, 1) == Value::integer(3));
  oracle::Interp oi;
  Program prog = parse_program(kAckPlain);
  oi.prog = &prog;
  CHECK(oi.call("ack", pt(1, 1)) == Value::integer(3));
}

TEST_CASE("indexed domain values") {
  CHECK(idom(0, 0, 9));
  CHECK_FALSE(idom(0, 1, 0));
  CHECK(idom(1, 1, 0));
  for (long long d = 0; d <= 64; ++d) CHECK_FALSE(idom(d, -1, 0));
}

TEST_CASE("witness search") {
  CHECK(interp::find_witness_depth(ws(), "ack", pt(0, 5), 64) == DomainVerdict{true, 0});
  CHECK(interp::find_witness_depth(ws(), "ack", pt(1, 0), 64) == DomainVerdict{true, 1});
  CHECK(interp::find_witness_depth(ws(), "ack", pt(-1, 0), 64) == DomainVerdict{false, 64});

  // least-witness invariant: iDom holds at w and fails at w-1
  for (auto [x, y] : std::vector<std::pair<long long, long long>>{
           {0, 5}, {1, 0}, {1, 3}, {2, 2}, {3, 1}}) {
    auto v = interp::find_witness_depth(ws(), "ack", pt(x, y), 4096);
    REQUIRE(v.in_domain);
    CHECK(idom(static_cast<long long>(v.depth), x, y));
    if (v.depth > 0) CHECK_FALSE(idom(static_cast<long long>(v.depth) - 1, x, y));
  }
}

TEST_CASE("witness search against the oracle's linear scan") {
  oracle::Interp oi;
  auto tr = transform::transform_definition(parse_program(kAckPlain).definitions[0]);
  oi.defs[tr.indexed_fn.name] = tr.indexed_fn;
  oi.defs[tr.indexed_dom.name] = tr.indexed_dom;

  for (long long x = -1; x <= 2; ++x) {
    for (long long y = -1; y <= 3; ++y) {
      auto linear = oracle::find_witness_linear(oi, "iack-dom", pt(x, y), 64);
      auto v = interp::find_witness_depth(ws(), "ack", pt(x, y), 64);
      CAPTURE(x);
      CAPTURE(y);
      CHECK(v.in_domain == linear.has_value());
      if (linear) CHECK(v.depth == *linear);
    }
  }
}

TEST_CASE("min-index descent") {
  CHECK(interp::min_index(ws(), "ack", Value::integer(7), pt(0, 5)) == 0);
  CHECK(interp::min_index(ws(), "ack", Value::integer(7), pt(1, 0)) == 1);
  CHECK(interp::min_index(ws(), "ack", Value::integer(7), pt(-1, 0)) == 0);
}

TEST_CASE("measure is the least index") {
  CHECK(interp::measure(ws(), "ack", pt(0, 5), 64) == 0);
  CHECK(interp::measure(ws(), "ack", pt(0, -7), 64) == 0);
  CHECK(interp::measure(ws(), "ack", pt(1, 0), 64) == 1);
  CHECK_FALSE(interp::measure(ws(), "ack", pt(-1, 0), 64).has_value());

  // one unfolding of the measure recursion at (2,2):
  // measure(2,2) = 1 + max(measure(2,1), measure(1, ack(2,1)))
  auto m22 = interp::measure(ws(), "ack", pt(2, 2), 64);
  auto m21 = interp::measure(ws(), "ack", pt(2, 1), 64);
  Value inner = interp::l_eval(ws(), "ack", pt(2, 1), 64);
  REQUIRE(inner == Value::integer(5));
  auto m15 = interp::measure(ws(), "ack", pt(1, 5), 64);
  REQUIRE((m22 && m21 && m15));
  CHECK(*m22 == 1 + std::max(*m21, *m15));
}

TEST_CASE("logical function and domain") {
  CHECK(interp::l_eval(ws(), "ack", pt(0, 5), 64) == Value::integer(6));
  CHECK(interp::l_eval(ws(), "ack", pt(1, 1), 64) == Value::integer(3));
  // off domain: iack at index 0, the default (1+ y)
  CHECK(interp::l_eval(ws(), "ack", pt(-1, 0), 64) == Value::integer(1));

  CHECK(interp::l_dom(ws(), "ack", pt(0, -7), 64) == DomainVerdict{true, 0});
  CHECK(interp::l_dom(ws(), "ack", pt(-1, 0), 64) == DomainVerdict{false, 64});
  auto v = interp::l_dom(ws(), "ack", pt(3, 1), 4096);
  CHECK(v.in_domain);
  CHECK(v.depth == 14);
}

TEST_CASE("interp core properties on a small grid") {
  // determinism, stability and canonical measure, exhaustively for d <= 10
  for (long long x = 0; x <= 2; ++x) {
    for (long long y = 0; y <= 3; ++y) {
      std::vector<bool> dom;
      std::vector<Value> val;
      for (long long d = 0; d <= 10; ++d) {
        dom.push_back(idom(d, x, y));
        val.push_back(iack(d, x, y));
      }
      auto m = interp::measure(ws(), "ack", pt(x, y), 64);
      for (std::size_t d1 = 0; d1 <= 10; ++d1) {
        for (std::size_t d2 = 0; d2 <= 10; ++d2) {
          if (dom[d1] && dom[d2]) CHECK(val[d1] == val[d2]);
          if (dom[d1] && d1 < d2) CHECK(dom[d2]);
        }
        if (dom[d1]) {
          REQUIRE(m.has_value());
          CHECK(val[d1] == val[*m]);
        }
      }
    }
  }
}

TEST_CASE("evaluation is safe from concurrent contexts") {
  // pure workspace: four threads evaluating simultaneously see the same values
  std::vector<std::thread> threads;
  std::vector<std::string> results(4);
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([t, &results] {
      Value v = interp::l_eval(ws(), "ack", pt(2, t), 256);
      results[t] = v.to_string();
    });
  for (auto& th : threads) th.join();
  CHECK(results == std::vector<std::string>{"3", "5", "7", "9"});
}
