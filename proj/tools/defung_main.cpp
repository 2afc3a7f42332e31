#include "defung/exec.h"
#include "defung/interp.h"
#include "defung/parser.h"
#include "defung/printer.h"
#include "defung/totality.h"
#include "defung/verify.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace defung;

struct CommonOpts {
  std::string file;
  std::string format = "text";
  std::int64_t big = (std::int64_t{1} << 61) - 1;
  std::uint64_t safety_cap = 10'000'000;
  std::uint64_t domain_cap = 4096;
  std::uint64_t samples = 200;
  std::uint64_t seed = 0;
  std::string grid;

  bool machine() const { return format == "machine-readable"; }

  exec::ExecConfig exec_config() const { return {big, safety_cap, domain_cap}; }

  verify::CheckPlan plan_for(std::size_t nparams) const {
    verify::CheckPlan plan = verify::default_plan(nparams);
    plan.random_samples = samples;
    plan.seed = seed;
    plan.domain_cap = domain_cap;
    plan.safety_cap = safety_cap;
    if (!grid.empty()) {
      plan.grid.clear();
      std::stringstream ss(grid);
      std::string part;
      while (std::getline(ss, part, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos)
          throw ParseError("bad --grid component (want LO..HI): " + part);
        plan.grid.emplace_back(std::stoll(part.substr(0, dots)),
                               std::stoll(part.substr(dots + 2)));
      }
      if (plan.grid.empty()) throw ParseError("empty --grid");
      while (plan.grid.size() < nparams) plan.grid.push_back(plan.grid.back());
      plan.grid.resize(nparams);
    }
    return plan;
  }
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "text or machine-readable")
      ->check(CLI::IsMember({"text", "machine-readable"}));
  cmd->add_option("--big", opts.big, "fuel bound for indexed execution");
  cmd->add_option("--safety-cap", opts.safety_cap, "recursion depth cap");
  cmd->add_option("--domain-cap", opts.domain_cap, "witness search cap");
  cmd->add_option("--samples", opts.samples, "random sample count");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--grid", opts.grid, "per-parameter ranges, e.g. -1..3,-1..6");
}

std::vector<Value> to_values(const std::vector<std::string>& args) {
  std::vector<Value> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back(Value::integer(BigInt(a)));
  return out;
}

std::vector<std::string> selected_functions(const Program& prog, const std::string& chosen) {
  std::vector<std::string> names;
  for (const auto& def : prog.definitions)
    if (chosen.empty() || def.name == chosen) names.push_back(def.name);
  if (names.empty() && !chosen.empty()) throw Error("no such function: " + chosen);
  return names;
}

void emit_form(const CommonOpts& opts, const std::string& fname, const std::string& kind,
               const std::string& form) {
  if (opts.machine())
    std::cout << "transform function=" << fname << " kind=" << kind << " form=" << form << "\n";
  else
    std::cout << form << "\n";
}

int cmd_transform(const CommonOpts& opts, const std::string& function) {
  Program prog = parse_program_file(opts.file);
  Workspace ws(std::move(prog));
  for (const auto& fname : selected_functions(ws.program(), function)) {
    const FnArtifacts& art = ws.artifacts(fname);
    if (!opts.machine()) std::cout << ";; " << fname << "\n";
    emit_form(opts, fname, "indexed-fn", print_definition(art.tr.indexed_fn));
    emit_form(opts, fname, "indexed-dom", print_definition(art.tr.indexed_dom));
    emit_form(opts, fname, "min-index", print_definition(art.tr.min_index_fn));
    emit_form(opts, fname, "fast", print_definition(art.fast_fn));
    emit_form(opts, fname, "exec-dom", print_definition(art.exec_dom_fn));
    emit_form(opts, fname, "comp", print_definition(art.comp_fn));
    emit_form(opts, fname, "base-case", print_expr(art.tr.base_predicate));
    emit_form(opts, fname, "default", print_expr(art.tr.default_expr));
    const auto& eq = art.tr.derived;
    for (const auto* e : {&eq.l_dom_equation, &eq.l_fn_equation, &eq.measure_equation,
                          &eq.exported_equation}) {
      std::string form = "(equal " + print_expr(e->lhs) + " " + print_expr(e->rhs) + ")";
      emit_form(opts, fname, e->name + "-equation", form);
    }
    if (!opts.machine()) std::cout << "\n";
  }
  return 0;
}

int cmd_eval(const CommonOpts& opts, const std::string& function,
             const std::vector<std::string>& args) {
  Program prog = parse_program_file(opts.file);
  Workspace ws(std::move(prog));
  const FnArtifacts& art = ws.artifacts(function);
  if (art.def->non_executable) throw Error(function + " is marked :non-executable");
  if (args.size() != art.def->params.size())
    throw Error(function + " takes " + std::to_string(art.def->params.size()) +
                " argument(s), got " + std::to_string(args.size()));
  Value result = art.def->indexed_execution
                     ? exec::run(ws, function, to_values(args), opts.exec_config())
                     : exec::run_wrapper(ws, function, to_values(args), opts.exec_config());
  std::cout << result.to_string() << "\n";
  return 0;
}

int report_rows(const CommonOpts& opts, const std::vector<verify::CheckReport>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    if (opts.machine()) {
      std::cout << verify::machine_line(r) << "\n";
    } else {
      std::printf("%-22s %-10s %8llu instances   %s\n", r.name.c_str(), r.function.c_str(),
                  static_cast<unsigned long long>(r.instances), r.passed() ? "pass" : "FAIL");
      std::size_t shown = 0;
      for (const auto& f : r.failures) {
        if (shown++ == 5) {
          std::printf("    ... %zu more failures\n", r.failures.size() - 5);
          break;
        }
        std::printf("    at %s: %s\n", f.point.c_str(), f.detail.c_str());
      }
    }
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

int cmd_check(const CommonOpts& opts, const std::string& function) {
  Program prog = parse_program_file(opts.file);
  Workspace ws(std::move(prog));
  std::vector<verify::CheckReport> reports;
  for (const auto& fname : selected_functions(ws.program(), function)) {
    const FnArtifacts& art = ws.artifacts(fname);
    verify::Checker checker(ws, fname, opts.plan_for(art.def->params.size()),
                            opts.exec_config());
    for (auto& r : checker.run_core()) reports.push_back(std::move(r));
  }
  return report_rows(opts, reports);
}

int cmd_bench(const CommonOpts& opts, const std::string& function,
              const std::vector<std::string>& args) {
  Program prog = parse_program_file(opts.file);
  Workspace ws(std::move(prog));
  const FnArtifacts& art = ws.artifacts(function);
  if (args.size() != art.def->params.size())
    throw Error(function + " takes " + std::to_string(art.def->params.size()) +
                " argument(s), got " + std::to_string(args.size()));
  auto values = to_values(args);
  if (!opts.machine())
    std::printf("%-10s %14s %14s %10s %14s\n", "mode", "call_count", "prim_count",
                "max_depth", "domain_checks");
  for (exec::StepMode mode : {exec::StepMode::Indexed, exec::StepMode::Fast,
                              exec::StepMode::Domain, exec::StepMode::Wrapper}) {
    vm::EvalStats st = exec::count_steps(ws, mode, function, values, opts.exec_config());
    if (opts.machine()) {
      std::cout << "bench mode=" << exec::step_mode_name(mode) << " function=" << function
                << " calls=" << st.call_count << " prims=" << st.prim_count
                << " depth=" << st.max_recursion_depth << " domain_checks=" << st.domain_checks
                << "\n";
    } else {
      std::printf("%-10s %14llu %14llu %10llu %14llu\n", exec::step_mode_name(mode),
                  static_cast<unsigned long long>(st.call_count),
                  static_cast<unsigned long long>(st.prim_count),
                  static_cast<unsigned long long>(st.max_recursion_depth),
                  static_cast<unsigned long long>(st.domain_checks));
    }
  }
  return 0;
}

int cmd_total(const CommonOpts& opts, const std::string& function) {
  Program prog = parse_program_file(opts.file);
  Workspace ws(std::move(prog));
  std::vector<verify::CheckReport> reports;
  for (const auto& spec : ws.program().totality_specs) {
    if (!function.empty() && spec.fname != function) continue;
    const FnArtifacts& art = ws.artifacts(spec.fname);
    reports.push_back(totality::check_total(
        ws, spec, opts.plan_for(art.def->params.size()), opts.exec_config()));
  }
  if (reports.empty()) throw Error("no totality specs selected");
  return report_rows(opts, reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"step-indexed partial function workbench"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string function;
  std::vector<std::string> fn_args;

  auto* transform = app.add_subcommand("transform", "print the generated definitions");
  transform->add_option("file", opts.file)->required();
  transform->add_option("--function", function);
  add_common_flags(transform, opts);

  auto* eval = app.add_subcommand("eval", "evaluate a function on integer arguments");
  eval->add_option("file", opts.file)->required();
  eval->add_option("function", function)->required();
  eval->add_option("args", fn_args);
  add_common_flags(eval, opts);

  auto* check = app.add_subcommand("check", "run the property suite");
  check->add_option("file", opts.file)->required();
  check->add_option("--function", function);
  add_common_flags(check, opts);

  auto* bench = app.add_subcommand("bench", "step counts for each execution mode");
  bench->add_option("file", opts.file)->required();
  bench->add_option("function", function)->required();
  bench->add_option("args", fn_args);
  add_common_flags(bench, opts);

  auto* total = app.add_subcommand("total", "check the def::total specs");
  total->add_option("file", opts.file)->required();
  total->add_option("--function", function);
  add_common_flags(total, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (transform->parsed()) return cmd_transform(opts, function);
    if (eval->parsed()) return cmd_eval(opts, function, fn_args);
    if (check->parsed()) return cmd_check(opts, function);
    if (bench->parsed()) return cmd_bench(opts, function, fn_args);
    if (total->parsed()) return cmd_total(opts, function);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
