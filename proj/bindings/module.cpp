#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "defung/exec.h"
#include "defung/interp.h"
#include "defung/parser.h"
#include "defung/printer.h"
#include "defung/totality.h"
#include "defung/verify.h"

namespace py = pybind11;
using namespace defung;

namespace {

py::object to_py(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Nil:
      return py::none();
    case Value::Kind::Bool:
      return py::bool_(true);
    case Value::Kind::Int:
      return py::reinterpret_steal<py::object>(
          PyLong_FromString(v.as_int().str().c_str(), nullptr, 10));
    case Value::Kind::Sym:
      return py::str(v.sym_name());
    case Value::Kind::Pair:
      return py::make_tuple(to_py(v.car()), to_py(v.cdr()));
  }
  return py::none();
}

Value from_py(const py::handle& h) {
  if (h.is_none()) return Value::nil();
  if (py::isinstance<py::bool_>(h)) return Value::boolean(h.cast<bool>());
  if (py::isinstance<py::int_>(h)) return Value::integer(BigInt(py::str(h).cast<std::string>()));
  if (py::isinstance<py::str>(h)) return Value::symbol(h.cast<std::string>());
  if (py::isinstance<py::tuple>(h)) {
    auto t = h.cast<py::tuple>();
    if (t.size() != 2) throw py::value_error("pairs are 2-tuples");
    return Value::cons(from_py(t[0]), from_py(t[1]));
  }
  throw py::value_error("cannot convert to a program value");
}

std::vector<Value> values_from(const py::sequence& seq) {
  std::vector<Value> out;
  out.reserve(seq.size());
  for (const auto& item : seq) out.push_back(from_py(item));
  return out;
}

py::dict stats_dict(const vm::EvalStats& st) {
  py::dict d;
  d["call_count"] = st.call_count;
  d["prim_count"] = st.prim_count;
  d["max_recursion_depth"] = st.max_recursion_depth;
  d["domain_checks"] = st.domain_checks;
  return d;
}

py::dict report_dict(const verify::CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["function"] = r.function;
  d["instances"] = r.instances;
  d["passed"] = r.passed();
  py::list failures;
  for (const auto& f : r.failures) {
    py::dict fd;
    fd["point"] = f.point;
    fd["detail"] = f.detail;
    failures.append(fd);
  }
  d["failures"] = failures;
  return d;
}

exec::StepMode mode_from(const std::string& name) {
  if (name == "indexed") return exec::StepMode::Indexed;
  if (name == "fast") return exec::StepMode::Fast;
  if (name == "domain") return exec::StepMode::Domain;
  if (name == "wrapper") return exec::StepMode::Wrapper;
  throw py::value_error("mode must be indexed, fast, domain or wrapper");
}

class PyWorkspace {
 public:
  explicit PyWorkspace(const std::string& text)
      : ws_(std::make_unique<Workspace>(parse_program(text))) {}

  static PyWorkspace from_file(const std::string& path) {
    return PyWorkspace(std::make_unique<Workspace>(parse_program_file(path)));
  }

  std::vector<std::string> functions() const {
    std::vector<std::string> out;
    for (const auto& def : ws_->program().definitions) out.push_back(def.name);
    return out;
  }

  std::vector<std::string> params(const std::string& fname) const {
    return ws_->artifacts(fname).def->params;
  }

  exec::ExecConfig cfg(std::int64_t big, std::uint64_t safety_cap,
                       std::uint64_t domain_cap) const {
    return {big, safety_cap, domain_cap};
  }

  py::object run(const std::string& fname, const py::sequence& args, std::int64_t big,
                 std::uint64_t safety_cap, std::uint64_t domain_cap) {
    return to_py(exec::run(*ws_, fname, values_from(args), cfg(big, safety_cap, domain_cap)));
  }

  py::object fast_eval(const std::string& fname, const py::sequence& args, std::int64_t big,
                       std::uint64_t safety_cap, std::uint64_t domain_cap) {
    return to_py(
        exec::fast_eval(*ws_, fname, values_from(args), cfg(big, safety_cap, domain_cap)));
  }

  bool exec_dom(const std::string& fname, const py::sequence& args, std::int64_t big,
                std::uint64_t safety_cap, std::uint64_t domain_cap) {
    return exec::exec_dom(*ws_, fname, values_from(args), cfg(big, safety_cap, domain_cap));
  }

  py::object comp_eval(const std::string& fname, const py::handle& d, const py::sequence& args,
                       std::int64_t big, std::uint64_t safety_cap, std::uint64_t domain_cap) {
    return to_py(exec::comp_eval(*ws_, fname, from_py(d), values_from(args),
                                 cfg(big, safety_cap, domain_cap)));
  }

  py::object run_wrapper(const std::string& fname, const py::sequence& args, std::int64_t big,
                         std::uint64_t safety_cap, std::uint64_t domain_cap) {
    return to_py(
        exec::run_wrapper(*ws_, fname, values_from(args), cfg(big, safety_cap, domain_cap)));
  }

  py::dict count_steps(const std::string& mode, const std::string& fname,
                       const py::sequence& args, std::int64_t big, std::uint64_t safety_cap,
                       std::uint64_t domain_cap) {
    return stats_dict(exec::count_steps(*ws_, mode_from(mode), fname, values_from(args),
                                        cfg(big, safety_cap, domain_cap)));
  }

  py::object eval_indexed_fn(const std::string& fname, const py::handle& d,
                             const py::sequence& args) {
    return to_py(interp::eval_indexed_fn(*ws_, fname, from_py(d), values_from(args)));
  }

  bool eval_indexed_dom(const std::string& fname, const py::handle& d,
                        const py::sequence& args) {
    return interp::eval_indexed_dom(*ws_, fname, from_py(d), values_from(args));
  }

  py::object find_witness_depth(const std::string& fname, const py::sequence& args,
                                std::uint64_t cap) {
    auto v = interp::find_witness_depth(*ws_, fname, values_from(args), cap);
    return py::make_tuple(v.in_domain, v.depth);
  }

  py::object min_index(const std::string& fname, const py::handle& d,
                       const py::sequence& args) {
    return to_py(Value::integer(interp::min_index(*ws_, fname, from_py(d), values_from(args))));
  }

  py::object measure(const std::string& fname, const py::sequence& args, std::uint64_t cap) {
    auto m = interp::measure(*ws_, fname, values_from(args), cap);
    if (!m) return py::none();
    return py::int_(*m);
  }

  py::object l_eval(const std::string& fname, const py::sequence& args, std::uint64_t cap) {
    return to_py(interp::l_eval(*ws_, fname, values_from(args), cap));
  }

  py::object l_dom(const std::string& fname, const py::sequence& args, std::uint64_t cap) {
    auto v = interp::l_dom(*ws_, fname, values_from(args), cap);
    return py::make_tuple(v.in_domain, v.depth);
  }

  py::dict transform_forms(const std::string& fname) {
    const FnArtifacts& art = ws_->artifacts(fname);
    py::dict d;
    d["indexed_fn"] = print_definition(art.tr.indexed_fn);
    d["indexed_dom"] = print_definition(art.tr.indexed_dom);
    d["min_index"] = print_definition(art.tr.min_index_fn);
    d["fast"] = print_definition(art.fast_fn);
    d["exec_dom"] = print_definition(art.exec_dom_fn);
    d["comp"] = print_definition(art.comp_fn);
    d["base_case"] = print_expr(art.tr.base_predicate);
    d["default"] = print_expr(art.tr.default_expr);
    const auto& eq = art.tr.derived;
    d["l_dom_equation"] = "(equal " + print_expr(eq.l_dom_equation.lhs) + " " +
                          print_expr(eq.l_dom_equation.rhs) + ")";
    d["l_fn_equation"] = "(equal " + print_expr(eq.l_fn_equation.lhs) + " " +
                         print_expr(eq.l_fn_equation.rhs) + ")";
    d["measure_equation"] = "(equal " + print_expr(eq.measure_equation.lhs) + " " +
                            print_expr(eq.measure_equation.rhs) + ")";
    d["exported_equation"] = "(equal " + print_expr(eq.exported_equation.lhs) + " " +
                             print_expr(eq.exported_equation.rhs) + ")";
    return d;
  }

  py::list check(const std::string& fname, std::uint64_t samples, std::uint64_t seed,
                 std::int64_t big, std::uint64_t safety_cap, std::uint64_t domain_cap) {
    py::list out;
    for (const auto& def : ws_->program().definitions) {
      if (!fname.empty() && def.name != fname) continue;
      verify::CheckPlan plan = verify::default_plan(def.params.size());
      plan.random_samples = samples;
      plan.seed = seed;
      plan.domain_cap = domain_cap;
      plan.safety_cap = safety_cap;
      verify::Checker checker(*ws_, def.name, plan, cfg(big, safety_cap, domain_cap));
      for (const auto& r : checker.run_core()) out.append(report_dict(r));
    }
    return out;
  }

  py::list check_total(const std::string& fname, std::uint64_t samples, std::uint64_t seed,
                       std::int64_t big, std::uint64_t safety_cap, std::uint64_t domain_cap) {
    py::list out;
    for (const auto& spec : ws_->program().totality_specs) {
      if (!fname.empty() && spec.fname != fname) continue;
      const FnArtifacts& art = ws_->artifacts(spec.fname);
      verify::CheckPlan plan = verify::default_plan(art.def->params.size());
      plan.random_samples = samples;
      plan.seed = seed;
      plan.domain_cap = domain_cap;
      plan.safety_cap = safety_cap;
      out.append(report_dict(totality::check_total(*ws_, spec, plan,
                                                   cfg(big, safety_cap, domain_cap))));
    }
    return out;
  }

 private:
  explicit PyWorkspace(std::unique_ptr<Workspace> ws) : ws_(std::move(ws)) {}
  std::unique_ptr<Workspace> ws_;
};

constexpr std::int64_t kDefaultBig = (std::int64_t{1} << 61) - 1;

}  // namespace

PYBIND11_MODULE(_defung_core, m) {
  m.doc() = "step-indexed partial function workbench";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<RecursionSafetyCapError>(m, "RecursionSafetyCap");
  py::register_exception<DynamicTypeError>(m, "DynamicTypeErr");

  py::class_<PyWorkspace>(m, "Workspace")
      .def(py::init<const std::string&>(), py::arg("text"))
      .def_static("from_file", &PyWorkspace::from_file, py::arg("path"))
      .def("functions", &PyWorkspace::functions)
      .def("params", &PyWorkspace::params, py::arg("function"))
      .def("run", &PyWorkspace::run, py::arg("function"), py::arg("args"),
           py::arg("big") = kDefaultBig, py::arg("safety_cap") = 10'000'000,
           py::arg("domain_cap") = 4096)
      .def("fast_eval", &PyWorkspace::fast_eval, py::arg("function"), py::arg("args"),
           py::arg("big") = kDefaultBig, py::arg("safety_cap") = 10'000'000,
           py::arg("domain_cap") = 4096)
      .def("exec_dom", &PyWorkspace::exec_dom, py::arg("function"), py::arg("args"),
           py::arg("big") = kDefaultBig, py::arg("safety_cap") = 10'000'000,
           py::arg("domain_cap") = 4096)
      .def("comp_eval", &PyWorkspace::comp_eval, py::arg("function"), py::arg("d"),
           py::arg("args"), py::arg("big") = kDefaultBig, py::arg("safety_cap") = 10'000'000,
           py::arg("domain_cap") = 4096)
      .def("run_wrapper", &PyWorkspace::run_wrapper, py::arg("function"), py::arg("args"),
           py::arg("big") = kDefaultBig, py::arg("safety_cap") = 10'000'000,
           py::arg("domain_cap") = 4096)
      .def("count_steps", &PyWorkspace::count_steps, py::arg("mode"), py::arg("function"),
           py::arg("args"), py::arg("big") = kDefaultBig, py::arg("safety_cap") = 10'000'000,
           py::arg("domain_cap") = 4096)
      .def("eval_indexed_fn", &PyWorkspace::eval_indexed_fn, py::arg("function"), py::arg("d"),
           py::arg("args"))
      .def("eval_indexed_dom", &PyWorkspace::eval_indexed_dom, py::arg("function"),
           py::arg("d"), py::arg("args"))
      .def("find_witness_depth", &PyWorkspace::find_witness_depth, py::arg("function"),
           py::arg("args"), py::arg("cap") = 4096)
      .def("min_index", &PyWorkspace::min_index, py::arg("function"), py::arg("d"),
           py::arg("args"))
      .def("measure", &PyWorkspace::measure, py::arg("function"), py::arg("args"),
           py::arg("cap") = 4096)
      .def("l_eval", &PyWorkspace::l_eval, py::arg("function"), py::arg("args"),
           py::arg("cap") = 4096)
      .def("l_dom", &PyWorkspace::l_dom, py::arg("function"), py::arg("args"),
           py::arg("cap") = 4096)
      .def("transform_forms", &PyWorkspace::transform_forms, py::arg("function"))
      .def("check", &PyWorkspace::check, py::arg("function") = std::string(),
           py::arg("samples") = 200, py::arg("seed") = 0, py::arg("big") = kDefaultBig,
           py::arg("safety_cap") = 10'000'000, py::arg("domain_cap") = 4096)
      .def("check_total", &PyWorkspace::check_total, py::arg("function") = std::string(),
           py::arg("samples") = 200, py::arg("seed") = 0, py::arg("big") = kDefaultBig,
           py::arg("safety_cap") = 10'000'000, py::arg("domain_cap") = 4096);

  m.attr("DEFAULT_BIG") = kDefaultBig;
}
