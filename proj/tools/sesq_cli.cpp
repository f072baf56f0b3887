// Command line front end: validates definition files and runs their tasks,
// emitting deterministic reports.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "sesq/report.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) sesq::fail(sesq::Errc::syntax_error, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

long env_long(const char* name, long dflt) {
  const char* v = std::getenv(name);
  if (!v) return dflt;
  try {
    return std::stol(v);
  } catch (...) {
    return dflt;
  }
}

void render_human(const sesq::Json& report, std::ostream& os) {
  for (const auto& t : report.at("tasks")) {
    os << t.at("task").get<std::string>() << " [" << t.at("op").get<std::string>() << "] ";
    if (t.at("status") == "ok")
      os << t.at("result").dump() << "\n";
    else
      os << "error: " << t.at("error").get<std::string>() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sesq: finite sesquiads, their modules and sheaf cohomology"};
  app.require_subcommand(1);

  std::string path, task_filter, dot_path;
  bool json_out = false, timings = false;
  sesq::RunOptions opt;
  opt.bound_spec = int(env_long("SESQ_BOUND_SPEC", 8));
  opt.cap_sep = int(env_long("SESQ_CAP_SEP", 3));

  auto* check = app.add_subcommand("check", "parse and validate a definition file");
  check->add_option("file", path, "definition file")->required();

  auto* run = app.add_subcommand("run", "run the tasks of a definition file");
  run->add_option("file", path, "definition file")->required();
  run->add_option("--task", task_filter, "run only the named task");
  run->add_flag("--json", json_out, "print the full canonical JSON report");
  run->add_option("--dot", dot_path, "write the last computed poset as DOT");
  run->add_option("--seed", opt.seed, "seed echoed into the report");
  run->add_option("--bound-spec", opt.bound_spec, "size bound for spectrum enumeration");
  run->add_option("--cap-sep", opt.cap_sep, "degree cap for separability searches");
  run->add_flag("--timings", timings, "include wall-clock timings (breaks determinism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  opt.timings = timings;

  try {
    std::string text = read_file(path);
    sesq::DefinitionFile file = sesq::parse_definition_text(text);
    sesq::Resolved defs = sesq::resolve(file);
    if (check->parsed()) {
      std::cout << "ok: " << defs.order.size() << " definitions, " << defs.tasks.size()
                << " tasks\n";
      return 0;
    }
    if (!task_filter.empty()) {
      bool known = false;
      for (const auto& t : defs.tasks) known = known || t.name == task_filter;
      if (!known) {
        std::cerr << "no task named " << task_filter << "\n";
        return 2;
      }
    }
    auto t0 = std::chrono::steady_clock::now();
    std::string dot;
    bool any_error = false;
    sesq::Json report = sesq::run_definition(defs, opt, task_filter, &dot, &any_error);
    if (opt.timings) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      report["timing_ms"] = ms;
    }
    if (!dot_path.empty() && !dot.empty()) {
      std::ofstream out(dot_path);
      out << dot;
    }
    if (json_out)
      std::cout << report.dump(2) << "\n";
    else
      render_human(report, std::cout);
    return any_error ? 1 : 0;
  } catch (const sesq::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const sesq::InternalInconsistency& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
