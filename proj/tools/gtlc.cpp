// Command-line driver: check, run, analyze, optimize, bench.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gtlc/bench.hpp"
#include "gtlc/frontend.hpp"
#include "gtlc/optimizer.hpp"
#include "gtlc/printer.hpp"
#include "gtlc/report.hpp"
#include "gtlc/translate.hpp"

namespace {

using namespace gtlc;

enum Exit : int { kOk = 0, kDiagnostics = 1, kBlame = 2, kStuck = 3, kOutOfFuel = 4 };

// Corpus hot loops take ~3.4e7 steps, past the library default.
constexpr std::uint64_t kCliFuel = 1'000'000'000;

struct Options {
  std::string path;
  std::string module;
  std::string emit;
  std::string json_path;
  bool optimized = false;
  bool trust_typed = true;
  std::uint64_t fuel = kCliFuel;
  std::size_t budget = kDefaultStateCap;
  int iterations = 3;
};

int exit_for(const Answer& a) {
  switch (a.kind) {
    case Answer::Kind::Value: return kOk;
    case Answer::Kind::Blamed: return kBlame;
    case Answer::Kind::Stuck: return kStuck;
    case Answer::Kind::OutOfFuel: return kOutOfFuel;
  }
  return kOk;
}

void emit_json(const Options& o, const Json& body) {
  const Json doc = document(body);
  if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    out << doc.dump(2) << "\n";
  }
  std::cout << doc.dump(2) << "\n";
}

// Nullopt after reporting diagnostics on stderr.
std::optional<SurfaceProgram> load(const Options& o) {
  std::string text;
  try {
    text = read_file(o.path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return std::nullopt;
  }
  auto p = load_program(text);
  if (!p) {
    for (const auto& d : p.diagnostics) std::cerr << format(d, text, o.path) << "\n";
    return std::nullopt;
  }
  return *p;
}

OptimizeOptions optimize_options(const Options& o) { return OptimizeOptions{o.trust_typed, o.budget}; }

int cmd_check(const Options& o) { return load(o) ? kOk : kDiagnostics; }

int cmd_run(const Options& o) {
  auto p = load(o);
  if (!p) return kDiagnostics;
  RunReport r;
  r.program = o.path;
  const ConPtr root = compile_program(*p).root;
  if (o.emit == "con") std::cerr << pretty(*root) << "\n";
  auto original = eval(root, o.fuel);
  r.original = RunSummary{original.answer, original.metrics};
  if (!o.optimized) {
    emit_json(o, Json(r));
    return exit_for(original.answer);
  }
  // The original run is kept alongside for comparison.
  Optimized opt = optimize_program(*p, optimize_options(o));
  if (o.emit == "optimized") std::cerr << pretty(*opt.program.root) << "\n";
  auto optimized = eval(opt.program.root, o.fuel);
  r.optimized = RunSummary{optimized.answer, optimized.metrics};
  r.optimization = std::move(opt.report);
  emit_json(o, Json(r));
  return exit_for(optimized.answer);
}

int cmd_analyze(const Options& o) {
  auto p = load(o);
  if (!p) return kDiagnostics;
  if (!o.module.empty()) {
    if (!p->find(Party{o.module})) {
      std::cerr << "unknown module '" << o.module << "'\n";
      return kDiagnostics;
    }
    const Verdict v = verify_module(*p, Party{o.module}, o.budget);
    if (o.emit == "con") std::cerr << pretty(*compile_program(slice_for_module(*p, Party{o.module})).root) << "\n";
    emit_json(o, o.emit == "blame" ? Json(v.blame) : Json(v));
    return kOk;
  }
  Json verdicts = Json::array();
  for (const auto& m : p->modules) verdicts.push_back(verify_module(*p, m.name, o.budget));
  emit_json(o, Json{{"verdicts", verdicts}});
  return kOk;
}

int cmd_optimize(const Options& o) {
  auto p = load(o);
  if (!p) return kDiagnostics;
  if (o.emit == "con") {
    std::cout << pretty(*compile_program(*p).root) << "\n";
    return kOk;
  }
  Optimized opt = optimize_program(*p, optimize_options(o));
  if (o.emit == "optimized") {
    std::cout << pretty(*opt.program.root) << "\n";
    return kOk;
  }
  emit_json(o, Json{{"program", print(*opt.program.root)}, {"report", opt.report}});
  return kOk;
}

int cmd_bench(const Options& o) {
  std::vector<CorpusEntry> entries;
  try {
    entries = discover_corpus(o.path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kDiagnostics;
  }
  RunOptions run{o.fuel, optimize_options(o)};
  Json all = Json::array();
  std::cerr << "entry\tconfig\tchecks\tchecks(opt)\toverhead\toverhead(opt)\tagree\n";
  for (const auto& entry : entries) {
    BenchEntry b = bench_entry(entry, o.iterations, run);
    for (const auto& row : b.rows) {
      const auto checks = row.report.original.metrics.flat_checks;
      const auto opt_checks = row.report.optimized ? row.report.optimized->metrics.flat_checks : 0;
      std::cerr << b.name << "\t" << (row.report.configuration.empty() ? "-" : row.report.configuration) << "\t"
                << checks << "\t" << opt_checks << "\t" << row.original_overhead << "\t" << row.optimized_overhead
                << "\t" << (row.agree ? "yes" : "NO " + row.error) << "\n";
    }
    all.push_back(b);
  }
  emit_json(o, Json{{"entries", all}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gradual typing with contract verification"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, const char* what) {
    sub->add_option("path", o.path, what)->required();
    sub->add_option("--json", o.json_path, "Also write the JSON report to this file");
    sub->add_option("--emit", o.emit, "con | optimized | blame")
        ->check(CLI::IsMember({"con", "optimized", "blame"}));
  };
  auto optimizing = [&](CLI::App* sub) {
    sub->add_option("--trust-typed", o.trust_typed, "Treat typed modules as never blamed")->default_val(true);
    sub->add_option("--budget", o.budget, "Abstract state cap per module analysis");
  };

  auto* check = app.add_subcommand("check", "Parse and check well-formedness");
  check->add_option("path", o.path, "Program file")->required();

  auto* run = app.add_subcommand("run", "Evaluate a program");
  common(run, "Program file");
  optimizing(run);
  run->add_flag("--optimized", o.optimized, "Optimize before running");
  run->add_option("--fuel", o.fuel, "Step limit");

  auto* analyze = app.add_subcommand("analyze", "Verify modules against their slices");
  common(analyze, "Program file");
  analyze->add_option("--module", o.module, "Analyze only this module");
  analyze->add_option("--budget", o.budget, "Abstract state cap");

  auto* optimize = app.add_subcommand("optimize", "Weaken or remove verified contracts");
  common(optimize, "Program file");
  optimizing(optimize);

  auto* bench = app.add_subcommand("bench", "Benchmark a corpus directory");
  common(bench, "Corpus directory");
  optimizing(bench);
  bench->add_option("--iterations", o.iterations, "Timed runs per configuration")->check(CLI::PositiveNumber);
  bench->add_option("--fuel", o.fuel, "Step limit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(o);
    if (*run) return cmd_run(o);
    if (*analyze) return cmd_analyze(o);
    if (*optimize) return cmd_optimize(o);
    if (*bench) return cmd_bench(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDiagnostics;
  }
  return kOk;
}
