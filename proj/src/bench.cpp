#include "gtlc/bench.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "gtlc/frontend.hpp"
#include "gtlc/translate.hpp"

namespace fs = std::filesystem;

namespace gtlc {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<CorpusEntry> discover_corpus(const fs::path& dir) {
  std::vector<CorpusEntry> out;
  for (const auto& item : fs::directory_iterator(dir)) {
    if (item.is_regular_file() && item.path().extension() == ".gtl") {
      out.push_back(CorpusEntry{item.path().stem().string(), {Configuration{"", item.path()}}});
      continue;
    }
    if (!item.is_directory()) continue;
    const std::string name = item.path().filename().string();
    const std::regex config(std::regex_replace(name, std::regex(R"([.^$|()\[\]{}*+?\\])"), R"(\$&)") +
                            "-([01]+)\\.gtl");
    CorpusEntry entry{name, {}};
    for (const auto& f : fs::directory_iterator(item.path())) {
      std::smatch m;
      const std::string file = f.path().filename().string();
      if (std::regex_match(file, m, config)) entry.configurations.push_back(Configuration{m[1].str(), f.path()});
    }
    if (entry.configurations.empty()) continue;
    std::sort(entry.configurations.begin(), entry.configurations.end(), [](const auto& a, const auto& b) {
      const auto ones = [](const std::string& s) { return std::count(s.begin(), s.end(), '1'); };
      if (ones(a.id) != ones(b.id)) return ones(a.id) < ones(b.id);
      return a.id < b.id;
    });
    out.push_back(std::move(entry));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

RunReport run_program(const std::string& text, const std::string& name, const std::string& configuration,
                      const RunOptions& options) {
  auto p = load_program(text);
  if (!p) {
    std::string msg;
    for (const auto& d : p.diagnostics) msg += format(d, text, name) + "\n";
    throw std::invalid_argument(msg);
  }
  RunReport r;
  r.program = name;
  r.configuration = configuration;
  const CompiledProgram compiled = compile_program(*p);
  auto original = eval(compiled.root, options.fuel);
  r.original = RunSummary{std::move(original.answer), original.metrics};
  Optimized o = optimize_program(*p, options.optimize);
  auto optimized = eval(o.program.root, options.fuel);
  r.optimized = RunSummary{std::move(optimized.answer), optimized.metrics};
  r.optimization = std::move(o.report);
  return r;
}

BenchEntry bench_entry(const CorpusEntry& entry, int iterations, const RunOptions& options) {
  BenchEntry out{entry.name, {}};
  double baseline = 0;
  for (const auto& c : entry.configurations) {
    BenchRow row;
    try {
      const std::string text = read_file(c.path);
      row.report = run_program(text, c.path.string(), c.id, options);
      auto p = load_program(text);
      const ConPtr original = compile_program(*p).root;
      const ConPtr optimized = optimize_program(*p, options.optimize).program.root;
      double a = 0;
      double b = 0;
      for (int i = 0; i < iterations; ++i) {
        a += static_cast<double>(eval(original, options.fuel).metrics.wall_time.count());
        b += static_cast<double>(eval(optimized, options.fuel).metrics.wall_time.count());
      }
      row.original_ns = a / std::max(iterations, 1);
      row.optimized_ns = b / std::max(iterations, 1);
      row.agree = same_observation(row.report.original.answer, row.report.optimized->answer);
      if (!row.agree) row.error = "optimized answer differs";
    } catch (const std::exception& e) {
      row.agree = false;
      row.error = e.what();
    }
    if (c.untyped() && row.error.empty()) baseline = row.original_ns;
    out.rows.push_back(std::move(row));
  }
  for (auto& row : out.rows) {
    if (baseline > 0) {
      row.original_overhead = row.original_ns / baseline;
      row.optimized_overhead = row.optimized_ns / baseline;
    }
  }
  return out;
}

void to_json(Json& j, const BenchRow& r) {
  j = Json{{"run", r.report},
           {"original_ns", r.original_ns},
           {"optimized_ns", r.optimized_ns},
           {"original_overhead", r.original_overhead},
           {"optimized_overhead", r.optimized_overhead},
           {"agree", r.agree}};
  if (!r.error.empty()) j["error"] = r.error;
}

void to_json(Json& j, const BenchEntry& e) { j = Json{{"name", e.name}, {"configurations", e.rows}}; }

}  // namespace gtlc
