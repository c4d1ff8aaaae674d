#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "gtlc/bench.hpp"
#include "gtlc/generator.hpp"
#include "gtlc/report.hpp"
#include "gtlc/translate.hpp"
#include "support.hpp"

namespace gtlc {
namespace {

namespace fs = std::filesystem;
using testing::kRunning;
using testing::program;

// ---- generator

TEST(Generator, WellFormedAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const GenConfig cfg{.seed = seed};
    const SurfaceProgram p = gen_program(cfg);
    ASSERT_TRUE(check_wellformed(p).empty()) << "seed " << seed << "\n" << print(p);
    ASSERT_TRUE(structurally_equal(p, gen_program(cfg))) << "seed " << seed;
  }
}

TEST(Generator, SingleModule) {
  const SurfaceProgram p = gen_program(GenConfig{.seed = 0, .modules = 1});
  ASSERT_EQ(p.modules.size(), 1u);
  EXPECT_EQ(p.modules[0].name, Party{"main"});
  EXPECT_TRUE(check_wellformed(p).empty());
}

TEST(Generator, PrintParseRoundTrip) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const SurfaceProgram p = gen_program(GenConfig{.seed = seed, .modules = 6, .size = 5});
    auto again = parse_program(print(p));
    ASSERT_TRUE(again) << print(p);
    ASSERT_TRUE(structurally_equal(p, *again)) << print(p);
  }
}

TEST(Generator, PrefixesStayWellFormed) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SurfaceProgram p = gen_program(GenConfig{.seed = seed, .modules = 5});
    while (!p.modules.empty()) {
      for (const auto& d : check_wellformed(p)) {
        ASSERT_EQ(d.kind, Diagnostic::Kind::MainMissing) << "seed " << seed << ": " << d.message;
      }
      p.modules.pop_back();
    }
  }
}

TEST(Generator, BlameIsCommon) {
  int blamed = 0;
  int values = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const Answer a = eval(compile_program(gen_program(GenConfig{.seed = seed})).root).answer;
    blamed += a.is_blame();
    values += a.is_value();
  }
  EXPECT_GE(blamed, 100);
  EXPECT_GE(values, 500);
}

// ---- JSON reports

TEST(Report, RunReportRoundTrips) {
  const RunReport r = run_program(kRunning, "running.gtl", "");
  const Json j = r;
  const RunReport back = j.get<RunReport>();
  EXPECT_EQ(Json(back), j);
  EXPECT_EQ(back.original.answer.label, (BlameLabel{Party{"u2"}, Party{"t1"}}));
  ASSERT_TRUE(back.optimization);
  EXPECT_EQ(back.optimization->boundaries.size(), 2u);
}

TEST(Report, ValuesRoundTrip) {
  for (const char* text : {"5", "#f", "int?", "(λ (x) x)", "(mon (a b) (-> int? (-> bool? any/c)) (λ (x) x))",
                           "(mon (a b) int? #t)", "(1 1)"}) {
    auto e = parse_con(text);
    ASSERT_TRUE(e);
    const Answer a = eval(*e).answer;
    const Json j = a;
    EXPECT_EQ(Json(j.get<Answer>()), j) << text;
  }
}

TEST(Report, DocumentCarriesSchema) {
  const Json d = document(Json{{"x", 1}});
  EXPECT_EQ(d.at("schema"), kSchemaVersion);
  EXPECT_EQ(d.at("x"), 1);
}

TEST(Report, BlameSetShape) {
  BlameSet b;
  b.labels.insert(BlameLabel{Party{"u1"}, Party{"t1"}});
  const Json j = b;
  EXPECT_EQ(j.at("labels")[0].at("blamed"), "u1");
  EXPECT_EQ(j.at("exhausted"), false);
  EXPECT_EQ(j.get<BlameSet>().labels, b.labels);
}

// ---- corpus

TEST(Corpus, LatticesAreOrdered) {
  const auto entries = discover_corpus(GTLC_CORPUS);
  bool saw_lattice = false;
  for (const auto& e : entries) {
    if (e.configurations.size() == 1 && e.configurations[0].id.empty()) continue;
    saw_lattice = true;
    const std::size_t bits = e.configurations[0].id.size();
    ASSERT_EQ(e.configurations.size(), std::size_t{1} << bits) << e.name;
    EXPECT_TRUE(e.configurations.front().untyped());
    EXPECT_EQ(e.configurations.back().id, std::string(bits, '1'));
  }
  EXPECT_TRUE(saw_lattice);
}

TEST(Corpus, TwoModuleLatticeHasFourConfigurations) {
  for (const auto& e : discover_corpus(GTLC_CORPUS)) {
    if (e.name != "identity") continue;
    std::vector<std::string> ids;
    for (const auto& c : e.configurations) ids.push_back(c.id);
    EXPECT_EQ(ids, (std::vector<std::string>{"00", "01", "10", "11"}));
    return;
  }
  FAIL() << "identity entry missing";
}

TEST(Corpus, EveryProgramIsWellFormedAndAgrees) {
  for (const auto& e : discover_corpus(GTLC_CORPUS)) {
    for (const auto& c : e.configurations) {
      const std::string text = read_file(c.path);
      ASSERT_TRUE(load_program(text)) << c.path;
      const RunReport r = run_program(text, c.path.string(), c.id, RunOptions{1'000'000'000, {}});
      EXPECT_TRUE(same_observation(r.original.answer, r.optimized->answer)) << c.path;
      EXPECT_NE(r.original.answer.kind, Answer::Kind::OutOfFuel) << c.path;
    }
  }
}

TEST(Bench, UntypedBaselineIsOne) {
  for (const auto& e : discover_corpus(GTLC_CORPUS)) {
    if (e.name != "identity") continue;
    const BenchEntry b = bench_entry(e, 1);
    ASSERT_EQ(b.rows.size(), 4u);
    EXPECT_DOUBLE_EQ(b.rows[0].original_overhead, 1.0);
    for (const auto& row : b.rows) EXPECT_TRUE(row.agree) << row.error;
  }
}

// ---- command line

struct Cli {
  int status;
  std::string out;
};

Cli cli(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / ("gtlc_cli_" + std::to_string(::getpid()) + ".out");
  const std::string cmd = std::string(GTLC_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  Cli r{WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out)};
  fs::remove(out);
  return r;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("gtlc_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << text;
  return p;
}

const std::string kCorpus = GTLC_CORPUS;

TEST(Cli, Check) {
  EXPECT_EQ(cli("check " + kCorpus + "/running.gtl").status, 0);
  const fs::path forward = write_temp("forward.gtl", "(module u (require t) t)\n(module t Int 1)\n(module main 0)");
  EXPECT_EQ(cli("check " + forward.string()).status, 1);
  const fs::path empty = write_temp("empty.gtl", "");
  EXPECT_EQ(cli("check " + empty.string()).status, 1);
  EXPECT_EQ(cli("check /nonexistent/file.gtl").status, 1);
  fs::remove(forward);
  fs::remove(empty);
}

TEST(Cli, RunExitCodes) {
  const Cli running = cli("run " + kCorpus + "/running.gtl");
  EXPECT_EQ(running.status, 2);
  const Json j = Json::parse(running.out);
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("original").at("answer").at("label").at("blamed"), "u2");
  EXPECT_EQ(j.at("original").at("answer").at("label").at("holder"), "t1");

  const Cli trivial = cli("run " + kCorpus + "/trivial.gtl");
  EXPECT_EQ(trivial.status, 0);
  const Json t = Json::parse(trivial.out);
  EXPECT_EQ(t.at("original").at("answer").at("value").at("int"), "5");
  EXPECT_EQ(t.at("original").at("metrics").at("flat_checks"), 0);

  const fs::path stuck = write_temp("stuck.gtl", "(module main (5 5))");
  EXPECT_EQ(cli("run " + stuck.string()).status, 3);
  const fs::path loop = write_temp("loop.gtl", "(module main ((λ (x) (x x)) (λ (x) (x x))))");
  EXPECT_EQ(cli("run --fuel 1000 " + loop.string()).status, 4);
  fs::remove(stuck);
  fs::remove(loop);
}

TEST(Cli, RunOptimized) {
  const Cli r = cli("run --optimized " + kCorpus + "/running.gtl");
  EXPECT_EQ(r.status, 2);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j.at("optimized").at("answer").at("label").at("blamed"), "u2");
  EXPECT_LT(j.at("optimized").at("metrics").at("flat_checks").get<int>(),
            j.at("original").at("metrics").at("flat_checks").get<int>());
}

TEST(Cli, Analyze) {
  const Json u1 = Json::parse(cli("analyze --module u1 --emit blame " + kCorpus + "/running.gtl").out);
  const auto labels = u1.at("labels").get<std::vector<BlameLabel>>();
  EXPECT_NE(std::find(labels.begin(), labels.end(), BlameLabel{Party{"t1"}, Party{"u1"}}), labels.end());
  EXPECT_EQ(std::find(labels.begin(), labels.end(), BlameLabel{Party{"u1"}, Party{"t1"}}), labels.end());

  const Json t1 = Json::parse(cli("analyze --module t1 --emit blame " + kCorpus + "/running.gtl").out);
  for (const auto& l : t1.at("labels")) EXPECT_NE(l.at("blamed"), "t1");

  const Json one = Json::parse(cli("analyze --module main --emit blame " + kCorpus + "/trivial.gtl").out);
  EXPECT_TRUE(one.at("labels").empty());

  EXPECT_EQ(cli("analyze --module ghost " + kCorpus + "/running.gtl").status, 1);
  const Json all = Json::parse(cli("analyze " + kCorpus + "/running.gtl").out);
  EXPECT_EQ(all.at("verdicts").size(), 4u);
}

TEST(Cli, OptimizeEmitsThePrintedProgram) {
  const Cli r = cli("optimize --trust-typed false --emit optimized " + kCorpus + "/running.gtl");
  EXPECT_EQ(r.status, 0);
  auto e = parse_con(r.out);
  ASSERT_TRUE(e) << r.out;
  EXPECT_EQ(count_monitors(**e), 1u);
  const Json j = Json::parse(cli("optimize " + kCorpus + "/running.gtl").out);
  EXPECT_EQ(j.at("report").at("removed"), 1);
  EXPECT_EQ(j.at("report").at("weakened"), 1);
}

TEST(Cli, JsonFileMatchesStdout) {
  const fs::path json = fs::temp_directory_path() / ("gtlc_" + std::to_string(::getpid()) + ".json");
  const Cli r = cli("run --json " + json.string() + " " + kCorpus + "/trivial.gtl");
  EXPECT_EQ(Json::parse(read_file(json)), Json::parse(r.out));
  fs::remove(json);
}

}  // namespace
}  // namespace gtlc
