#include "gtlc/symbolic_eval.hpp"

#include <deque>

#include "gtlc/bench.hpp"
#include "gtlc/optimizer.hpp"
#include "gtlc/translate.hpp"
#include "support.hpp"

namespace gtlc {
namespace {

using symbolic::AbsValue;
using symbolic::Machine;
using symbolic::State;
using testing::con;
using testing::kRunning;
using testing::program;

BlameLabel label(const char* blamed, const char* holder) { return BlameLabel{Party{blamed}, Party{holder}}; }

Refinements bits(std::initializer_list<Refinement> rs) {
  Refinements r;
  for (auto x : rs) r.bits |= static_cast<std::uint8_t>(x);
  return r;
}

TEST(Refine, Examples) {
  EXPECT_EQ(refine({}, Predicate::IsInt, true), bits({Refinement::IsInt}));
  EXPECT_EQ(refine(bits({Refinement::IsInt}), Predicate::IsInt, false), std::nullopt);
  EXPECT_EQ(refine(bits({Refinement::IsInt}), Predicate::IsBool, true), std::nullopt);
}

TEST(Refine, NegativeFactsAccumulate) {
  auto r = refine({}, Predicate::IsInt, false);
  ASSERT_TRUE(r);
  EXPECT_FALSE(r->may_be_int());
  EXPECT_TRUE(r->may_be_bool());
  r = refine(*r, Predicate::IsFn, false);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, bits({Refinement::IsBool}));
  EXPECT_EQ(refine(*r, Predicate::IsBool, false), std::nullopt);
}

TEST(Refine, PositiveFactSubsumesNegativeOnes) {
  auto r = refine(bits({Refinement::NotInt}), Predicate::IsFn, true);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, bits({Refinement::IsFn}));
  EXPECT_EQ(refine(*r, Predicate::IsBool, false), r);
}

TEST(Refine, ConsistentWithConcreteMembership) {
  // Exhaustive: a refinement admits a concrete kind iff every fact added
  // along the way holds for it.
  const Predicate preds[] = {Predicate::IsInt, Predicate::IsBool, Predicate::IsFn};
  for (int kind = 0; kind < 3; ++kind) {
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        const Predicate pa = preds[a % 3], pb = preds[b % 3];
        const bool oa = a < 3, ob = b < 3;
        const bool holds = ((static_cast<int>(pa) == kind) == oa) && ((static_cast<int>(pb) == kind) == ob);
        auto r = refine({}, pa, oa);
        if (r) r = refine(*r, pb, ob);
        const bool admitted =
            r && (kind == 0 ? r->may_be_int() : kind == 1 ? r->may_be_bool() : r->may_be_fn());
        EXPECT_EQ(admitted, holds) << kind << " " << a << " " << b;
      }
    }
  }
}

TEST(Refine, Printing) {
  EXPECT_EQ(to_string(Refinements{}), "{}");
  EXPECT_EQ(to_string(bits({Refinement::IsInt})), "{is-int}");
}

TEST(Analyze, SlicedRunningExampleForU1) {
  const BlameSet b = analyze(compile_program(slice_for_module(program(kRunning), Party{"u1"})).root);
  EXPECT_FALSE(b.exhausted);
  EXPECT_TRUE(b.labels.count(label("t1", "u1")));
  EXPECT_FALSE(b.labels.count(label("u1", "t1")));
}

TEST(Analyze, PassingFlatCheckHasNoBlame) {
  const BlameSet b = analyze(con("(mon (t1 u1) int? 5)"));
  EXPECT_TRUE(b.labels.empty());
  EXPECT_FALSE(b.exhausted);
}

TEST(Analyze, SliceForU2ContainsTheConcreteBlame) {
  const SurfaceProgram p = program(kRunning);
  const RunResult concrete = eval(compile_program(p).root);
  ASSERT_TRUE(concrete.answer.is_blame());
  const BlameSet b = analyze(compile_program(slice_for_module(p, concrete.answer.label.blamed)).root);
  EXPECT_TRUE(b.contains(concrete.answer.label));
}

TEST(Analyze, FullProgramIsExact) {
  const BlameSet b = analyze(compile_program(program(kRunning)).root);
  EXPECT_EQ(b.labels, (std::set<BlameLabel>{label("u2", "t1")}));
}

TEST(Analyze, OpaqueTestTakesBothBranches) {
  const BlameSet b = analyze(con("(if (int? opaque) (mon (a b) int? #t) (mon (c d) int? #t))"));
  EXPECT_EQ(b.labels, (std::set<BlameLabel>{label("a", "b"), label("c", "d")}));
}

TEST(Analyze, RefinementPrunesContradictoryPaths) {
  const BlameSet b =
      analyze(con("((λ (x) (if (int? x) (mon (a b) int? x) (mon (c d) bool? x))) (mon (e f) any/c opaque))"));
  EXPECT_TRUE(b.labels.count(label("c", "d")));
  EXPECT_FALSE(b.labels.count(label("a", "b")));
}

TEST(Analyze, EscapedWrapperIsExercised) {
  // Unknown code may call g with anything, blaming its caller, and g's own
  // range is then checked.
  const BlameSet b = analyze(con("(let [g (mon (t1 u1) (-> int? int?) (λ (x) #t))] opaque)"));
  EXPECT_EQ(b.labels, (std::set<BlameLabel>{label("u1", "t1"), label("t1", "u1")}));
}

TEST(Analyze, OpaqueOperatorMayBeANonFunction) {
  const BlameSet b = analyze(con("(mon (a b) (-> int? int?) opaque)"));
  EXPECT_TRUE(b.labels.count(label("a", "b")));
}

TEST(Analyze, StateCapReportsExhaustion) {
  const BlameSet b = analyze(compile_program(program(kRunning)).root, 3);
  EXPECT_TRUE(b.exhausted);
  EXPECT_TRUE(b.contains(label("main", "nobody")));
}

TEST(Analyze, DivergingProgramsTerminate) {
  const BlameSet b = analyze(con("((λ (x) (x x)) (λ (x) (x x)))"));
  EXPECT_FALSE(b.exhausted);
  EXPECT_TRUE(b.labels.empty());
}

TEST(Analyze, CorpusNeedsNoCap) {
  for (const auto& entry : discover_corpus(GTLC_CORPUS)) {
    for (const auto& c : entry.configurations) {
      const SurfaceProgram p = program(read_file(c.path));
      for (const auto& m : p.modules) {
        const BlameSet b = analyze(compile_program(slice_for_module(p, m.name)).root,
                                   std::numeric_limits<std::size_t>::max());
        EXPECT_FALSE(b.exhausted);
        EXPECT_LT(b.states, 100000u) << c.path << " " << m.name.name;
      }
    }
  }
}

TEST(Analyze, SlicingOverApproximatesTheFullProgram) {
  for (const auto& entry : discover_corpus(GTLC_CORPUS)) {
    for (const auto& c : entry.configurations) {
      const SurfaceProgram p = program(read_file(c.path));
      const BlameSet full = analyze(compile_program(p).root);
      for (const auto& m : p.modules) {
        const BlameSet sliced = analyze(compile_program(slice_for_module(p, m.name)).root);
        for (const auto& l : full.labels) {
          if (l.blamed == m.name) EXPECT_TRUE(sliced.contains(l)) << c.path << " " << to_string(l);
        }
      }
    }
  }
}

// Steps from `start` through the shared store, collecting blames and
// returned values, up to `limit` states.
struct Exploration {
  std::set<BlameLabel> blames;
  std::vector<State> seen;
};

Exploration explore(Machine& m, std::vector<State> start, std::size_t limit = 200) {
  Exploration out;
  std::deque<State> work(start.begin(), start.end());
  while (!work.empty() && out.seen.size() < limit) {
    const State s = work.front();
    work.pop_front();
    if (std::find(out.seen.begin(), out.seen.end(), s) != out.seen.end()) continue;
    out.seen.push_back(s);
    const auto st = m.step(s);
    out.blames.insert(st.blames.begin(), st.blames.end());
    work.insert(work.end(), st.next.begin(), st.next.end());
  }
  return out;
}

AbsValue only_result(Machine& m) {
  m.run();
  const auto rs = m.results();
  if (rs.size() != 1) throw std::logic_error("expected one result");
  return rs.front();
}

TEST(Havoc, GuardedFunctionIsAppliedToAnOpaqueArgument) {
  Machine m(con("(mon (t1 u1) (-> int? int?) (λ (x) x))"), kDefaultStateCap);
  const AbsValue g = only_result(m);
  ASSERT_EQ(g.tag, AbsValue::Tag::Guarded);
  const auto info = m.guard_info(g);
  ASSERT_TRUE(info);
  EXPECT_EQ(info->first, Contract::arrow(Contract::flat_int(), Contract::flat_int()));
  EXPECT_EQ(info->second, label("t1", "u1"));

  const auto next = m.havoc(g);
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(next[0].mode, State::Mode::Apply);
  EXPECT_EQ(next[0].value, g);
  EXPECT_TRUE(next[0].arg.is_opaque());

  // The domain check branches on (int? •).
  const auto st = m.step(next[0]);
  EXPECT_EQ(st.blames, std::vector<BlameLabel>{label("u1", "t1")});
  bool narrowed = false;
  for (const auto& s : st.next) {
    narrowed |= s.mode == State::Mode::Return && s.value == AbsValue::opaque(bits({Refinement::IsInt}));
  }
  EXPECT_TRUE(narrowed);
}

TEST(Havoc, FirstOrderValuesAreNotApplied) {
  Machine m(con("5"), kDefaultStateCap);
  const AbsValue v = only_result(m);
  EXPECT_EQ(m.describe(v), "5");
  EXPECT_TRUE(m.havoc(v).empty());
}

TEST(Havoc, DomainAndRangeOutcomes) {
  Machine m(con("(mon (t u) (-> bool? int?) (λ (x) 7))"), kDefaultStateCap);
  const AbsValue g = only_result(m);
  const Exploration e = explore(m, m.havoc(g));
  // The unknown caller is the negative party; its domain violation is kept.
  EXPECT_EQ(e.blames, (std::set<BlameLabel>{label("u", "t")}));
  bool returned_int = false;
  for (const auto& s : e.seen) {
    returned_int |= s.mode == State::Mode::Return && s.value.tag == AbsValue::Tag::Const && m.describe(s.value) == "7";
  }
  EXPECT_TRUE(returned_int);
}

TEST(Havoc, EscapedResultsAreHavockedInTurn) {
  // g returns a function that breaks its contract only when called.
  Machine m(con("(mon (t u) (-> int? (-> int? int?)) (λ (x) (λ (y) #f)))"), kDefaultStateCap);
  const AbsValue g = only_result(m);
  const Exploration e = explore(m, m.havoc(g), 1000);
  EXPECT_TRUE(e.blames.count(label("t", "u")));
}

TEST(Machine, RunMatchesAnalyze) {
  const ConPtr e = compile_program(program(kRunning)).root;
  Machine m(e, kDefaultStateCap);
  const BlameSet a = m.run();
  const BlameSet b = analyze(e);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.states, b.states);
}

}  // namespace
}  // namespace gtlc
